#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fuzzyfx/market_data.hpp"

namespace fuzzyfx {

/// An oscillator aligned to its source bars. values[i] belongs to bar
/// `first + i`; bars before `first` have no full lookback and no value.
struct IndicatorSeries {
  std::string name;
  std::vector<int> params;
  std::size_t first = 0;
  std::vector<double> values;

  // One past the last defined bar.
  std::size_t end() const noexcept { return first + values.size(); }
  bool defined(std::size_t bar) const noexcept { return bar >= first && bar < end(); }
  // Throws std::out_of_range for undefined bars.
  double at(std::size_t bar) const;
};

IndicatorSeries sma(std::span<const double> values, int period);

/// Wilder RSI. Seed averages are simple means over the first `period`
/// deltas; first value at bar `period`. Zero average loss gives 100, a flat
/// window (no gains, no losses) gives 50.
IndicatorSeries rsi(std::span<const double> closes, int period);

/// Lambert CCI on typical price with the 0.015 constant. A window whose
/// typical prices are all equal gives 0.
IndicatorSeries cci(const CandleSeries& candles, int period);

/// Slow %K alone: raw %K over `k_period` smoothed by an SMA of `slowing`.
/// First defined at bar k_period + slowing - 2.
IndicatorSeries stochastic_k(const CandleSeries& candles, int k_period, int slowing);

struct StochasticSeries {
  IndicatorSeries k;  // slow %K
  IndicatorSeries d;
};

/// raw %K over `k_period`, slowed by an SMA of `slowing`, %D an SMA of slow
/// %K over `d_period`. A flat high/low window gives raw %K = 50.
StochasticSeries stochastic(const CandleSeries& candles, int k_period, int d_period, int slowing);

}  // namespace fuzzyfx
