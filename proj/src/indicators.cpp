#include "fuzzyfx/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fuzzyfx/errors.hpp"

namespace fuzzyfx {

namespace {

void require_period(int period, const char* what) {
  if (period < 1) throw InsufficientData(std::string(what) + ": period must be >= 1");
}

void require_length(std::size_t have, std::size_t need, const std::string& what) {
  if (have < need)
    throw InsufficientData(what + ": need " + std::to_string(need) + " bars, have " + std::to_string(have));
}

}  // namespace

double IndicatorSeries::at(std::size_t bar) const {
  if (!defined(bar)) throw std::out_of_range(name + ": no value at bar " + std::to_string(bar));
  return values[bar - first];
}

IndicatorSeries sma(std::span<const double> values, int period) {
  require_period(period, "sma");
  const auto p = static_cast<std::size_t>(period);
  require_length(values.size(), p, "sma(" + std::to_string(period) + ")");

  IndicatorSeries out{"sma", {period}, p - 1, {}};
  out.values.reserve(values.size() - p + 1);
  for (std::size_t i = p - 1; i < values.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = i + 1 - p; j <= i; ++j) sum += values[j];
    out.values.push_back(sum / static_cast<double>(p));
  }
  return out;
}

IndicatorSeries rsi(std::span<const double> closes, int period) {
  require_period(period, "rsi");
  const auto p = static_cast<std::size_t>(period);
  require_length(closes.size(), p + 1, "rsi(" + std::to_string(period) + ")");

  auto value = [](double avg_gain, double avg_loss) {
    if (avg_loss == 0.0) return avg_gain == 0.0 ? 50.0 : 100.0;
    return 100.0 - 100.0 / (1.0 + avg_gain / avg_loss);
  };

  IndicatorSeries out{"rsi", {period}, p, {}};
  out.values.reserve(closes.size() - p);

  double avg_gain = 0.0;
  double avg_loss = 0.0;
  for (std::size_t i = 1; i <= p; ++i) {
    const double delta = closes[i] - closes[i - 1];
    avg_gain += std::max(delta, 0.0);
    avg_loss += std::max(-delta, 0.0);
  }
  avg_gain /= static_cast<double>(p);
  avg_loss /= static_cast<double>(p);
  out.values.push_back(value(avg_gain, avg_loss));

  const double n = static_cast<double>(p);
  for (std::size_t i = p + 1; i < closes.size(); ++i) {
    const double delta = closes[i] - closes[i - 1];
    avg_gain = (avg_gain * (n - 1.0) + std::max(delta, 0.0)) / n;
    avg_loss = (avg_loss * (n - 1.0) + std::max(-delta, 0.0)) / n;
    out.values.push_back(value(avg_gain, avg_loss));
  }
  return out;
}

IndicatorSeries cci(const CandleSeries& candles, int period) {
  require_period(period, "cci");
  const auto p = static_cast<std::size_t>(period);
  require_length(candles.size(), p, "cci(" + std::to_string(period) + ")");

  const auto tp = candles.typical_prices();
  const auto mean = sma(tp, period);

  IndicatorSeries out{"cci", {period}, p - 1, {}};
  out.values.reserve(mean.values.size());
  for (std::size_t i = p - 1; i < tp.size(); ++i) {
    const auto window = std::span<const double>(tp).subspan(i + 1 - p, p);
    const double m = mean.at(i);
    if (std::all_of(window.begin(), window.end(), [&](double x) { return x == window.front(); })) {
      out.values.push_back(0.0);
      continue;
    }
    double dev = 0.0;
    for (double x : window) dev += std::abs(x - m);
    dev /= static_cast<double>(p);
    out.values.push_back((tp[i] - m) / (0.015 * dev));
  }
  return out;
}

IndicatorSeries stochastic_k(const CandleSeries& candles, int k_period, int slowing) {
  require_period(k_period, "stochastic %K");
  require_period(slowing, "stochastic slowing");
  const auto kp = static_cast<std::size_t>(k_period);
  require_length(candles.size(), kp + static_cast<std::size_t>(slowing) - 1,
                 "stochastic %K(" + std::to_string(k_period) + "," + std::to_string(slowing) + ")");

  std::vector<double> raw;
  raw.reserve(candles.size() - kp + 1);
  for (std::size_t i = kp - 1; i < candles.size(); ++i) {
    double hh = candles[i + 1 - kp].high;
    double ll = candles[i + 1 - kp].low;
    for (std::size_t j = i + 2 - kp; j <= i; ++j) {
      hh = std::max(hh, candles[j].high);
      ll = std::min(ll, candles[j].low);
    }
    raw.push_back(hh == ll ? 50.0 : 100.0 * (candles[i].close - ll) / (hh - ll));
  }

  auto slow = sma(raw, slowing);
  slow.name = "stochastic_k";
  slow.params = {k_period, slowing};
  slow.first += kp - 1;
  return slow;
}

StochasticSeries stochastic(const CandleSeries& candles, int k_period, int d_period, int slowing) {
  require_period(k_period, "stochastic %K");
  require_period(d_period, "stochastic %D");
  require_period(slowing, "stochastic slowing");
  require_length(candles.size(), static_cast<std::size_t>(k_period + slowing + d_period) - 2,
                 "stochastic(" + std::to_string(k_period) + "," + std::to_string(d_period) + "," +
                     std::to_string(slowing) + ")");

  const std::vector<int> params{k_period, d_period, slowing};
  auto slow = stochastic_k(candles, k_period, slowing);
  slow.params = params;

  auto d = sma(slow.values, d_period);
  d.name = "stochastic_d";
  d.params = params;
  d.first += slow.first;

  return {std::move(slow), std::move(d)};
}

}  // namespace fuzzyfx
