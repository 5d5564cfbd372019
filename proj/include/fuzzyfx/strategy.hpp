#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "fuzzyfx/fuzzy.hpp"
#include "fuzzyfx/indicators.hpp"
#include "fuzzyfx/market_data.hpp"

namespace fuzzyfx {

enum class Signal { Neutral, Buy, Sell };
enum class IndicatorKind { Rsi, Cci, Sto };

std::string_view to_string(Signal s) noexcept;
std::string_view to_string(IndicatorKind k) noexcept;

struct StochSetting {
  int k_period = 14;
  int d_period = 7;
  int slowing = 7;

  bool operator==(const StochSetting&) const = default;
};

/// Defuzzified `res` below buy_below is Buy, above sell_above is Sell; the
/// closed interval between them is Neutral.
struct Thresholds {
  double buy_below = 0.4;
  double sell_above = 0.6;

  bool operator==(const Thresholds&) const = default;
};

/// Oversold / overbought levels for the crossing baselines.
struct ClassicalBounds {
  double lower = 30.0;
  double upper = 70.0;

  bool operator==(const ClassicalBounds&) const = default;
};

TermSet default_term_set(IndicatorKind kind);
TermSet default_output_term_set();

/// Twelve rules shared by the three systems, inputs ordered fastest to
/// slowest period: unanimity, two-of-three agreement with a neutral third,
/// and three contradiction cases that resolve to neutral.
std::vector<FuzzyRule> default_rule_base();

struct StrategyConfig {
  std::array<int, 3> rsi_periods{9, 14, 21};
  std::array<int, 3> cci_periods{9, 14, 21};
  std::array<StochSetting, 3> stoch_settings{{{5, 3, 3}, {14, 7, 7}, {21, 14, 14}}};

  Thresholds rsi_thresholds{0.4, 0.6};
  Thresholds cci_thresholds{0.4, 0.6};
  Thresholds sto_thresholds{0.2, 0.8};

  TermSet rsi_terms = default_term_set(IndicatorKind::Rsi);
  TermSet cci_terms = default_term_set(IndicatorKind::Cci);
  TermSet sto_terms = default_term_set(IndicatorKind::Sto);
  TermSet output_terms = default_output_term_set();
  std::vector<FuzzyRule> rules = default_rule_base();
  std::size_t grid_points = kDefaultGridPoints;

  int classic_rsi_period = 14;
  int classic_cci_period = 14;
  StochSetting classic_sto{14, 7, 7};
  ClassicalBounds rsi_classic{30.0, 70.0};
  ClassicalBounds cci_classic{-100.0, 100.0};
  ClassicalBounds sto_classic{20.0, 80.0};

  const Thresholds& thresholds(IndicatorKind kind) const;
  const TermSet& terms(IndicatorKind kind) const;
  const ClassicalBounds& classical_bounds(IndicatorKind kind) const;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  bool operator==(const StrategyConfig&) const = default;
};

Signal threshold_signal(double res, const Thresholds& th) noexcept;

/// ≥2 Buy → Buy, ≥2 Sell → Sell, anything else Neutral.
Signal majority_vote(Signal rsi, Signal cci, Signal sto) noexcept;

/// The three fuzzy systems built from one configuration.
class FuzzyEnsemble {
 public:
  explicit FuzzyEnsemble(const StrategyConfig& cfg);

  const FuzzySystem& system(IndicatorKind kind) const;

  struct Outcome {
    Signal signal = Signal::Neutral;
    std::optional<FuzzyVerdict> verdict;  // empty when no rule fired
  };
  Outcome evaluate(IndicatorKind kind, const std::array<double, 3>& inputs) const;

 private:
  std::array<Thresholds, 3> thresholds_;
  std::vector<FuzzySystem> systems_;
};

/// One-off evaluation; builds the system from cfg each call.
FuzzyEnsemble::Outcome fuzzy_signal(IndicatorKind kind, const std::array<double, 3>& inputs,
                                    const StrategyConfig& cfg);

/// Crossing semantics: Buy when the value moves from below `lower` at bar-1
/// to at or above it at bar; Sell when it moves from above `upper` to at or
/// below it. Throws InsufficientHistory if bar-1 is undefined.
Signal classical_signal(IndicatorKind kind, const IndicatorSeries& series, std::size_t bar,
                        const StrategyConfig& cfg);
/// Stochastic form: crosses on slow %K, tradable once %D is also defined.
Signal classical_signal(const StochasticSeries& series, std::size_t bar, const StrategyConfig& cfg);

/// The nine fuzzy inputs (three periods of each oscillator) for one series.
struct EnsembleIndicators {
  std::array<IndicatorSeries, 3> rsi;
  std::array<IndicatorSeries, 3> cci;
  std::array<IndicatorSeries, 3> sto;  // slow %K

  EnsembleIndicators(const CandleSeries& candles, const StrategyConfig& cfg);

  // First bar where all nine are defined.
  std::size_t warmup() const noexcept;
  std::array<double, 3> inputs(IndicatorKind kind, std::size_t bar) const;
};

/// Minimum number of bars before ensemble_signal can be evaluated.
std::size_t ensemble_warmup(const StrategyConfig& cfg);

/// Full pipeline for one bar, using only candles[0..bar].
Signal ensemble_signal(const CandleSeries& candles, std::size_t bar, const StrategyConfig& cfg);

enum class StrategyKind { Ensemble, RsiFuzzy, CciFuzzy, StoFuzzy, RsiClassic, CciClassic, StoClassic };

inline constexpr std::array<StrategyKind, 7> kStrategyKinds = {
    StrategyKind::Ensemble,   StrategyKind::RsiFuzzy,   StrategyKind::CciFuzzy,  StrategyKind::StoFuzzy,
    StrategyKind::RsiClassic, StrategyKind::CciClassic, StrategyKind::StoClassic};

std::string_view to_string(StrategyKind kind) noexcept;
std::optional<StrategyKind> parse_strategy_kind(std::string_view name) noexcept;

/// Precomputed signal sequence for one strategy over a whole series. Every
/// indicator involved is causal, so the signal at bar t depends only on
/// candles up to t. Bars without enough history are Neutral.
class Strategy {
 public:
  Strategy(StrategyKind kind, const CandleSeries& candles, const StrategyConfig& cfg);

  StrategyKind kind() const noexcept { return kind_; }
  Signal signal(std::size_t bar) const;
  Signal operator()(std::size_t bar) const { return signal(bar); }
  const std::vector<Signal>& signals() const noexcept { return signals_; }
  // Bars where the fuzzy engine fired no rule (mapped to Neutral).
  std::size_t no_rule_fired() const noexcept { return no_rule_fired_; }

 private:
  StrategyKind kind_;
  std::vector<Signal> signals_;
  std::size_t no_rule_fired_ = 0;
};

}  // namespace fuzzyfx
