#include "fuzzyfx/strategy.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fuzzyfx/errors.hpp"

namespace fuzzyfx {

namespace {

constexpr std::size_t slot(IndicatorKind k) noexcept { return static_cast<std::size_t>(k); }

TermSet make_terms(double lo, double hi, MembershipFunction buy, MembershipFunction neutral,
                   MembershipFunction sell) {
  return TermSet{lo, hi, {buy, neutral, sell}};
}

std::size_t stoch_k_warmup(const StochSetting& s) {
  return static_cast<std::size_t>(s.k_period + s.slowing) - 2;
}

void check_period(int p, const std::string& what) {
  if (p < 1) throw ConfigError(what + " must be >= 1");
}

void check_thresholds(const Thresholds& th, const std::string& what) {
  if (!(th.buy_below > 0.0 && th.buy_below <= th.sell_above && th.sell_above < 1.0))
    throw ConfigError(what + " thresholds must satisfy 0 < buy_below <= sell_above < 1");
}

Signal crossing(double prev, double cur, const ClassicalBounds& bounds) noexcept {
  if (prev < bounds.lower && cur >= bounds.lower) return Signal::Buy;
  if (prev > bounds.upper && cur <= bounds.upper) return Signal::Sell;
  return Signal::Neutral;
}

}  // namespace

std::string_view to_string(Signal s) noexcept {
  switch (s) {
    case Signal::Buy:
      return "buy";
    case Signal::Sell:
      return "sell";
    case Signal::Neutral:
      return "neutral";
  }
  return "?";
}

std::string_view to_string(IndicatorKind k) noexcept {
  switch (k) {
    case IndicatorKind::Rsi:
      return "rsi";
    case IndicatorKind::Cci:
      return "cci";
    case IndicatorKind::Sto:
      return "sto";
  }
  return "?";
}

TermSet default_term_set(IndicatorKind kind) {
  switch (kind) {
    case IndicatorKind::Rsi:
      return make_terms(0, 100, {0, 0, 25, 40}, {25, 40, 60, 75}, {60, 75, 100, 100});
    case IndicatorKind::Cci:
      return make_terms(-250, 250, {-250, -250, -150, -80}, {-150, -80, 80, 150}, {80, 150, 250, 250});
    case IndicatorKind::Sto:
      return make_terms(0, 100, {0, 0, 15, 30}, {15, 30, 70, 85}, {70, 85, 100, 100});
  }
  throw std::logic_error("unknown indicator kind");
}

TermSet default_output_term_set() {
  return make_terms(0, 1, {0, 0, 0.2, 0.4}, {0.3, 0.45, 0.55, 0.7}, {0.6, 0.8, 1, 1});
}

std::vector<FuzzyRule> default_rule_base() {
  constexpr auto B = Term::Buy;
  constexpr auto N = Term::Neutral;
  constexpr auto S = Term::Sell;
  return {
      {{B, B, B}, B}, {{S, S, S}, S}, {{N, N, N}, N},
      {{B, B, N}, B}, {{B, N, B}, B}, {{N, B, B}, B},
      {{S, S, N}, S}, {{S, N, S}, S}, {{N, S, S}, S},
      {{B, B, S}, N}, {{S, S, B}, N}, {{B, S, N}, N},
  };
}

const Thresholds& StrategyConfig::thresholds(IndicatorKind kind) const {
  switch (kind) {
    case IndicatorKind::Rsi:
      return rsi_thresholds;
    case IndicatorKind::Cci:
      return cci_thresholds;
    case IndicatorKind::Sto:
      return sto_thresholds;
  }
  throw std::logic_error("unknown indicator kind");
}

const TermSet& StrategyConfig::terms(IndicatorKind kind) const {
  switch (kind) {
    case IndicatorKind::Rsi:
      return rsi_terms;
    case IndicatorKind::Cci:
      return cci_terms;
    case IndicatorKind::Sto:
      return sto_terms;
  }
  throw std::logic_error("unknown indicator kind");
}

const ClassicalBounds& StrategyConfig::classical_bounds(IndicatorKind kind) const {
  switch (kind) {
    case IndicatorKind::Rsi:
      return rsi_classic;
    case IndicatorKind::Cci:
      return cci_classic;
    case IndicatorKind::Sto:
      return sto_classic;
  }
  throw std::logic_error("unknown indicator kind");
}

void StrategyConfig::validate() const {
  for (int p : rsi_periods) check_period(p, "rsi period");
  for (int p : cci_periods) check_period(p, "cci period");
  for (const auto& s : stoch_settings) {
    check_period(s.k_period, "stochastic %K period");
    check_period(s.d_period, "stochastic %D period");
    check_period(s.slowing, "stochastic slowing");
  }
  check_period(classic_rsi_period, "classic rsi period");
  check_period(classic_cci_period, "classic cci period");
  check_period(classic_sto.k_period, "classic stochastic %K period");
  check_period(classic_sto.d_period, "classic stochastic %D period");
  check_period(classic_sto.slowing, "classic stochastic slowing");
  check_thresholds(rsi_thresholds, "rsi");
  check_thresholds(cci_thresholds, "cci");
  check_thresholds(sto_thresholds, "sto");
  for (const auto* b : {&rsi_classic, &cci_classic, &sto_classic})
    if (!(b->lower < b->upper)) throw ConfigError("classical bounds must satisfy lower < upper");
  // FuzzySystem checks term sets, rule count and duplicates.
  FuzzyEnsemble{*this};
}

Signal threshold_signal(double res, const Thresholds& th) noexcept {
  if (res < th.buy_below) return Signal::Buy;
  if (res > th.sell_above) return Signal::Sell;
  return Signal::Neutral;
}

Signal majority_vote(Signal rsi, Signal cci, Signal sto) noexcept {
  const std::array<Signal, 3> votes{rsi, cci, sto};
  const auto buys = std::count(votes.begin(), votes.end(), Signal::Buy);
  const auto sells = std::count(votes.begin(), votes.end(), Signal::Sell);
  if (buys >= 2) return Signal::Buy;
  if (sells >= 2) return Signal::Sell;
  return Signal::Neutral;
}

FuzzyEnsemble::FuzzyEnsemble(const StrategyConfig& cfg)
    : thresholds_{cfg.rsi_thresholds, cfg.cci_thresholds, cfg.sto_thresholds} {
  systems_.reserve(3);
  for (auto kind : {IndicatorKind::Rsi, IndicatorKind::Cci, IndicatorKind::Sto}) {
    const auto& ts = cfg.terms(kind);
    systems_.emplace_back(std::array<TermSet, 3>{ts, ts, ts}, cfg.output_terms, cfg.rules, cfg.grid_points);
  }
}

const FuzzySystem& FuzzyEnsemble::system(IndicatorKind kind) const { return systems_[slot(kind)]; }

FuzzyEnsemble::Outcome FuzzyEnsemble::evaluate(IndicatorKind kind, const std::array<double, 3>& inputs) const {
  Outcome out;
  out.verdict = systems_[slot(kind)].try_infer(inputs);
  if (out.verdict) out.signal = threshold_signal(out.verdict->res, thresholds_[slot(kind)]);
  return out;
}

FuzzyEnsemble::Outcome fuzzy_signal(IndicatorKind kind, const std::array<double, 3>& inputs,
                                    const StrategyConfig& cfg) {
  return FuzzyEnsemble{cfg}.evaluate(kind, inputs);
}

Signal classical_signal(IndicatorKind kind, const IndicatorSeries& series, std::size_t bar,
                        const StrategyConfig& cfg) {
  if (bar == 0 || !series.defined(bar - 1) || !series.defined(bar))
    throw InsufficientHistory(series.name + ": bar " + std::to_string(bar) + " lacks a defined predecessor");
  return crossing(series.at(bar - 1), series.at(bar), cfg.classical_bounds(kind));
}

Signal classical_signal(const StochasticSeries& series, std::size_t bar, const StrategyConfig& cfg) {
  if (bar == 0 || !series.d.defined(bar - 1))
    throw InsufficientHistory("stochastic: bar " + std::to_string(bar) + " lacks a defined %D predecessor");
  return classical_signal(IndicatorKind::Sto, series.k, bar, cfg);
}

EnsembleIndicators::EnsembleIndicators(const CandleSeries& candles, const StrategyConfig& cfg) {
  const auto closes = candles.closes();
  for (std::size_t i = 0; i < 3; ++i) {
    rsi[i] = fuzzyfx::rsi(closes, cfg.rsi_periods[i]);
    cci[i] = fuzzyfx::cci(candles, cfg.cci_periods[i]);
    const auto& s = cfg.stoch_settings[i];
    sto[i] = stochastic_k(candles, s.k_period, s.slowing);
  }
}

std::size_t EnsembleIndicators::warmup() const noexcept {
  std::size_t w = 0;
  for (const auto* group : {&rsi, &cci, &sto})
    for (const auto& s : *group) w = std::max(w, s.first);
  return w;
}

std::array<double, 3> EnsembleIndicators::inputs(IndicatorKind kind, std::size_t bar) const {
  const auto& group = kind == IndicatorKind::Rsi ? rsi : kind == IndicatorKind::Cci ? cci : sto;
  return {group[0].at(bar), group[1].at(bar), group[2].at(bar)};
}

std::size_t ensemble_warmup(const StrategyConfig& cfg) {
  std::size_t w = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    w = std::max(w, static_cast<std::size_t>(cfg.rsi_periods[i]));
    w = std::max(w, static_cast<std::size_t>(cfg.cci_periods[i]) - 1);
    w = std::max(w, stoch_k_warmup(cfg.stoch_settings[i]));
  }
  return w;
}

Signal ensemble_signal(const CandleSeries& candles, std::size_t bar, const StrategyConfig& cfg) {
  if (bar >= candles.size()) throw InsufficientHistory("bar " + std::to_string(bar) + " is past the series end");
  if (bar < ensemble_warmup(cfg))
    throw InsufficientHistory("bar " + std::to_string(bar) + " precedes the ensemble warm-up of " +
                              std::to_string(ensemble_warmup(cfg)) + " bars");
  CandleSeries prefix{candles.symbol, candles.timeframe,
                      {candles.candles.begin(), candles.candles.begin() + static_cast<std::ptrdiff_t>(bar + 1)}};
  const EnsembleIndicators ind(prefix, cfg);
  const FuzzyEnsemble ensemble(cfg);
  return majority_vote(ensemble.evaluate(IndicatorKind::Rsi, ind.inputs(IndicatorKind::Rsi, bar)).signal,
                       ensemble.evaluate(IndicatorKind::Cci, ind.inputs(IndicatorKind::Cci, bar)).signal,
                       ensemble.evaluate(IndicatorKind::Sto, ind.inputs(IndicatorKind::Sto, bar)).signal);
}

std::string_view to_string(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::Ensemble:
      return "ensemble";
    case StrategyKind::RsiFuzzy:
      return "rsi-fuzzy";
    case StrategyKind::CciFuzzy:
      return "cci-fuzzy";
    case StrategyKind::StoFuzzy:
      return "sto-fuzzy";
    case StrategyKind::RsiClassic:
      return "rsi-classic";
    case StrategyKind::CciClassic:
      return "cci-classic";
    case StrategyKind::StoClassic:
      return "sto-classic";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy_kind(std::string_view name) noexcept {
  for (auto k : kStrategyKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

Strategy::Strategy(StrategyKind kind, const CandleSeries& candles, const StrategyConfig& cfg)
    : kind_(kind), signals_(candles.size(), Signal::Neutral) {
  const std::size_t n = candles.size();

  auto run_fuzzy = [&](std::initializer_list<IndicatorKind> kinds) {
    if (n <= ensemble_warmup(cfg)) return;
    const EnsembleIndicators ind(candles, cfg);
    const FuzzyEnsemble ensemble(cfg);
    for (std::size_t bar = ind.warmup(); bar < n; ++bar) {
      std::array<Signal, 3> votes{};
      std::size_t v = 0;
      for (auto k : kinds) {
        const auto outcome = ensemble.evaluate(k, ind.inputs(k, bar));
        if (!outcome.verdict) ++no_rule_fired_;
        votes[v++] = outcome.signal;
      }
      signals_[bar] = v == 1 ? votes[0] : majority_vote(votes[0], votes[1], votes[2]);
    }
  };

  auto run_classic = [&](IndicatorKind k, const IndicatorSeries& series) {
    for (std::size_t bar = series.first + 1; bar < series.end(); ++bar)
      signals_[bar] = classical_signal(k, series, bar, cfg);
  };

  switch (kind) {
    case StrategyKind::Ensemble:
      run_fuzzy({IndicatorKind::Rsi, IndicatorKind::Cci, IndicatorKind::Sto});
      break;
    case StrategyKind::RsiFuzzy:
      run_fuzzy({IndicatorKind::Rsi});
      break;
    case StrategyKind::CciFuzzy:
      run_fuzzy({IndicatorKind::Cci});
      break;
    case StrategyKind::StoFuzzy:
      run_fuzzy({IndicatorKind::Sto});
      break;
    case StrategyKind::RsiClassic:
      if (n > static_cast<std::size_t>(cfg.classic_rsi_period))
        run_classic(IndicatorKind::Rsi, rsi(candles.closes(), cfg.classic_rsi_period));
      break;
    case StrategyKind::CciClassic:
      if (n >= static_cast<std::size_t>(cfg.classic_cci_period))
        run_classic(IndicatorKind::Cci, cci(candles, cfg.classic_cci_period));
      break;
    case StrategyKind::StoClassic: {
      const auto& s = cfg.classic_sto;
      if (n < static_cast<std::size_t>(s.k_period + s.slowing + s.d_period) - 2) break;
      const auto series = stochastic(candles, s.k_period, s.d_period, s.slowing);
      for (std::size_t bar = series.d.first + 1; bar < n; ++bar) signals_[bar] = classical_signal(series, bar, cfg);
      break;
    }
  }
}

Signal Strategy::signal(std::size_t bar) const { return bar < signals_.size() ? signals_[bar] : Signal::Neutral; }

}  // namespace fuzzyfx
