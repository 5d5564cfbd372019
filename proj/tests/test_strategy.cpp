#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"
#include "fuzzyfx/errors.hpp"
#include "fuzzyfx/strategy.hpp"
#include "oracles.hpp"

using namespace fuzzyfx;
using Catch::Matchers::WithinAbs;

namespace {

constexpr std::array<Signal, 3> kSignals = {Signal::Buy, Signal::Neutral, Signal::Sell};

IndicatorSeries series_of(std::string name, std::vector<double> values) {
  return IndicatorSeries{std::move(name), {14}, 0, std::move(values)};
}

Signal swapped(Signal s) {
  return s == Signal::Buy ? Signal::Sell : s == Signal::Sell ? Signal::Buy : Signal::Neutral;
}

}  // namespace

TEST_CASE("default rule base", "[strategy]") {
  const auto rules = default_rule_base();
  REQUIRE(rules.size() == 12);
  std::set<std::array<Term, 3>> antecedents;
  for (const auto& r : rules) antecedents.insert(r.antecedent);
  CHECK(antecedents.size() == 12);

  auto has = [&](std::array<Term, 3> a, Term c) {
    return std::find(rules.begin(), rules.end(), FuzzyRule{a, c}) != rules.end();
  };
  CHECK(has({Term::Buy, Term::Buy, Term::Buy}, Term::Buy));
  CHECK(has({Term::Sell, Term::Sell, Term::Sell}, Term::Sell));
  CHECK(has({Term::Neutral, Term::Neutral, Term::Neutral}, Term::Neutral));
  CHECK(has({Term::Neutral, Term::Buy, Term::Buy}, Term::Buy));
  CHECK(has({Term::Buy, Term::Sell, Term::Neutral}, Term::Neutral));
}

TEST_CASE("fuzzy signals per indicator", "[strategy]") {
  const StrategyConfig cfg;
  const auto center = fuzzy_signal(IndicatorKind::Rsi, {50, 50, 50}, cfg);
  CHECK(center.signal == Signal::Neutral);
  REQUIRE(center.verdict);
  CHECK_THAT(center.verdict->res, WithinAbs(0.5, 1e-6));

  const auto buy = fuzzy_signal(IndicatorKind::Rsi, {10, 12, 15}, cfg);
  CHECK(buy.signal == Signal::Buy);
  CHECK(buy.verdict->res < 0.4);

  const auto sell = fuzzy_signal(IndicatorKind::Sto, {95, 92, 90}, cfg);
  CHECK(sell.signal == Signal::Sell);
  CHECK(sell.verdict->res > 0.8);

  const auto cci_center = fuzzy_signal(IndicatorKind::Cci, {0, 0, 0}, cfg);
  CHECK(cci_center.signal == Signal::Neutral);

  // No rule fires for a (B, S, B) pattern: absorbed as Neutral.
  const auto none = fuzzy_signal(IndicatorKind::Rsi, {10, 90, 10}, cfg);
  CHECK(none.signal == Signal::Neutral);
  CHECK_FALSE(none.verdict.has_value());
}

TEST_CASE("threshold boundaries are neutral", "[strategy]") {
  const Thresholds rsi{0.4, 0.6};
  const Thresholds sto{0.2, 0.8};
  CHECK(threshold_signal(0.4, rsi) == Signal::Neutral);
  CHECK(threshold_signal(0.6, rsi) == Signal::Neutral);
  CHECK(threshold_signal(std::nextafter(0.4, 0.0), rsi) == Signal::Buy);
  CHECK(threshold_signal(std::nextafter(0.6, 1.0), rsi) == Signal::Sell);
  CHECK(threshold_signal(0.2, sto) == Signal::Neutral);
  CHECK(threshold_signal(0.8, sto) == Signal::Neutral);
  CHECK(threshold_signal(0.19, sto) == Signal::Buy);
  CHECK(threshold_signal(0.81, sto) == Signal::Sell);
}

TEST_CASE("classical crossings", "[strategy]") {
  const StrategyConfig cfg;
  CHECK(classical_signal(IndicatorKind::Rsi, series_of("rsi", {28.0, 31.5}), 1, cfg) == Signal::Buy);
  CHECK(classical_signal(IndicatorKind::Rsi, series_of("rsi", {45, 55}), 1, cfg) == Signal::Neutral);
  CHECK(classical_signal(IndicatorKind::Rsi, series_of("rsi", {20, 25}), 1, cfg) == Signal::Neutral);
  CHECK(classical_signal(IndicatorKind::Rsi, series_of("rsi", {71, 70}), 1, cfg) == Signal::Sell);
  CHECK(classical_signal(IndicatorKind::Cci, series_of("cci", {120, 90}), 1, cfg) == Signal::Sell);
  CHECK(classical_signal(IndicatorKind::Cci, series_of("cci", {-130, -99}), 1, cfg) == Signal::Buy);
  CHECK(classical_signal(IndicatorKind::Sto, series_of("k", {19, 21}), 1, cfg) == Signal::Buy);
  CHECK_THROWS_AS(classical_signal(IndicatorKind::Rsi, series_of("rsi", {28.0, 31.5}), 0, cfg), InsufficientHistory);

  IndicatorSeries late{"rsi", {14}, 10, {28, 31.5}};
  CHECK_THROWS_AS(classical_signal(IndicatorKind::Rsi, late, 10, cfg), InsufficientHistory);
  CHECK(classical_signal(IndicatorKind::Rsi, late, 11, cfg) == Signal::Buy);
}

TEST_CASE("majority vote truth table", "[strategy]") {
  int cases = 0;
  for (auto a : kSignals)
    for (auto b : kSignals)
      for (auto c : kSignals) {
        const int buys = (a == Signal::Buy) + (b == Signal::Buy) + (c == Signal::Buy);
        const int sells = (a == Signal::Sell) + (b == Signal::Sell) + (c == Signal::Sell);
        const Signal want = buys >= 2 ? Signal::Buy : sells >= 2 ? Signal::Sell : Signal::Neutral;
        CHECK(majority_vote(a, b, c) == want);
        CHECK(majority_vote(swapped(a), swapped(b), swapped(c)) == swapped(want));
        ++cases;
      }
  CHECK(cases == 27);
  CHECK(majority_vote(Signal::Buy, Signal::Buy, Signal::Neutral) == Signal::Buy);
  CHECK(majority_vote(Signal::Buy, Signal::Sell, Signal::Neutral) == Signal::Neutral);
  CHECK(majority_vote(Signal::Sell, Signal::Sell, Signal::Buy) == Signal::Sell);
}

TEST_CASE("ensemble on a flat market is neutral", "[strategy]") {
  const StrategyConfig cfg;
  const auto flat = fixtures::flat(60);
  for (std::size_t bar = ensemble_warmup(cfg); bar < flat.size(); ++bar)
    CHECK(ensemble_signal(flat, bar, cfg) == Signal::Neutral);
}

TEST_CASE("ensemble lookback", "[strategy]") {
  const StrategyConfig cfg;
  CHECK(ensemble_warmup(cfg) == 33);
  const auto s = fixtures::random_walk(8, 60);
  CHECK_THROWS_AS(ensemble_signal(s, 32, cfg), InsufficientHistory);
  CHECK_NOTHROW(ensemble_signal(s, 33, cfg));
  CHECK_THROWS_AS(ensemble_signal(s, 60, cfg), InsufficientHistory);
}

TEST_CASE("engineered oversold slide votes buy at the designed bar", "[strategy]") {
  const StrategyConfig cfg;
  const auto s = fixtures::Oversold::series();
  const std::size_t bar = fixtures::Oversold::kDesignedBar;

  // Stage 1: indicator oracles put RSI and slow %K on their buy plateaus.
  std::array<double, 3> rsi_in{}, sto_in{};
  for (std::size_t i = 0; i < 3; ++i) {
    rsi_in[i] = *oracle::rsi(s.closes(), cfg.rsi_periods[i])[bar];
    const auto& st = cfg.stoch_settings[i];
    sto_in[i] = *oracle::stochastic(s, st.k_period, st.d_period, st.slowing).k[bar];
    CHECK(rsi_in[i] <= cfg.rsi_terms[Term::Buy].c);
    CHECK(sto_in[i] <= cfg.sto_terms[Term::Buy].c);
  }
  // Stage 2: each fuzzy system lands below its buy threshold.
  CHECK(fuzzy_signal(IndicatorKind::Rsi, rsi_in, cfg).signal == Signal::Buy);
  CHECK(fuzzy_signal(IndicatorKind::Sto, sto_in, cfg).signal == Signal::Buy);
  // Stage 3: two buy votes carry the ensemble.
  CHECK(ensemble_signal(s, bar, cfg) == Signal::Buy);
  CHECK(Strategy(StrategyKind::Ensemble, s, cfg).signal(bar) == Signal::Buy);
  // Before the slide the market is flat and neutral.
  CHECK(ensemble_signal(s, fixtures::Oversold::kFlat - 1, cfg) == Signal::Neutral);
}

TEST_CASE("precomputed strategy equals per-bar prefix evaluation", "[strategy]") {
  const StrategyConfig cfg;
  for (std::uint64_t seed : {21u, 22u}) {
    const auto s = fixtures::random_walk(seed, 120, 1.1, 0.004);
    const Strategy ensemble(StrategyKind::Ensemble, s, cfg);
    for (std::size_t bar = 0; bar < s.size(); ++bar) {
      const Signal want = bar < ensemble_warmup(cfg) ? Signal::Neutral : ensemble_signal(s, bar, cfg);
      REQUIRE(ensemble.signal(bar) == want);
    }
  }
}

TEST_CASE("strategy names round-trip", "[strategy]") {
  for (auto k : kStrategyKinds) CHECK(parse_strategy_kind(to_string(k)) == k);
  CHECK_FALSE(parse_strategy_kind("bogus").has_value());
}

TEST_CASE("short series give neutral strategies", "[strategy]") {
  const StrategyConfig cfg;
  const auto s = fixtures::random_walk(3, 10);
  for (auto k : kStrategyKinds) {
    const Strategy st(k, s, cfg);
    for (std::size_t bar = 0; bar < s.size(); ++bar) CHECK(st.signal(bar) == Signal::Neutral);
  }
}

TEST_CASE("config validation", "[strategy]") {
  StrategyConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rsi_thresholds = {0.7, 0.3};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.sto_thresholds = {0.0, 0.8};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.cci_periods[1] = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.rules.pop_back();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.sto_classic = {80, 20};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
