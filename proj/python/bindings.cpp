#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fuzzyfx/backtest.hpp"
#include "fuzzyfx/cli.hpp"
#include "fuzzyfx/config.hpp"
#include "fuzzyfx/errors.hpp"
#include "fuzzyfx/report.hpp"

namespace py = pybind11;
using namespace fuzzyfx;

namespace {

void bind_errors(py::module_& m) {
  const auto& base = py::register_exception<Error>(m, "FuzzyfxError");
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<InsufficientData>(m, "InsufficientData", base);
  py::register_exception<InsufficientHistory>(m, "InsufficientHistory", base);
  py::register_exception<NoRuleFired>(m, "NoRuleFired", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<EmptySeries>(m, "EmptySeries", base);
}

void bind_market_data(py::module_& m) {
  py::class_<Candle>(m, "Candle")
      .def_property_readonly("timestamp", [](const Candle& c) { return format_timestamp(c.timestamp); })
      .def_readonly("open", &Candle::open)
      .def_readonly("high", &Candle::high)
      .def_readonly("low", &Candle::low)
      .def_readonly("close", &Candle::close)
      .def_readonly("volume", &Candle::volume);

  py::class_<CandleSeries>(m, "CandleSeries")
      .def_readonly("symbol", &CandleSeries::symbol)
      .def_readonly("timeframe", &CandleSeries::timeframe)
      .def_readonly("candles", &CandleSeries::candles)
      .def("closes", &CandleSeries::closes)
      .def("__len__", &CandleSeries::size)
      .def("__getitem__", [](const CandleSeries& s, std::size_t i) {
        if (i >= s.size()) throw py::index_error();
        return s[i];
      });

  m.def("parse_candles", &parse_candles, py::arg("csv_text"), py::arg("symbol"), py::arg("timeframe") = "");
  m.def("load_candles", &load_candles, py::arg("path"), py::arg("symbol"), py::arg("timeframe") = "");
  m.def("to_csv", &to_csv);
}

void bind_indicators(py::module_& m) {
  py::class_<IndicatorSeries>(m, "IndicatorSeries")
      .def_readonly("name", &IndicatorSeries::name)
      .def_readonly("params", &IndicatorSeries::params)
      .def_readonly("first", &IndicatorSeries::first)
      .def_readonly("values", &IndicatorSeries::values)
      .def("defined", &IndicatorSeries::defined)
      .def("at", &IndicatorSeries::at);

  m.def("sma", [](const std::vector<double>& v, int period) { return sma(v, period); });
  m.def("rsi", [](const std::vector<double>& closes, int period) { return rsi(closes, period); });
  m.def("cci", &cci);
  m.def("stochastic_k", &stochastic_k);
  m.def(
      "stochastic",
      [](const CandleSeries& c, int k, int d, int slowing) {
        auto s = stochastic(c, k, d, slowing);
        return py::make_tuple(s.k, s.d);
      },
      py::arg("candles"), py::arg("k_period"), py::arg("d_period"), py::arg("slowing"));
}

void bind_fuzzy(py::module_& m) {
  py::enum_<Term>(m, "Term").value("Buy", Term::Buy).value("Neutral", Term::Neutral).value("Sell", Term::Sell);

  py::class_<MembershipFunction>(m, "MembershipFunction")
      .def(py::init([](double a, double b, double c, double d) { return MembershipFunction{a, b, c, d}; }))
      .def_readwrite("a", &MembershipFunction::a)
      .def_readwrite("b", &MembershipFunction::b)
      .def_readwrite("c", &MembershipFunction::c)
      .def_readwrite("d", &MembershipFunction::d);
  m.def("membership", &membership);

  py::class_<TermSet>(m, "TermSet")
      .def_readonly("domain_min", &TermSet::domain_min)
      .def_readonly("domain_max", &TermSet::domain_max)
      .def("term", [](const TermSet& ts, Term t) { return ts[t]; });
  m.def("fuzzify", [](double x, const TermSet& ts) { return fuzzify(x, ts); });

  py::class_<FuzzyRule>(m, "FuzzyRule")
      .def_readonly("antecedent", &FuzzyRule::antecedent)
      .def_readonly("consequent", &FuzzyRule::consequent);

  py::class_<FuzzyVerdict>(m, "FuzzyVerdict")
      .def_readonly("res", &FuzzyVerdict::res)
      .def_readonly("fired_rule_count", &FuzzyVerdict::fired_rule_count);
}

void bind_strategy(py::module_& m) {
  py::enum_<Signal>(m, "Signal")
      .value("Neutral", Signal::Neutral)
      .value("Buy", Signal::Buy)
      .value("Sell", Signal::Sell);
  py::enum_<IndicatorKind>(m, "IndicatorKind")
      .value("RSI", IndicatorKind::Rsi)
      .value("CCI", IndicatorKind::Cci)
      .value("STO", IndicatorKind::Sto);

  py::class_<StrategyConfig>(m, "StrategyConfig")
      .def(py::init<>())
      .def_readwrite("rsi_periods", &StrategyConfig::rsi_periods)
      .def_readwrite("cci_periods", &StrategyConfig::cci_periods)
      .def("terms", &StrategyConfig::terms)
      .def_readonly("rules", &StrategyConfig::rules);

  py::class_<BacktestConfig>(m, "BacktestConfig")
      .def(py::init<>())
      .def_readwrite("initial_capital", &BacktestConfig::initial_capital)
      .def_readwrite("lot_size", &BacktestConfig::lot_size)
      .def_readwrite("pip", &BacktestConfig::pip)
      .def_readwrite("pip_value", &BacktestConfig::pip_value)
      .def_readwrite("spread_pips", &BacktestConfig::spread_pips)
      .def_readwrite("stop_loss_pips", &BacktestConfig::stop_loss_pips)
      .def_readwrite("take_profit_pips", &BacktestConfig::take_profit_pips);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("strategy", &RunConfig::strategy)
      .def_readwrite("backtest", &RunConfig::backtest);
  m.def("parse_config", &parse_config);
  m.def("to_config_text", &to_config_text);

  m.def("default_rule_base", &default_rule_base);
  m.def("default_term_set", &default_term_set);
  m.def(
      "fuzzy_signal",
      [](IndicatorKind kind, const std::array<double, 3>& inputs, const StrategyConfig& cfg) {
        const auto outcome = fuzzy_signal(kind, inputs, cfg);
        return py::make_tuple(outcome.signal, outcome.verdict);
      },
      py::arg("kind"), py::arg("inputs"), py::arg("config") = StrategyConfig{});
  m.def("majority_vote", &majority_vote);
  m.def("ensemble_signal", &ensemble_signal, py::arg("candles"), py::arg("bar"),
        py::arg("config") = StrategyConfig{});
  m.def("strategy_names", [] {
    std::vector<std::string> names;
    for (auto k : kStrategyKinds) names.emplace_back(to_string(k));
    return names;
  });
  m.def(
      "strategy_signals",
      [](const std::string& name, const CandleSeries& candles, const StrategyConfig& cfg) {
        const auto kind = parse_strategy_kind(name);
        if (!kind) throw py::value_error("unknown strategy '" + name + "'");
        return Strategy(*kind, candles, cfg).signals();
      },
      py::arg("strategy"), py::arg("candles"), py::arg("config") = StrategyConfig{});
}

void bind_backtest(py::module_& m) {
  py::enum_<Direction>(m, "Direction").value("Long", Direction::Long).value("Short", Direction::Short);
  py::enum_<ExitReason>(m, "ExitReason")
      .value("OppositeSignal", ExitReason::OppositeSignal)
      .value("StopLoss", ExitReason::StopLoss)
      .value("TakeProfit", ExitReason::TakeProfit)
      .value("EndOfData", ExitReason::EndOfData);

  py::class_<Trade>(m, "Trade")
      .def_readonly("direction", &Trade::direction)
      .def_readonly("entry_bar", &Trade::entry_bar)
      .def_readonly("exit_bar", &Trade::exit_bar)
      .def_readonly("entry_price", &Trade::entry_price)
      .def_readonly("exit_price", &Trade::exit_price)
      .def_readonly("pnl", &Trade::pnl)
      .def_readonly("exit_reason", &Trade::exit_reason);

  py::class_<BacktestReport>(m, "BacktestReport")
      .def_readonly("initial_capital", &BacktestReport::initial_capital)
      .def_readonly("net_profit", &BacktestReport::net_profit)
      .def_readonly("gross_profit", &BacktestReport::gross_profit)
      .def_readonly("gross_loss", &BacktestReport::gross_loss)
      .def_property_readonly("profit_factor",
                             [](const BacktestReport& r) {
                               return r.profit_factor.infinite ? std::numeric_limits<double>::infinity()
                                                               : r.profit_factor.value;
                             })
      .def_readonly("max_drawdown", &BacktestReport::max_drawdown)
      .def_readonly("trade_count", &BacktestReport::trade_count)
      .def_readonly("win_count", &BacktestReport::win_count)
      .def_readonly("trades", &BacktestReport::trades)
      .def_property_readonly("equity",
                             [](const BacktestReport& r) {
                               std::vector<double> out;
                               for (const auto& p : r.equity_curve) out.push_back(p.equity);
                               return out;
                             })
      .def_readonly("final_capital", &BacktestReport::final_capital);

  m.def(
      "profit_factor",
      [](double gp, double gl) {
        const auto pf = profit_factor(gp, gl);
        return pf.infinite ? std::numeric_limits<double>::infinity() : pf.value;
      },
      py::arg("gross_profit"), py::arg("gross_loss"));
  m.def(
      "max_drawdown",
      [](const std::vector<double>& equity) {
        std::vector<EquityPoint> curve;
        for (std::size_t i = 0; i < equity.size(); ++i) curve.push_back({i, equity[i]});
        return max_drawdown(curve);
      },
      py::arg("equity"));

  m.def(
      "run_backtest",
      [](const CandleSeries& candles, const std::string& name, const RunConfig& cfg) {
        const auto kind = parse_strategy_kind(name);
        if (!kind) throw py::value_error("unknown strategy '" + name + "'");
        const Strategy strategy(*kind, candles, cfg.strategy);
        py::gil_scoped_release release;
        return run_backtest(candles, std::cref(strategy), cfg.backtest);
      },
      py::arg("candles"), py::arg("strategy"), py::arg("config") = RunConfig{});
  m.def(
      "run_scripted_backtest",
      [](const CandleSeries& candles, const std::function<Signal(std::size_t)>& fn, const BacktestConfig& cfg) {
        return run_backtest(candles, fn, cfg);
      },
      py::arg("candles"), py::arg("signal_fn"), py::arg("config") = BacktestConfig{});
  m.def(
      "compare_strategies",
      [](const CandleSeries& candles, const RunConfig& cfg) {
        py::gil_scoped_release release;
        const auto rows = compare_strategies(candles, cfg.strategy, cfg.backtest);
        std::vector<std::pair<std::string, BacktestReport>> out;
        for (const auto& r : rows) out.emplace_back(std::string(to_string(r.kind)), r.report);
        return out;
      },
      py::arg("candles"), py::arg("config") = RunConfig{});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fuzzy-ensemble oscillator strategies, indicators and backtester";
  bind_errors(m);
  bind_market_data(m);
  bind_indicators(m);
  bind_fuzzy(m);
  bind_strategy(m);
  bind_backtest(m);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
  m.attr("__version__") = version();
}
