#include "fuzzyfx/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "fuzzyfx/errors.hpp"
#include "fuzzyfx/report.hpp"

#ifndef FUZZYFX_VERSION
#define FUZZYFX_VERSION "0.0.0"
#endif

namespace fuzzyfx {

namespace {

struct CommonOptions {
  std::string data_path;
  std::string config_path;
  std::string symbol;
  std::string timeframe;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--data", opts.data_path, "OHLCV CSV file")->required();
  cmd->add_option("--config", opts.config_path, "strategy/backtest configuration file");
  cmd->add_option("--symbol", opts.symbol, "symbol label (default: data file stem)");
  cmd->add_option("--timeframe", opts.timeframe, "bar duration label, e.g. H1");
}

struct Inputs {
  CandleSeries candles;
  RunConfig config;
};

Inputs load_inputs(const CommonOptions& opts) {
  Inputs in;
  in.config = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
  const auto symbol = opts.symbol.empty() ? std::filesystem::path(opts.data_path).stem().string() : opts.symbol;
  in.candles = load_candles(opts.data_path, symbol, opts.timeframe);
  return in;
}

RunManifest manifest_for(const std::string& command, const CommonOptions& opts, const RunConfig& cfg) {
  return {command, opts.data_path, opts.config_path, cfg, version()};
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write output file '" + path + "'");
  f << text;
  if (!f) throw Error("failed writing output file '" + path + "'");
}

}  // namespace

const char* version() noexcept { return FUZZYFX_VERSION; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy-ensemble oscillator trading strategies and backtester", "fuzzyfx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  std::vector<std::string> strategy_names;
  for (auto k : kStrategyKinds) strategy_names.emplace_back(to_string(k));

  CommonOptions bt_opts;
  std::string strategy_name;
  std::string equity_path;
  auto* backtest = app.add_subcommand("backtest", "run one strategy and report its metrics as JSON");
  add_common(backtest, bt_opts);
  backtest->add_option("--strategy", strategy_name, "strategy to run")
      ->required()
      ->check(CLI::IsMember(strategy_names));
  backtest->add_option("--out", bt_opts.out_path, "report JSON path (default: stdout)");
  backtest->add_option("--equity-csv", equity_path, "write the equity curve as CSV");

  CommonOptions cmp_opts;
  auto* compare = app.add_subcommand("compare", "run the ensemble and the three classical baselines");
  add_common(compare, cmp_opts);
  compare->add_option("--out", cmp_opts.out_path, "comparison JSON path (default: stdout)");

  CommonOptions ind_opts;
  auto* indicators = app.add_subcommand("indicators", "dump the nine fuzzy input series as CSV");
  add_common(indicators, ind_opts);
  indicators->add_option("--out", ind_opts.out_path, "CSV output path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*backtest) {
      const auto in = load_inputs(bt_opts);
      const auto kind = *parse_strategy_kind(strategy_name);
      const Strategy strategy(kind, in.candles, in.config.strategy);
      const auto report = run_backtest(in.candles, std::cref(strategy), in.config.backtest);
      verify_report(report);
      write_text(bt_opts.out_path,
                 dump_canonical(report_to_json(kind, in.candles, report, manifest_for("backtest", bt_opts, in.config))),
                 out);
      if (!equity_path.empty()) write_text(equity_path, equity_csv(in.candles, report), out);
    } else if (*compare) {
      const auto in = load_inputs(cmp_opts);
      const auto manifest = manifest_for("compare", cmp_opts, in.config);
      Json table = Json::array();
      for (const auto& row : compare_strategies(in.candles, in.config.strategy, in.config.backtest)) {
        verify_report(row.report);
        table.push_back(report_to_json(row.kind, in.candles, row.report, manifest));
      }
      write_text(cmp_opts.out_path, dump_canonical(table), out);
    } else if (*indicators) {
      const auto in = load_inputs(ind_opts);
      write_text(ind_opts.out_path, indicators_csv(in.candles, in.config.strategy), out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace fuzzyfx
