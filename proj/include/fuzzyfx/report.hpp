#pragma once

#include <string>

#include "json.hpp"

#include "fuzzyfx/backtest.hpp"
#include "fuzzyfx/config.hpp"

namespace fuzzyfx {

using Json = nlohmann::ordered_json;

/// What produced a report; embedded in every JSON output.
struct RunManifest {
  std::string command;
  std::string data_path;
  std::string config_path;  // empty when defaults were used
  RunConfig config;
  std::string version;
};

Json manifest_to_json(const RunManifest& manifest);

/// Fixed key order: strategy, symbol, bars, trade_count, win_count,
/// net_profit, gross_profit, gross_loss, profit_factor, max_drawdown,
/// final_capital, manifest. An infinite profit factor is the string "inf".
Json report_to_json(StrategyKind kind, const CandleSeries& candles, const BacktestReport& report,
                    const RunManifest& manifest);

/// Two-space indented dump with a trailing newline.
std::string dump_canonical(const Json& json);

/// `bar,timestamp,equity`
std::string equity_csv(const CandleSeries& candles, const BacktestReport& report);

/// One row per bar with the nine fuzzy inputs; cells before an indicator's
/// lookback is satisfied are empty.
std::string indicators_csv(const CandleSeries& candles, const StrategyConfig& cfg);

}  // namespace fuzzyfx
