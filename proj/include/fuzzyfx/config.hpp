#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzyfx/backtest.hpp"
#include "fuzzyfx/strategy.hpp"

namespace fuzzyfx {

struct RunConfig {
  StrategyConfig strategy;
  BacktestConfig backtest;

  bool operator==(const RunConfig&) const = default;
};

/// Flat `key = value` document; `#` starts a comment, blank lines are
/// ignored. Keys not present keep their defaults.
///
///   rsi.periods          = 9,14,21
///   cci.periods          = 9,14,21
///   sto.settings         = 5:3:3,14:7:7,21:14:14     (K:D:slowing)
///   {rsi,cci,sto}.thresholds = buy_below,sell_above
///   {rsi,cci,sto,output}.domain = min,max
///   {rsi,cci,sto,output}.terms.{buy,neutral,sell} = a,b,c,d
///   rules                = BBB:B,SSS:S,...          (antecedent:consequent)
///   fuzzy.grid_points    = 1001
///   classic.{rsi,cci}.period, classic.sto.setting, classic.{rsi,cci,sto}.bounds
///   backtest.{initial_capital,lot_size,pip,pip_value,spread_pips}
///   backtest.{stop_loss_pips,take_profit_pips}   (number or `none`)
///
/// Throws ConfigError on unknown or repeated keys, bad values, or a result
/// that fails validation.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Every key with its resolved value, in the order listed above.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);
std::string to_config_text(const RunConfig& cfg);

}  // namespace fuzzyfx
