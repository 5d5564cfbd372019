#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fuzzyfx/market_data.hpp"
#include "fuzzyfx/strategy.hpp"

namespace fuzzyfx {

// Base units in one standard lot; pip_value is quoted per standard lot.
inline constexpr double kStandardLot = 100000.0;

struct BacktestConfig {
  double initial_capital = 10000.0;
  double lot_size = 100000.0;
  double pip = 0.0001;
  double pip_value = 10.0;
  double spread_pips = 0.0;
  std::optional<double> stop_loss_pips;
  std::optional<double> take_profit_pips;

  double lots() const noexcept { return lot_size / kStandardLot; }
  void validate() const;

  bool operator==(const BacktestConfig&) const = default;
};

enum class Direction { Long, Short };
enum class ExitReason { OppositeSignal, StopLoss, TakeProfit, EndOfData };

std::string_view to_string(Direction d) noexcept;
std::string_view to_string(ExitReason r) noexcept;

struct Trade {
  Direction direction = Direction::Long;
  std::size_t entry_bar = 0;
  std::size_t exit_bar = 0;
  // Mid prices; the spread is charged in pnl.
  double entry_price = 0.0;
  double exit_price = 0.0;
  double pnl = 0.0;
  ExitReason exit_reason = ExitReason::EndOfData;
};

struct EquityPoint {
  std::size_t bar = 0;
  double equity = 0.0;
};

struct ProfitFactor {
  double value = 0.0;
  bool infinite = false;
};

struct BacktestReport {
  double initial_capital = 0.0;
  double net_profit = 0.0;
  double gross_profit = 0.0;
  double gross_loss = 0.0;  // magnitude, >= 0
  ProfitFactor profit_factor;
  double max_drawdown = 0.0;
  std::size_t trade_count = 0;
  std::size_t win_count = 0;
  std::vector<Trade> trades;
  std::vector<EquityPoint> equity_curve;
  double final_capital = 0.0;
};

/// gross_profit / gross_loss; a lossless run with profit is flagged
/// infinite, and 0/0 is 0.
ProfitFactor profit_factor(double gross_profit, double gross_loss) noexcept;

/// Largest (running peak - equity) / running peak over the curve.
double max_drawdown(std::span<const EquityPoint> curve) noexcept;

using SignalFn = std::function<Signal(std::size_t bar)>;

/// Single-position stop-and-reverse replay. Signals are read at each bar's
/// close and filled at the next bar's open; stops are checked against the
/// bar's range (stop loss first when both levels are inside it); an open
/// position is closed at the final close. Throws EmptySeries.
BacktestReport run_backtest(const CandleSeries& candles, const SignalFn& strategy, const BacktestConfig& cfg);

struct ComparisonRow {
  StrategyKind kind;
  BacktestReport report;
};

/// Ensemble, classical RSI, classical CCI, classical Stochastic, in that
/// order, under identical settings.
inline constexpr std::array<StrategyKind, 4> kComparisonOrder = {StrategyKind::Ensemble, StrategyKind::RsiClassic,
                                                                 StrategyKind::CciClassic, StrategyKind::StoClassic};

std::vector<ComparisonRow> compare_strategies(const CandleSeries& candles, const StrategyConfig& strategy_cfg,
                                              const BacktestConfig& backtest_cfg);

}  // namespace fuzzyfx

namespace fuzzyfx {

/// Throws std::logic_error if the report breaks an accounting identity:
/// net = gross profit - gross loss, final = initial + net, the trade pnl
/// sum, and the last equity point against the trade list.
void verify_report(const BacktestReport& report, double tolerance = 1e-9);

}  // namespace fuzzyfx
