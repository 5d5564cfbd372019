#include "fuzzyfx/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "fuzzyfx/errors.hpp"

namespace fuzzyfx {

namespace {

struct Position {
  Direction direction;
  std::size_t entry_bar;
  double entry_price;
};

double sign(Direction d) noexcept { return d == Direction::Long ? 1.0 : -1.0; }

Direction direction_of(Signal s) noexcept { return s == Signal::Buy ? Direction::Long : Direction::Short; }

class Account {
 public:
  explicit Account(const BacktestConfig& cfg) : cfg_(cfg), balance_(cfg.initial_capital) {}

  // Price moves are counted in micro-pips so decimal quotes give decimal
  // pip counts (1.105 - 1.1 is 50 pips, not 49.99999999999893).
  double pnl(const Position& pos, double exit_price) const noexcept {
    const double pips = std::round(sign(pos.direction) * (exit_price - pos.entry_price) / cfg_.pip * 1e6) / 1e6;
    return (pips - cfg_.spread_pips) * cfg_.pip_value * cfg_.lots();
  }

  void open(Direction d, std::size_t bar, double price) { position_ = Position{d, bar, price}; }

  void close(std::size_t bar, double price, ExitReason reason) {
    const auto& pos = *position_;
    const double p = pnl(pos, price);
    trades_.push_back(Trade{pos.direction, pos.entry_bar, bar, pos.entry_price, price, p, reason});
    balance_ += p;
    position_.reset();
  }

  double equity(double mark) const noexcept { return balance_ + (position_ ? pnl(*position_, mark) : 0.0); }

  const std::optional<Position>& position() const noexcept { return position_; }
  std::vector<Trade>& trades() noexcept { return trades_; }

 private:
  const BacktestConfig& cfg_;
  double balance_;
  std::optional<Position> position_;
  std::vector<Trade> trades_;
};

// Stop loss wins when both levels sit inside the bar. A bar opening beyond
// a level fills at the open.
void check_stops(Account& account, const BacktestConfig& cfg, const Candle& c, std::size_t bar) {
  const auto& pos = account.position();
  if (!pos || (!cfg.stop_loss_pips && !cfg.take_profit_pips)) return;
  const double s = sign(pos->direction);
  const double adverse = s > 0 ? c.low : c.high;
  const double favourable = s > 0 ? c.high : c.low;

  if (cfg.stop_loss_pips) {
    const double level = pos->entry_price - s * *cfg.stop_loss_pips * cfg.pip;
    if (s * (adverse - level) <= 0.0) {
      const double fill = s * (c.open - level) < 0.0 ? c.open : level;
      account.close(bar, fill, ExitReason::StopLoss);
      return;
    }
  }
  if (cfg.take_profit_pips) {
    const double level = pos->entry_price + s * *cfg.take_profit_pips * cfg.pip;
    if (s * (favourable - level) >= 0.0) {
      const double fill = s * (c.open - level) > 0.0 ? c.open : level;
      account.close(bar, fill, ExitReason::TakeProfit);
    }
  }
}

}  // namespace

std::string_view to_string(Direction d) noexcept { return d == Direction::Long ? "long" : "short"; }

std::string_view to_string(ExitReason r) noexcept {
  switch (r) {
    case ExitReason::OppositeSignal:
      return "opposite_signal";
    case ExitReason::StopLoss:
      return "stop_loss";
    case ExitReason::TakeProfit:
      return "take_profit";
    case ExitReason::EndOfData:
      return "end_of_data";
  }
  return "?";
}

void BacktestConfig::validate() const {
  if (!(initial_capital > 0.0)) throw ConfigError("initial_capital must be > 0");
  if (!(lot_size > 0.0)) throw ConfigError("lot_size must be > 0");
  if (!(pip > 0.0)) throw ConfigError("pip must be > 0");
  if (!(pip_value > 0.0)) throw ConfigError("pip_value must be > 0");
  if (!(spread_pips >= 0.0)) throw ConfigError("spread_pips must be >= 0");
  if (stop_loss_pips && !(*stop_loss_pips > 0.0)) throw ConfigError("stop_loss_pips must be > 0");
  if (take_profit_pips && !(*take_profit_pips > 0.0)) throw ConfigError("take_profit_pips must be > 0");
}

ProfitFactor profit_factor(double gross_profit, double gross_loss) noexcept {
  if (gross_loss == 0.0) return gross_profit > 0.0 ? ProfitFactor{0.0, true} : ProfitFactor{0.0, false};
  return {gross_profit / gross_loss, false};
}

double max_drawdown(std::span<const EquityPoint> curve) noexcept {
  double peak = 0.0;
  double worst = 0.0;
  bool started = false;
  for (const auto& p : curve) {
    if (!started || p.equity > peak) {
      peak = p.equity;
      started = true;
    }
    if (peak > 0.0) worst = std::max(worst, (peak - p.equity) / peak);
  }
  return worst;
}

BacktestReport run_backtest(const CandleSeries& candles, const SignalFn& strategy, const BacktestConfig& cfg) {
  if (candles.empty()) throw EmptySeries();
  cfg.validate();

  Account account(cfg);
  BacktestReport report;
  report.initial_capital = cfg.initial_capital;
  report.equity_curve.reserve(candles.size());

  const std::size_t last = candles.size() - 1;
  Signal pending = Signal::Neutral;
  for (std::size_t bar = 0; bar <= last; ++bar) {
    const auto& c = candles[bar];

    if (pending != Signal::Neutral) {
      const auto wanted = direction_of(pending);
      if (account.position() && account.position()->direction != wanted)
        account.close(bar, c.open, ExitReason::OppositeSignal);
      if (!account.position()) account.open(wanted, bar, c.open);
      pending = Signal::Neutral;
    }

    check_stops(account, cfg, c, bar);

    if (bar == last) {
      if (account.position()) account.close(bar, c.close, ExitReason::EndOfData);
    } else {
      const Signal s = strategy(bar);
      if (s != Signal::Neutral && (!account.position() || account.position()->direction != direction_of(s)))
        pending = s;
    }

    report.equity_curve.push_back({bar, account.equity(c.close)});
  }

  report.trades = std::move(account.trades());
  for (const auto& t : report.trades) {
    report.net_profit += t.pnl;
    if (t.pnl > 0.0) {
      report.gross_profit += t.pnl;
      ++report.win_count;
    } else if (t.pnl < 0.0) {
      report.gross_loss -= t.pnl;
    }
  }
  report.trade_count = report.trades.size();
  report.profit_factor = profit_factor(report.gross_profit, report.gross_loss);
  report.max_drawdown = max_drawdown(report.equity_curve);
  report.final_capital = report.initial_capital + report.net_profit;
  return report;
}

std::vector<ComparisonRow> compare_strategies(const CandleSeries& candles, const StrategyConfig& strategy_cfg,
                                              const BacktestConfig& backtest_cfg) {
  if (candles.empty()) throw EmptySeries();
  strategy_cfg.validate();
  backtest_cfg.validate();

  std::vector<std::future<BacktestReport>> jobs;
  jobs.reserve(kComparisonOrder.size());
  for (auto kind : kComparisonOrder) {
    jobs.push_back(std::async(std::launch::async, [&, kind] {
      const Strategy strategy(kind, candles, strategy_cfg);
      return run_backtest(candles, std::cref(strategy), backtest_cfg);
    }));
  }

  std::vector<ComparisonRow> rows;
  rows.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) rows.push_back({kComparisonOrder[i], jobs[i].get()});
  return rows;
}

}  // namespace fuzzyfx

namespace fuzzyfx {

void verify_report(const BacktestReport& r, double tolerance) {
  auto near = [tolerance](double a, double b) { return std::abs(a - b) <= tolerance * std::max(1.0, std::abs(b)); };
  double sum = 0.0;
  std::size_t wins = 0;
  for (const auto& t : r.trades) {
    sum += t.pnl;
    if (t.pnl > 0.0) ++wins;
    if (t.exit_bar < t.entry_bar) throw std::logic_error("trade exits before it enters");
  }
  if (!(r.gross_profit >= 0.0 && r.gross_loss >= 0.0)) throw std::logic_error("negative gross profit or loss");
  if (!near(r.net_profit, r.gross_profit - r.gross_loss))
    throw std::logic_error("net profit differs from gross profit - gross loss");
  if (!near(r.net_profit, sum)) throw std::logic_error("net profit differs from the trade pnl sum");
  if (!near(r.final_capital, r.initial_capital + r.net_profit))
    throw std::logic_error("final capital differs from initial capital + net profit");
  if (r.trade_count != r.trades.size() || r.win_count != wins) throw std::logic_error("trade counts are inconsistent");
  if (!r.equity_curve.empty() && !near(r.equity_curve.back().equity, r.final_capital))
    throw std::logic_error("equity curve does not end at final capital");
}

}  // namespace fuzzyfx
