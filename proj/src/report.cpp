#include "fuzzyfx/report.hpp"

#include "fuzzyfx/errors.hpp"
#include "fuzzyfx/indicators.hpp"

namespace fuzzyfx {

Json manifest_to_json(const RunManifest& m) {
  Json config = Json::object();
  for (const auto& [key, value] : config_entries(m.config)) config[key] = value;
  return Json{{"version", m.version},
              {"command", m.command},
              {"data_path", m.data_path},
              {"config_path", m.config_path},
              {"config", std::move(config)}};
}

Json report_to_json(StrategyKind kind, const CandleSeries& candles, const BacktestReport& r,
                    const RunManifest& manifest) {
  Json pf = r.profit_factor.infinite ? Json("inf") : Json(r.profit_factor.value);
  return Json{{"strategy", std::string(to_string(kind))},
              {"symbol", candles.symbol},
              {"bars", candles.size()},
              {"trade_count", r.trade_count},
              {"win_count", r.win_count},
              {"net_profit", r.net_profit},
              {"gross_profit", r.gross_profit},
              {"gross_loss", r.gross_loss},
              {"profit_factor", std::move(pf)},
              {"max_drawdown", r.max_drawdown},
              {"final_capital", r.final_capital},
              {"manifest", manifest_to_json(manifest)}};
}

std::string dump_canonical(const Json& json) { return json.dump(2) + "\n"; }

std::string equity_csv(const CandleSeries& candles, const BacktestReport& report) {
  std::string out = "bar,timestamp,equity\n";
  for (const auto& p : report.equity_curve) {
    out += std::to_string(p.bar) + "," + format_timestamp(candles[p.bar].timestamp) + "," +
           format_number(p.equity) + "\n";
  }
  return out;
}

std::string indicators_csv(const CandleSeries& candles, const StrategyConfig& cfg) {
  std::vector<std::string> header{"bar", "timestamp"};
  std::vector<IndicatorSeries> columns;
  const auto closes = candles.closes();

  // Too-short series leave the whole column empty.
  auto add = [&](std::string name, auto&& compute) {
    header.push_back(std::move(name));
    try {
      columns.push_back(compute());
    } catch (const InsufficientData&) {
      columns.push_back(IndicatorSeries{});
    }
  };
  for (int p : cfg.rsi_periods) add("rsi_" + std::to_string(p), [&] { return rsi(closes, p); });
  for (int p : cfg.cci_periods) add("cci_" + std::to_string(p), [&] { return cci(candles, p); });
  for (const auto& s : cfg.stoch_settings) {
    add("sto_" + std::to_string(s.k_period) + "_" + std::to_string(s.d_period) + "_" + std::to_string(s.slowing),
        [&] { return stochastic_k(candles, s.k_period, s.slowing); });
  }

  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (std::size_t bar = 0; bar < candles.size(); ++bar) {
    out += std::to_string(bar) + "," + format_timestamp(candles[bar].timestamp);
    for (const auto& col : columns) {
      out += ',';
      if (col.defined(bar)) out += format_number(col.at(bar));
    }
    out += '\n';
  }
  return out;
}

}  // namespace fuzzyfx
