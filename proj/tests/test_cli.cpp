#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "fixtures.hpp"
#include "fuzzyfx/cli.hpp"
#include "fuzzyfx/config.hpp"
#include "fuzzyfx/errors.hpp"
#include "fuzzyfx/indicators.hpp"
#include "fuzzyfx/report.hpp"

using namespace fuzzyfx;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = FUZZYFX_SOURCE_DIR;
const std::string kSynthetic = (kSource / "data" / "synthetic_eurusd_h1.csv").string();

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("fuzzyfx_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("config defaults round-trip through text", "[config]") {
  const RunConfig defaults;
  CHECK(parse_config("") == defaults);
  CHECK(parse_config(to_config_text(defaults)) == defaults);
}

TEST_CASE("config overrides and round-trip", "[config]") {
  const auto cfg = parse_config(R"(
# tighter neutral band
rsi.periods = 7,14,28
sto.settings = 5:3:3, 10:5:5, 21:14:14
cci.thresholds = 0.35,0.65
output.terms.neutral = 0.35,0.45,0.55,0.65
classic.rsi.bounds = 25,75
backtest.spread_pips = 1.5
backtest.stop_loss_pips = 30
backtest.take_profit_pips = none
)");
  CHECK(cfg.strategy.rsi_periods == std::array<int, 3>{7, 14, 28});
  CHECK(cfg.strategy.stoch_settings[1].k_period == 10);
  CHECK(cfg.strategy.cci_thresholds.buy_below == 0.35);
  CHECK(cfg.strategy.output_terms.terms[1].a == 0.35);
  CHECK(cfg.strategy.rsi_classic.lower == 25);
  CHECK(cfg.backtest.spread_pips == 1.5);
  CHECK(cfg.backtest.stop_loss_pips == 30.0);
  CHECK_FALSE(cfg.backtest.take_profit_pips);
  CHECK(parse_config(to_config_text(cfg)) == cfg);
}

TEST_CASE("config round-trip over perturbed values", "[config][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    RunConfig cfg;
    cfg.backtest.initial_capital = 1000 + 1e5 * u(rng);
    cfg.backtest.spread_pips = 3 * u(rng);
    if (u(rng) < 0.5) cfg.backtest.stop_loss_pips = 1 + 100 * u(rng);
    cfg.strategy.rsi_thresholds = {0.3 + 0.1 * u(rng), 0.6 + 0.1 * u(rng)};
    cfg.strategy.rsi_terms.terms[1].b = 30 + 10 * u(rng);
    cfg.strategy.grid_points = 11 + static_cast<int>(rng() % 3000);
    REQUIRE(parse_config(to_config_text(cfg)) == cfg);
  }
}

TEST_CASE("config rejects bad documents", "[config]") {
  CHECK_THROWS_AS(parse_config("nope = 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("backtest.pip = 0.0001\nbacktest.pip = 0.01"), ConfigError);
  CHECK_THROWS_AS(parse_config("backtest.pip"), ConfigError);
  CHECK_THROWS_AS(parse_config("backtest.pip = abc"), ConfigError);
  CHECK_THROWS_AS(parse_config("rsi.periods = 9,14"), ConfigError);
  CHECK_THROWS_AS(parse_config("rules = BBB:B"), ConfigError);
  CHECK_THROWS_AS(parse_config("rsi.thresholds = 0.7,0.3"), ConfigError);
  CHECK_THROWS_AS(parse_config("output.domain = 0,2"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/fuzzyfx.cfg"), ConfigError);
}

TEST_CASE("backtest command writes a full report", "[cli]") {
  TempDir tmp;
  const auto r = cli({"backtest", "--data", kSynthetic, "--strategy", "ensemble", "--out", tmp / "r.json",
                      "--equity-csv", tmp / "eq.csv"});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(slurp(tmp / "r.json"));
  for (const char* key : {"strategy", "symbol", "bars", "trade_count", "win_count", "net_profit", "gross_profit",
                          "gross_loss", "profit_factor", "max_drawdown", "final_capital", "manifest"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["strategy"] == "ensemble");
  CHECK(j["symbol"] == "synthetic_eurusd_h1");
  CHECK(j["manifest"]["command"] == "backtest");
  CHECK(j["manifest"]["config"]["rules"].is_string());

  // The manifest alone reproduces the configuration.
  std::string cfg_text;
  for (const auto& [k, v] : j["manifest"]["config"].items()) cfg_text += k + " = " + v.get<std::string>() + "\n";
  CHECK(parse_config(cfg_text) == RunConfig{});

  const auto eq = read_csv(slurp(tmp / "eq.csv"));
  CHECK(eq[0] == std::vector<std::string>{"bar", "timestamp", "equity"});
  CHECK(eq.size() == j["bars"].get<std::size_t>() + 1);
  CHECK(std::stod(eq.back()[2]) == j["final_capital"].get<double>());
}

TEST_CASE("backtest command error paths", "[cli]") {
  auto r = cli({"backtest", "--data", "/no/such/file.csv", "--strategy", "ensemble"});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("/no/such/file.csv") != std::string::npos);

  r = cli({"backtest", "--data", kSynthetic, "--strategy", "bogus"});
  CHECK(r.code == kExitUsage);
  for (const char* name : {"ensemble", "rsi-fuzzy", "cci-fuzzy", "sto-fuzzy", "rsi-classic", "cci-classic",
                           "sto-classic"}) {
    CHECK(r.err.find(name) != std::string::npos);
  }

  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"backtest", "--data", kSynthetic}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"--version"}).out.find(version()) != std::string::npos);

  TempDir tmp;
  spit(tmp / "bad.csv", "timestamp,open,high,low,close,volume\n2022-01-03T00:00:00Z,1,0.5,1,1,0\n");
  r = cli({"backtest", "--data", tmp / "bad.csv", "--strategy", "ensemble"});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("row 1") != std::string::npos);
}

TEST_CASE("compare command", "[cli]") {
  const auto r = cli({"compare", "--data", kSynthetic});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.back() == '\n');
  const auto j = Json::parse(r.out);
  REQUIRE(j.size() == 4);
  CHECK(j[0]["strategy"] == "ensemble");
  CHECK(j[1]["strategy"] == "rsi-classic");
  CHECK(j[2]["strategy"] == "cci-classic");
  CHECK(j[3]["strategy"] == "sto-classic");
  for (const auto& row : j) CHECK(row["manifest"]["command"] == "compare");

  CHECK(cli({"compare", "--data", kSynthetic}).out == r.out);

  const auto bad = cli({"compare", "--data", kSynthetic, "--config", "/no/such/config.cfg"});
  CHECK(bad.code == kExitInput);
  CHECK(bad.err.find("/no/such/config.cfg") != std::string::npos);

  TempDir tmp;
  spit(tmp / "c.cfg", "backtest.spread_pips = 1\n");
  const auto with_cfg = cli({"compare", "--data", kSynthetic, "--config", tmp / "c.cfg"});
  REQUIRE(with_cfg.code == kExitOk);
  const auto jc = Json::parse(with_cfg.out);
  CHECK(jc[0]["manifest"]["config_path"] == tmp / "c.cfg");
  CHECK(jc[0]["manifest"]["config"]["backtest.spread_pips"] == "1");
}

TEST_CASE("an infinite profit factor serializes as inf", "[cli]") {
  BacktestReport r;
  r.profit_factor = {0.0, true};
  const auto j = report_to_json(StrategyKind::Ensemble, fixtures::flat(3), r, RunManifest{});
  CHECK(j["profit_factor"] == "inf");
}

TEST_CASE("indicators command: lookback alignment", "[cli]") {
  TempDir tmp;
  spit(tmp / "walk.csv", to_csv(fixtures::random_walk(9, 100)));
  REQUIRE(cli({"indicators", "--data", tmp / "walk.csv", "--out", tmp / "ind.csv"}).code == kExitOk);
  const auto rows = read_csv(slurp(tmp / "ind.csv"));
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == std::vector<std::string>{"bar", "timestamp", "rsi_9", "rsi_14", "rsi_21", "cci_9", "cci_14",
                                            "cci_21", "sto_5_3_3", "sto_14_7_7", "sto_21_14_14"});
  const std::size_t lookback[3] = {9, 14, 21};
  for (int c = 0; c < 3; ++c) {
    for (std::size_t bar = 0; bar < 100; ++bar) {
      INFO("rsi column " << c << " bar " << bar);
      CHECK(rows[bar + 1][2 + c].empty() == (bar < lookback[c]));
    }
  }
}

TEST_CASE("indicators command: flat conventions", "[cli]") {
  TempDir tmp;
  spit(tmp / "flat.csv", to_csv(fixtures::flat(80)));
  REQUIRE(cli({"indicators", "--data", tmp / "flat.csv", "--out", tmp / "ind.csv"}).code == kExitOk);
  const auto rows = read_csv(slurp(tmp / "ind.csv"));
  std::size_t checked = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t c = 2; c < rows[i].size(); ++c) {
      if (rows[i][c].empty()) continue;
      const double expected = (c >= 5 && c <= 7) ? 0.0 : 50.0;
      CHECK(std::stod(rows[i][c]) == expected);
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("indicators command: re-read matches in-process series", "[cli]") {
  TempDir tmp;
  const auto s = fixtures::random_walk(10, 250);
  spit(tmp / "walk.csv", to_csv(s));
  REQUIRE(cli({"indicators", "--data", tmp / "walk.csv", "--out", tmp / "ind.csv"}).code == kExitOk);
  const auto rows = read_csv(slurp(tmp / "ind.csv"));

  const auto reread = load_candles(tmp / "walk.csv", "walk");
  const auto closes = reread.closes();
  const StrategyConfig cfg;
  std::vector<IndicatorSeries> expected;
  for (int p : cfg.rsi_periods) expected.push_back(rsi(closes, p));
  for (int p : cfg.cci_periods) expected.push_back(cci(reread, p));
  for (const auto& st : cfg.stoch_settings) expected.push_back(stochastic_k(reread, st.k_period, st.slowing));

  for (std::size_t bar = 0; bar < s.size(); ++bar) {
    for (std::size_t c = 0; c < expected.size(); ++c) {
      const auto& cell = rows[bar + 1][2 + c];
      REQUIRE(cell.empty() == !expected[c].defined(bar));
      if (!cell.empty()) REQUIRE(std::abs(std::stod(cell) - expected[c].at(bar)) <= 1e-9);
    }
  }
}

TEST_CASE("indicators command requires --out", "[cli]") {
  CHECK(cli({"indicators", "--data", kSynthetic}).code == kExitUsage);
}
