#include "fuzzyfx/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fuzzyfx/errors.hpp"

namespace fuzzyfx {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError("config key '" + std::string(key) + "': " + std::string(why) + " (got '" + std::string(value) +
                    "')");
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) bad(key, text, "expected a number");
  return v;
}

int to_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad(key, text, "expected an integer");
  return v;
}

template <std::size_t N>
std::array<double, N> doubles(std::string_view key, std::string_view value) {
  const auto parts = split(value, ',');
  if (parts.size() != N) bad(key, value, "expected " + std::to_string(N) + " comma-separated numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = to_double(key, parts[i]);
  return out;
}

StochSetting stoch_setting(std::string_view key, std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) bad(key, text, "expected K:D:slowing");
  return {to_int(key, parts[0]), to_int(key, parts[1]), to_int(key, parts[2])};
}

Term term_from(std::string_view key, char c) {
  switch (c) {
    case 'B':
      return Term::Buy;
    case 'N':
      return Term::Neutral;
    case 'S':
      return Term::Sell;
  }
  bad(key, std::string(1, c), "expected B, N or S");
}

char term_letter(Term t) { return t == Term::Buy ? 'B' : t == Term::Sell ? 'S' : 'N'; }

std::string join(const auto& values, char sep, auto&& fmt) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += sep;
    out += fmt(v);
  }
  return out;
}

std::string num(double v) { return format_number(v); }

std::string stoch_text(const StochSetting& s) {
  return std::to_string(s.k_period) + ":" + std::to_string(s.d_period) + ":" + std::to_string(s.slowing);
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

struct TermSetRef {
  const char* prefix;
  TermSet StrategyConfig::*member;
};

constexpr std::array<TermSetRef, 4> kTermSets = {{{"rsi", &StrategyConfig::rsi_terms},
                                                  {"cci", &StrategyConfig::cci_terms},
                                                  {"sto", &StrategyConfig::sto_terms},
                                                  {"output", &StrategyConfig::output_terms}}};

struct ThresholdRef {
  const char* prefix;
  Thresholds StrategyConfig::*member;
};

constexpr std::array<ThresholdRef, 3> kThresholds = {{{"rsi", &StrategyConfig::rsi_thresholds},
                                                      {"cci", &StrategyConfig::cci_thresholds},
                                                      {"sto", &StrategyConfig::sto_thresholds}}};

struct BoundsRef {
  const char* prefix;
  ClassicalBounds StrategyConfig::*member;
};

constexpr std::array<BoundsRef, 3> kBounds = {{{"rsi", &StrategyConfig::rsi_classic},
                                               {"cci", &StrategyConfig::cci_classic},
                                               {"sto", &StrategyConfig::sto_classic}}};

struct BacktestRef {
  const char* key;
  double BacktestConfig::*member;
};

constexpr std::array<BacktestRef, 5> kBacktestNumbers = {{{"backtest.initial_capital", &BacktestConfig::initial_capital},
                                                          {"backtest.lot_size", &BacktestConfig::lot_size},
                                                          {"backtest.pip", &BacktestConfig::pip},
                                                          {"backtest.pip_value", &BacktestConfig::pip_value},
                                                          {"backtest.spread_pips", &BacktestConfig::spread_pips}}};

const std::map<std::string, Setter, std::less<>>& setters() {
  static const auto table = [] {
    std::map<std::string, Setter, std::less<>> m;
    auto periods = [](std::array<int, 3> StrategyConfig::*member) {
      return [member](RunConfig& c, std::string_view key, std::string_view value) {
        const auto parts = split(value, ',');
        if (parts.size() != 3) bad(key, value, "expected 3 comma-separated periods");
        for (std::size_t i = 0; i < 3; ++i) (c.strategy.*member)[i] = to_int(key, parts[i]);
      };
    };
    m["rsi.periods"] = periods(&StrategyConfig::rsi_periods);
    m["cci.periods"] = periods(&StrategyConfig::cci_periods);
    m["sto.settings"] = [](RunConfig& c, std::string_view key, std::string_view value) {
      const auto parts = split(value, ',');
      if (parts.size() != 3) bad(key, value, "expected 3 comma-separated K:D:slowing settings");
      for (std::size_t i = 0; i < 3; ++i) c.strategy.stoch_settings[i] = stoch_setting(key, parts[i]);
    };
    for (const auto& ref : kThresholds) {
      m[std::string(ref.prefix) + ".thresholds"] = [member = ref.member](RunConfig& c, std::string_view key,
                                                                         std::string_view value) {
        const auto v = doubles<2>(key, value);
        c.strategy.*member = {v[0], v[1]};
      };
    }
    for (const auto& ref : kTermSets) {
      const std::string prefix = ref.prefix;
      m[prefix + ".domain"] = [member = ref.member](RunConfig& c, std::string_view key, std::string_view value) {
        const auto v = doubles<2>(key, value);
        (c.strategy.*member).domain_min = v[0];
        (c.strategy.*member).domain_max = v[1];
      };
      for (Term t : kTerms) {
        m[prefix + ".terms." + std::string(to_string(t))] = [member = ref.member, t](
                                                                RunConfig& c, std::string_view key,
                                                                std::string_view value) {
          const auto v = doubles<4>(key, value);
          (c.strategy.*member)[t] = {v[0], v[1], v[2], v[3]};
        };
      }
    }
    m["rules"] = [](RunConfig& c, std::string_view key, std::string_view value) {
      std::vector<FuzzyRule> rules;
      for (auto item : split(value, ',')) {
        if (item.size() != 5 || item[3] != ':') bad(key, item, "expected a rule like BBN:B");
        rules.push_back({{term_from(key, item[0]), term_from(key, item[1]), term_from(key, item[2])},
                         term_from(key, item[4])});
      }
      c.strategy.rules = std::move(rules);
    };
    m["fuzzy.grid_points"] = [](RunConfig& c, std::string_view key, std::string_view value) {
      const int n = to_int(key, value);
      if (n < 2) bad(key, value, "expected at least 2");
      c.strategy.grid_points = static_cast<std::size_t>(n);
    };
    m["classic.rsi.period"] = [](RunConfig& c, std::string_view key, std::string_view value) {
      c.strategy.classic_rsi_period = to_int(key, value);
    };
    m["classic.cci.period"] = [](RunConfig& c, std::string_view key, std::string_view value) {
      c.strategy.classic_cci_period = to_int(key, value);
    };
    m["classic.sto.setting"] = [](RunConfig& c, std::string_view key, std::string_view value) {
      c.strategy.classic_sto = stoch_setting(key, value);
    };
    for (const auto& ref : kBounds) {
      m["classic." + std::string(ref.prefix) + ".bounds"] = [member = ref.member](
                                                                RunConfig& c, std::string_view key,
                                                                std::string_view value) {
        const auto v = doubles<2>(key, value);
        c.strategy.*member = {v[0], v[1]};
      };
    }
    for (const auto& ref : kBacktestNumbers) {
      m[ref.key] = [member = ref.member](RunConfig& c, std::string_view key, std::string_view value) {
        c.backtest.*member = to_double(key, value);
      };
    }
    auto optional_pips = [](std::optional<double> BacktestConfig::*member) {
      return [member](RunConfig& c, std::string_view key, std::string_view value) {
        if (value == "none")
          (c.backtest.*member).reset();
        else
          c.backtest.*member = to_double(key, value);
      };
    };
    m["backtest.stop_loss_pips"] = optional_pips(&BacktestConfig::stop_loss_pips);
    m["backtest.take_profit_pips"] = optional_pips(&BacktestConfig::take_profit_pips);
    return m;
  }();
  return table;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                                 std::string(key) + "'");
    if (!seen.emplace(key).second) throw ConfigError("config key '" + std::string(key) + "' given twice");
    it->second(cfg, key, value);
  }
  cfg.strategy.validate();
  cfg.backtest.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  const auto& s = cfg.strategy;
  const auto& b = cfg.backtest;
  auto ints = [](const std::array<int, 3>& v) { return join(v, ',', [](int x) { return std::to_string(x); }); };

  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("rsi.periods", ints(s.rsi_periods));
  out.emplace_back("cci.periods", ints(s.cci_periods));
  out.emplace_back("sto.settings", join(s.stoch_settings, ',', stoch_text));
  for (const auto& ref : kThresholds) {
    const auto& th = s.*ref.member;
    out.emplace_back(std::string(ref.prefix) + ".thresholds", num(th.buy_below) + "," + num(th.sell_above));
  }
  for (const auto& ref : kTermSets) {
    const auto& ts = s.*ref.member;
    const std::string prefix = ref.prefix;
    out.emplace_back(prefix + ".domain", num(ts.domain_min) + "," + num(ts.domain_max));
    for (Term t : kTerms) {
      const auto& mf = ts[t];
      out.emplace_back(prefix + ".terms." + std::string(to_string(t)),
                       num(mf.a) + "," + num(mf.b) + "," + num(mf.c) + "," + num(mf.d));
    }
  }
  out.emplace_back("rules", join(s.rules, ',', [](const FuzzyRule& r) {
                     return std::string{term_letter(r.antecedent[0]), term_letter(r.antecedent[1]),
                                        term_letter(r.antecedent[2]), ':', term_letter(r.consequent)};
                   }));
  out.emplace_back("fuzzy.grid_points", std::to_string(s.grid_points));
  out.emplace_back("classic.rsi.period", std::to_string(s.classic_rsi_period));
  out.emplace_back("classic.cci.period", std::to_string(s.classic_cci_period));
  out.emplace_back("classic.sto.setting", stoch_text(s.classic_sto));
  for (const auto& ref : kBounds) {
    const auto& bounds = s.*ref.member;
    out.emplace_back("classic." + std::string(ref.prefix) + ".bounds", num(bounds.lower) + "," + num(bounds.upper));
  }
  for (const auto& ref : kBacktestNumbers) out.emplace_back(ref.key, num(b.*ref.member));
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("none"); };
  out.emplace_back("backtest.stop_loss_pips", opt(b.stop_loss_pips));
  out.emplace_back("backtest.take_profit_pips", opt(b.take_profit_pips));
  return out;
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, value] : config_entries(cfg)) out += key + " = " + value + "\n";
  return out;
}

}  // namespace fuzzyfx
