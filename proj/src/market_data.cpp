#include "fuzzyfx/market_data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "fuzzyfx/errors.hpp"

namespace fuzzyfx {

namespace {

constexpr std::array<std::string_view, 6> kColumns = {"timestamp", "open", "high", "low", "close", "volume"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

template <typename Int>
bool parse_fixed(std::string_view text, std::size_t pos, std::size_t len, Int& out) {
  if (pos + len > text.size()) return false;
  const auto field = text.substr(pos, len);
  if (!std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
  std::from_chars(field.data(), field.data() + field.size(), out);
  return true;
}

[[noreturn]] void malformed(std::size_t row, const std::string& reason) {
  throw ParseError(ParseErrorKind::MalformedRow, row, "row " + std::to_string(row) + ": " + reason);
}

}  // namespace

std::vector<double> CandleSeries::closes() const {
  std::vector<double> out;
  out.reserve(candles.size());
  for (const auto& c : candles) out.push_back(c.close);
  return out;
}

std::vector<double> CandleSeries::typical_prices() const {
  std::vector<double> out;
  out.reserve(candles.size());
  for (const auto& c : candles) out.push_back((c.high + c.low + c.close) / 3.0);
  return out;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS followed by Z or +00:00
  int year = 0;
  unsigned month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (text.size() < 20) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
      text[16] != ':')
    return std::nullopt;
  if (!parse_fixed(text, 0, 4, year) || !parse_fixed(text, 5, 2, month) || !parse_fixed(text, 8, 2, day) ||
      !parse_fixed(text, 11, 2, hour) || !parse_fixed(text, 14, 2, minute) || !parse_fixed(text, 17, 2, second))
    return std::nullopt;
  const auto zone = text.substr(19);
  if (zone != "Z" && zone != "+00:00") return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!ymd.ok()) return std::nullopt;
  return Timestamp{std::chrono::sys_days{ymd}} + std::chrono::hours{hour} + std::chrono::minutes{minute} +
         std::chrono::seconds{second};
}

std::string format_timestamp(Timestamp ts) {
  const auto days = std::chrono::floor<std::chrono::days>(ts);
  const std::chrono::year_month_day ymd{days};
  const std::chrono::hh_mm_ss hms{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void validate_candle(const Candle& c, std::size_t row) {
  if (!(c.open > 0.0 && c.high > 0.0 && c.low > 0.0 && c.close > 0.0)) malformed(row, "prices must be positive");
  if (!(c.volume >= 0.0)) malformed(row, "volume must be non-negative");
  if (c.low > c.high) malformed(row, "OHLC violation: low above high");
  if (c.low > std::min(c.open, c.close)) malformed(row, "OHLC violation: low above open/close");
  if (c.high < std::max(c.open, c.close)) malformed(row, "OHLC violation: high below open/close");
}

CandleSeries parse_candles(std::string_view csv_text, std::string symbol, std::string timeframe) {
  if (csv_text.starts_with("\xEF\xBB\xBF")) csv_text.remove_prefix(3);

  CandleSeries series{std::move(symbol), std::move(timeframe), {}};
  std::array<std::size_t, kColumns.size()> column_of{};
  std::size_t field_count = 0;
  bool have_header = false;
  std::size_t row = 0;

  std::size_t start = 0;
  while (start <= csv_text.size()) {
    auto end = csv_text.find('\n', start);
    if (end == std::string_view::npos) end = csv_text.size();
    auto line = csv_text.substr(start, end - start);
    start = end + 1;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (trim(line).empty()) continue;

    const auto fields = split(line, ',');
    if (!have_header) {
      for (std::size_t k = 0; k < kColumns.size(); ++k) {
        const auto it = std::find(fields.begin(), fields.end(), kColumns[k]);
        if (it == fields.end())
          throw ParseError(ParseErrorKind::MissingColumn, 0,
                           "header is missing required column '" + std::string(kColumns[k]) + "'");
        column_of[k] = static_cast<std::size_t>(it - fields.begin());
      }
      field_count = fields.size();
      have_header = true;
      continue;
    }

    ++row;
    if (fields.size() != field_count)
      malformed(row, "expected " + std::to_string(field_count) + " fields, found " + std::to_string(fields.size()));

    Candle candle;
    const auto ts = parse_timestamp(fields[column_of[0]]);
    if (!ts) malformed(row, "bad timestamp '" + std::string(fields[column_of[0]]) + "'");
    candle.timestamp = *ts;
    std::array<double*, 5> targets = {&candle.open, &candle.high, &candle.low, &candle.close, &candle.volume};
    for (std::size_t k = 1; k < kColumns.size(); ++k) {
      const auto value = parse_number(fields[column_of[k]]);
      if (!value)
        malformed(row, "bad " + std::string(kColumns[k]) + " value '" + std::string(fields[column_of[k]]) + "'");
      *targets[k - 1] = *value;
    }
    validate_candle(candle, row);

    if (!series.candles.empty() && candle.timestamp <= series.candles.back().timestamp)
      throw ParseError(ParseErrorKind::NonMonotonicTimestamp, row,
                       "row " + std::to_string(row) + ": timestamp not after previous row");
    series.candles.push_back(candle);
  }

  if (!have_header) throw ParseError(ParseErrorKind::MissingColumn, 0, "input has no header row");
  if (series.candles.empty()) throw ParseError(ParseErrorKind::EmptySeries, 0, "input has no data rows");
  return series;
}

CandleSeries load_candles(const std::string& path, std::string symbol, std::string timeframe) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(ParseErrorKind::MalformedRow, 0, "cannot read data file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_candles(buf.str(), std::move(symbol), std::move(timeframe));
}

std::string to_csv(const CandleSeries& series) {
  std::string out = "timestamp,open,high,low,close,volume\n";
  for (const auto& c : series.candles) {
    out += format_timestamp(c.timestamp);
    for (double v : {c.open, c.high, c.low, c.close, c.volume}) {
      out += ',';
      out += format_number(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace fuzzyfx
