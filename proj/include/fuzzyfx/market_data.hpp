#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzyfx {

using Timestamp = std::chrono::sys_seconds;

struct Candle {
  Timestamp timestamp;
  double open = 0.0;
  double high = 0.0;
  double low = 0.0;
  double close = 0.0;
  double volume = 0.0;

  bool operator==(const Candle&) const = default;
};

/// Ordered, validated OHLCV bars for one symbol. Timestamps are strictly
/// increasing and every candle satisfies the OHLC ordering constraints.
struct CandleSeries {
  std::string symbol;
  std::string timeframe;
  std::vector<Candle> candles;

  std::size_t size() const noexcept { return candles.size(); }
  bool empty() const noexcept { return candles.empty(); }
  const Candle& operator[](std::size_t i) const { return candles[i]; }

  std::vector<double> closes() const;
  // (high + low + close) / 3 per bar.
  std::vector<double> typical_prices() const;

  bool operator==(const CandleSeries&) const = default;
};

/// Parses `timestamp,open,high,low,close,volume` CSV text. Columns may appear
/// in any order; extra columns are ignored. Throws ParseError.
CandleSeries parse_candles(std::string_view csv_text, std::string symbol, std::string timeframe = "");

/// Reads and parses a CSV file; an unreadable file is reported as ParseError
/// of kind MalformedRow at row 0.
CandleSeries load_candles(const std::string& path, std::string symbol, std::string timeframe = "");

/// Inverse of parse_candles: canonical header, shortest round-trip numbers.
std::string to_csv(const CandleSeries& series);

/// Throws ParseError(MalformedRow) if the candle violates an OHLCV invariant.
void validate_candle(const Candle& candle, std::size_t row);

// ISO 8601 UTC, `YYYY-MM-DDTHH:MM:SSZ` (or a `+00:00` suffix).
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// Shortest representation that parses back to the same double.
std::string format_number(double value);

}  // namespace fuzzyfx
