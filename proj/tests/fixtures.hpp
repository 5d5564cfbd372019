#pragma once

// Deterministic candle generators shared by the unit and acceptance suites.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "fuzzyfx/market_data.hpp"

namespace fixtures {

using fuzzyfx::Candle;
using fuzzyfx::CandleSeries;

inline fuzzyfx::Timestamp hour(std::size_t i) {
  using namespace std::chrono;
  return fuzzyfx::Timestamp{sys_days{year{2022} / January / 3}} + hours{static_cast<long>(i)};
}

inline CandleSeries from_closes(const std::vector<double>& closes, double wick = 0.0) {
  CandleSeries s{"TEST", "H1", {}};
  for (std::size_t i = 0; i < closes.size(); ++i) {
    const double open = i == 0 ? closes[0] : closes[i - 1];
    const double c = closes[i];
    s.candles.push_back({hour(i), open, std::max(open, c) + wick, std::min(open, c) - wick, c, 100.0});
  }
  return s;
}

/// Geometric random walk with random wicks; prices stay near `start`.
inline CandleSeries random_walk(std::uint64_t seed, std::size_t bars, double start = 1.13, double vol = 0.0015) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, vol);
  std::uniform_real_distribution<double> wick(0.0, vol);
  CandleSeries s{"RND", "H1", {}};
  double price = start;
  for (std::size_t i = 0; i < bars; ++i) {
    const double open = price;
    price *= std::exp(step(rng));
    const double close = price;
    const double high = std::max(open, close) * (1.0 + wick(rng));
    const double low = std::min(open, close) * (1.0 - wick(rng));
    s.candles.push_back({hour(i), open, high, low, close, std::floor(wick(rng) * 1e6)});
  }
  return s;
}

inline CandleSeries flat(std::size_t bars, double price = 1.1372) {
  return from_closes(std::vector<double>(bars, price));
}

inline CandleSeries rising(std::size_t bars, double start = 1.1, double step = 0.0005) {
  std::vector<double> closes;
  for (std::size_t i = 0; i < bars; ++i) closes.push_back(start + step * static_cast<double>(i));
  return from_closes(closes);
}

inline CandleSeries scaled(const CandleSeries& s, double c) {
  CandleSeries out = s;
  for (auto& k : out.candles) {
    k.open *= c;
    k.high *= c;
    k.low *= c;
    k.close *= c;
  }
  return out;
}

/// 50 flat bars at 1.20, a 30-bar monotone slide of 20 pips per bar, then a
/// stall at the bottom. Every oscillator sits deep in its oversold zone
/// from the late slide into the stall.
struct Oversold {
  static constexpr std::size_t kFlat = 50;
  static constexpr std::size_t kSlide = 30;
  static constexpr std::size_t kStall = 10;
  // First stall bar.
  static constexpr std::size_t kDesignedBar = kFlat + kSlide;

  static CandleSeries series() {
    std::vector<double> closes(kFlat, 1.20);
    for (std::size_t i = 1; i <= kSlide; ++i) closes.push_back(1.20 - 0.0020 * static_cast<double>(i));
    for (std::size_t i = 0; i < kStall; ++i) closes.push_back(closes.back());
    return from_closes(closes);
  }
};

}  // namespace fixtures
