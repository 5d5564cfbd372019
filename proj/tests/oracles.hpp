#pragma once

// Direct-from-definition recomputations used as independent references.
// Everything is recomputed from scratch per index in long double; nothing
// here calls into the library's indicator or metric code.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "fuzzyfx/market_data.hpp"

namespace oracle {

using Column = std::vector<std::optional<double>>;

inline Column sma(const std::vector<std::optional<double>>& v, int period) {
  Column out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < static_cast<std::size_t>(period)) continue;
    long double sum = 0;
    bool ok = true;
    for (std::size_t j = i + 1 - period; j <= i; ++j) {
      if (!v[j]) ok = false;
      else sum += *v[j];
    }
    if (ok) out[i] = static_cast<double>(sum / period);
  }
  return out;
}

/// RSI = 100 - 100 / (1 + RS), RS = average gain / average loss, with the
/// averages seeded by simple means and then carried by Wilder's recurrence.
/// Re-runs the whole recurrence for every index.
inline Column rsi(const std::vector<double>& closes, int period) {
  Column out(closes.size());
  for (std::size_t i = period; i < closes.size(); ++i) {
    long double gain = 0, loss = 0;
    for (int j = 1; j <= period; ++j) {
      const long double d = static_cast<long double>(closes[j]) - closes[j - 1];
      if (d > 0) gain += d;
      if (d < 0) loss -= d;
    }
    gain /= period;
    loss /= period;
    for (std::size_t j = period + 1; j <= i; ++j) {
      const long double d = static_cast<long double>(closes[j]) - closes[j - 1];
      gain = (gain * (period - 1) + (d > 0 ? d : 0)) / period;
      loss = (loss * (period - 1) + (d < 0 ? -d : 0)) / period;
    }
    if (loss == 0) out[i] = gain == 0 ? 50.0 : 100.0;
    else out[i] = static_cast<double>(100 - 100 / (1 + gain / loss));
  }
  return out;
}

inline Column cci(const fuzzyfx::CandleSeries& s, int period) {
  Column out(s.size());
  auto tp = [&](std::size_t j) {
    return (static_cast<long double>(s[j].high) + s[j].low + s[j].close) / 3;
  };
  for (std::size_t i = period - 1; i < s.size(); ++i) {
    long double mean = 0;
    for (std::size_t j = i + 1 - period; j <= i; ++j) mean += tp(j);
    mean /= period;
    long double md = 0;
    for (std::size_t j = i + 1 - period; j <= i; ++j) md += std::fabs(tp(j) - mean);
    md /= period;
    out[i] = md < 1e-15L ? 0.0 : static_cast<double>((tp(i) - mean) / (0.015L * md));
  }
  return out;
}

struct Stochastic {
  Column raw, k, d;
};

inline Stochastic stochastic(const fuzzyfx::CandleSeries& s, int k_period, int d_period, int slowing) {
  Stochastic out;
  out.raw.resize(s.size());
  for (std::size_t i = k_period - 1; i < s.size(); ++i) {
    const auto first = s.candles.begin() + static_cast<std::ptrdiff_t>(i + 1 - k_period);
    const auto last = s.candles.begin() + static_cast<std::ptrdiff_t>(i + 1);
    const double hh = std::max_element(first, last, [](auto& a, auto& b) { return a.high < b.high; })->high;
    const double ll = std::min_element(first, last, [](auto& a, auto& b) { return a.low < b.low; })->low;
    out.raw[i] = hh == ll ? 50.0 : static_cast<double>(100.0L * (s[i].close - ll) / (static_cast<long double>(hh) - ll));
  }
  out.k = sma(out.raw, slowing);
  out.d = sma(out.k, d_period);
  return out;
}

/// max over all (peak index <= trough index) pairs of (peak - trough) / peak.
inline double max_drawdown(const std::vector<double>& equity) {
  double worst = 0.0;
  for (std::size_t i = 0; i < equity.size(); ++i)
    for (std::size_t j = i; j < equity.size(); ++j)
      if (equity[i] > 0.0) worst = std::max(worst, (equity[i] - equity[j]) / equity[i]);
  return worst;
}

/// Centroid of an unclipped trapezoid (a, b, c, d) by decomposition into
/// two triangles and a rectangle.
inline double trapezoid_centroid(double a, double b, double c, double d) {
  const double left = (b - a) / 2.0, mid = c - b, right = (d - c) / 2.0;
  const double moment = left * (a + 2.0 * (b - a) / 3.0) + mid * (b + c) / 2.0 + right * (c + (d - c) / 3.0);
  return moment / (left + mid + right);
}

}  // namespace oracle
