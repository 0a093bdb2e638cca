#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace stochedit {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kLogZero; }

// log(exp(a) + exp(b)) without overflow; log-zero is the identity.
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

inline double log_add(double a, double b, double c) {
  const double m = std::max({a, b, c});
  if (m == kLogZero) return kLogZero;
  return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

// Natural-log value to bits of cost: -log2(p) given ln(p).
inline double nats_to_bits(double log_p) {
  if (log_p == kLogZero) return kInfinity;
  return -log_p / std::numbers::ln2;
}

}  // namespace stochedit
