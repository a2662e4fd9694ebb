#pragma once

// Brute-force reference implementations over DenseContext. They share no code
// with the library: every quantity is recomputed by scanning all cells, and
// Slope One is evaluated in exact rational arithmetic.

#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "fixtures.hpp"

namespace patrec::testing {

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Fraction operator+(Fraction a, Fraction b) {
    return Fraction(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Fraction operator-(Fraction a, Fraction b) {
    return Fraction(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Fraction operator/(Fraction a, std::int64_t k) { return Fraction(a.num, a.den * k); }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Fraction a, Fraction b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(Fraction a, Fraction b) { return !(b < a); }
  friend bool operator>(Fraction a, Fraction b) { return b < a; }
  friend bool operator>=(Fraction a, Fraction b) { return !(a < b); }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct OracleInterval {
  int lo;
  int hi;
  bool operator==(const OracleInterval&) const = default;
};

/// Users (0-based) other than `excluded` whose rating of `m` is in [lo, hi].
inline std::vector<std::size_t> oracle_extent(const DenseContext& d, std::size_t m, int lo, int hi,
                                              std::optional<std::size_t> excluded) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < d.users; ++u) {
    if (excluded && u == *excluded) continue;
    const int r = d.at(u, m);
    if (r != kMissing && lo <= r && r <= hi) out.push_back(u);
  }
  return out;
}

/// Per movie: [min, max] over the users' non-missing ratings, nullopt if none.
inline std::vector<std::optional<OracleInterval>> oracle_intent(const DenseContext& d,
                                                                const std::vector<std::size_t>& a) {
  std::vector<std::optional<OracleInterval>> out(d.movies);
  for (std::size_t m = 0; m < d.movies; ++m) {
    std::vector<int> seen;
    for (const auto u : a) {
      if (d.at(u, m) != kMissing) seen.push_back(d.at(u, m));
    }
    if (seen.empty()) continue;
    int lo = seen[0];
    int hi = seen[0];
    for (int r : seen) {
      if (r < lo) lo = r;
      if (r > hi) hi = r;
    }
    out[m] = OracleInterval{lo, hi};
  }
  return out;
}

struct OracleRaps {
  std::vector<std::size_t> scores;
  /// 0-based movie indices with positive score that the target did not rate.
  std::vector<std::size_t> recommended;
};

/// Scores for integer preference [lo, hi]; the target is excluded from every
/// extent, empty extents contribute nothing.
inline OracleRaps oracle_raps(const DenseContext& d, std::size_t target, int lo, int hi) {
  OracleRaps out{std::vector<std::size_t>(d.movies, 0), {}};
  for (std::size_t t = 0; t < d.movies; ++t) {
    const int r = d.at(target, t);
    if (r == kMissing || r < lo || r > hi) continue;
    const auto a = oracle_extent(d, t, lo, hi, target);
    if (a.empty()) continue;
    const auto desc = oracle_intent(d, a);
    for (std::size_t j = 0; j < d.movies; ++j) {
      if (desc[j] && lo <= desc[j]->lo && desc[j]->hi <= hi) ++out.scores[j];
    }
  }
  for (std::size_t j = 0; j < d.movies; ++j) {
    if (out.scores[j] > 0 && d.at(target, j) == kMissing) out.recommended.push_back(j);
  }
  return out;
}

/// dev_{j,i} over users other than `excluded`: (value, support), exact.
inline std::optional<std::pair<Fraction, std::size_t>> oracle_deviation(
    const DenseContext& d, std::size_t j, std::size_t i, std::optional<std::size_t> excluded) {
  Fraction sum(0);
  std::size_t n = 0;
  for (std::size_t u = 0; u < d.users; ++u) {
    if ((excluded && u == *excluded) || d.at(u, j) == kMissing || d.at(u, i) == kMissing) continue;
    sum = sum + Fraction(d.at(u, j) - d.at(u, i));
    ++n;
  }
  if (n == 0) return std::nullopt;
  return std::make_pair(sum / static_cast<std::int64_t>(n), n);
}

/// Raw Slope One prediction for an unrated movie j, exact.
inline std::optional<Fraction> oracle_slope_one(const DenseContext& d, std::size_t target,
                                                std::size_t j) {
  Fraction sum(0);
  std::int64_t n = 0;
  for (std::size_t i = 0; i < d.movies; ++i) {
    if (i == j || d.at(target, i) == kMissing) continue;
    auto dev = oracle_deviation(d, j, i, target);
    if (!dev) continue;
    sum = sum + dev->first + Fraction(d.at(target, i));
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace patrec::testing
