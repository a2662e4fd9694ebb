#pragma once

// Interval pattern structures over a rating matrix.
//
// Descriptions are vectors of intervals, one component per movie. The meet of
// two intervals is their convex hull, so a wider interval is a more general
// description: x ⊑ y iff x contains y.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "patrec/context.hpp"
#include "patrec/error.hpp"

namespace patrec {

template <typename T>
class BasicInterval {
 public:
  using value_type = T;

  constexpr BasicInterval(T lo, T hi) : lo_(lo), hi_(hi) {
    if (hi_ < lo_) throw RangeError("interval lower bound exceeds upper bound");
  }
  /// The point interval [v, v].
  static constexpr BasicInterval point(T v) { return BasicInterval(v, v); }

  constexpr T lo() const noexcept { return lo_; }
  constexpr T hi() const noexcept { return hi_; }
  constexpr bool contains(T v) const noexcept { return lo_ <= v && v <= hi_; }

  friend bool operator==(const BasicInterval&, const BasicInterval&) = default;

 private:
  T lo_;
  T hi_;
};

/// Ratings are integers, so the algebra never compares floating-point values.
using Interval = BasicInterval<Rating>;

template <typename T>
constexpr BasicInterval<T> meet(const BasicInterval<T>& x, const BasicInterval<T>& y) {
  return BasicInterval<T>(std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi()));
}

/// x ⊑ y: x is at least as general as y, i.e. x ⊇ y.
template <typename T>
constexpr bool subsumes(const BasicInterval<T>& x, const BasicInterval<T>& y) {
  return x.lo() <= y.lo() && x.hi() >= y.hi();
}

/// Fixed-length vector of intervals indexed by the matrix movie order. A
/// component is undefined (nullopt) when nobody contributing to it rated that
/// movie; it acts as the neutral element of meet.
template <typename T>
class BasicIntervalVector {
 public:
  using Component = std::optional<BasicInterval<T>>;

  BasicIntervalVector() = default;
  explicit BasicIntervalVector(std::size_t n) : components_(n) {}
  explicit BasicIntervalVector(std::vector<Component> components)
      : components_(std::move(components)) {}

  std::size_t size() const noexcept { return components_.size(); }
  const Component& operator[](std::size_t j) const { return components_[j]; }
  Component& operator[](std::size_t j) { return components_[j]; }
  std::span<const Component> components() const noexcept { return components_; }

  std::size_t defined_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        components_.begin(), components_.end(), [](const Component& c) { return c.has_value(); }));
  }

  friend bool operator==(const BasicIntervalVector&, const BasicIntervalVector&) = default;

 private:
  std::vector<Component> components_;
};

using IntervalVector = BasicIntervalVector<Rating>;

template <typename T>
std::optional<BasicInterval<T>> meet(const std::optional<BasicInterval<T>>& x,
                                     const std::optional<BasicInterval<T>>& y) {
  if (!x) return y;
  if (!y) return x;
  return meet(*x, *y);
}

/// Component order extended to undefined values: every component subsumes
/// undefined, and undefined subsumes only itself.
template <typename T>
bool subsumes(const std::optional<BasicInterval<T>>& x,
              const std::optional<BasicInterval<T>>& y) {
  if (!y) return true;
  if (!x) return false;
  return subsumes(*x, *y);
}

template <typename T>
BasicIntervalVector<T> meet(const BasicIntervalVector<T>& e, const BasicIntervalVector<T>& f) {
  if (e.size() != f.size()) {
    throw DimensionError("interval vectors of length " + std::to_string(e.size()) + " and " +
                         std::to_string(f.size()));
  }
  BasicIntervalVector<T> out(e.size());
  for (std::size_t j = 0; j < e.size(); ++j) out[j] = meet(e[j], f[j]);
  return out;
}

template <typename T>
bool subsumes(const BasicIntervalVector<T>& e, const BasicIntervalVector<T>& f) {
  if (e.size() != f.size()) {
    throw DimensionError("interval vectors of length " + std::to_string(e.size()) + " and " +
                         std::to_string(f.size()));
  }
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (!subsumes(e[j], f[j])) return false;
  }
  return true;
}

/// δ(u): the user's row as point intervals, missing ratings undefined.
IntervalVector description_of(const RatingMatrix& matrix, UserId user);

/// [interval]^□ restricted to one movie: users other than `excluded_user`
/// whose rating of `movie` lies in `interval`.
std::vector<UserId> extent_of(const RatingMatrix& matrix, MovieId movie, const Interval& interval,
                              std::optional<UserId> excluded_user = std::nullopt);

/// d^□: users u with d ⊑ δ(u) on every component defined in both d and δ(u).
std::vector<UserId> extent_of(const RatingMatrix& matrix, const IntervalVector& description);

/// A^□: componentwise [min, max] over the non-missing ratings of `users`.
/// Throws EmptyExtentError when `users` is empty.
IntervalVector intent_of(const RatingMatrix& matrix, std::span<const UserId> users);

namespace internal {

// Index-level forms used by the recommenders. User indices are ascending.
std::vector<std::size_t> extent_indices(const RatingMatrix& matrix, std::size_t movie,
                                        const Interval& interval,
                                        std::optional<std::size_t> excluded_user);
IntervalVector intent_indices(const RatingMatrix& matrix, std::span<const std::size_t> users);

}  // namespace internal

}  // namespace patrec
