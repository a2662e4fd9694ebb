#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "patrec/context.hpp"
#include "patrec/error.hpp"
#include "patrec/patterns.hpp"

namespace patrec {

/// Range of ratings the target user considers good, [left_border, right_border].
/// Borders may be real (the Slope One sweep filters at fractional bounds).
struct PreferenceInterval {
  double left_border = 4.0;
  double right_border = 5.0;

  bool contains(double score) const noexcept {
    return left_border <= score && score <= right_border;
  }

  /// Throws RangeError unless min_border <= left <= right <= max_border.
  void validate(const RatingBounds& bounds) const {
    if (!(left_border <= right_border) || left_border < bounds.min_border ||
        right_border > bounds.max_border) {
      throw RangeError("preference interval [" + std::to_string(left_border) + ", " +
                       std::to_string(right_border) + "] not within rating range [" +
                       std::to_string(bounds.min_border) + ", " +
                       std::to_string(bounds.max_border) + "]");
    }
  }

  /// The integer ratings inside the interval, [ceil(left), floor(right)], or
  /// nullopt when it holds no integer.
  std::optional<Interval> rating_span() const {
    const double lo = std::ceil(left_border);
    const double hi = std::floor(right_border);
    if (hi < lo) return std::nullopt;
    return Interval(static_cast<Rating>(lo), static_cast<Rating>(hi));
  }
};

}  // namespace patrec
