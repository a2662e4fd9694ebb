#pragma once

// Slope One rating prediction with per-target exclusion: the deviation
// between two movies is averaged over their common raters other than the
// target user.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "patrec/context.hpp"
#include "patrec/preference.hpp"

namespace patrec {

struct Deviation {
  double value;
  std::size_t support;
};

struct Prediction {
  MovieId movie;
  double raw_score;
  /// raw_score clamped into [min_border, max_border].
  double clamped_score;
  /// Rated movies whose deviation entered the average; never empty.
  std::vector<MovieId> support;
};

/// dev_{j,i}: mean of r_{u,j} - r_{u,i} over co-raters of j and i other
/// than `excluded_user`, together with the number of such co-raters. Absent
/// when there are none. Requires movie_j != movie_i.
std::optional<Deviation> deviation(const RatingMatrix& matrix, MovieId movie_j, MovieId movie_i,
                                   std::optional<UserId> excluded_user = std::nullopt);

/// Predicted rating of `movie_j` for `target`, absent when no rated movie
/// shares a co-rater with it. Throws PreconditionError if the target already
/// rated `movie_j`.
std::optional<Prediction> predict(const RatingMatrix& matrix, UserId target, MovieId movie_j);

/// Every predictable movie the target has not rated whose clamped score lies
/// in `pref`, in movie order.
std::vector<Prediction> slope_one_recommend(const RatingMatrix& matrix, UserId target,
                                            const PreferenceInterval& pref);

/// Same, but only `candidates` are considered. Equivalent to filtering the
/// full recommendation by `candidates`, at a fraction of the cost.
std::vector<Prediction> slope_one_recommend(const RatingMatrix& matrix, UserId target,
                                            const PreferenceInterval& pref,
                                            std::span<const MovieId> candidates);

/// Unfiltered predictions for `candidates` (all unrated by the target);
/// unpredictable candidates are omitted.
std::vector<Prediction> predict_many(const RatingMatrix& matrix, UserId target,
                                     std::span<const MovieId> candidates);

/// Descending clamped score, ties by ascending movie id, at most `limit`.
std::vector<Prediction> rank_predictions(std::vector<Prediction> predictions,
                                         std::optional<std::size_t> limit = std::nullopt);

}  // namespace patrec
