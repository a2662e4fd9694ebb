#pragma once

// Recommendation by interval pattern structures.
//
// For every movie the target liked, take the users who liked it too (an
// extent), compute their common interval description (its intent), and count
// for each movie j how many of those descriptions place j entirely inside the
// preferred range. A positive count recommends j.

#include <cstddef>
#include <optional>
#include <vector>

#include "patrec/context.hpp"
#include "patrec/patterns.hpp"
#include "patrec/preference.hpp"

namespace patrec {

struct RapsResult {
  /// R_j per movie, indexed by matrix movie order.
  std::vector<std::size_t> scores;
  /// Movies with R_j > 0, less the target's rated movies when excluded.
  std::vector<MovieId> recommended;
  /// M_t, ascending.
  std::vector<MovieId> liked;
  /// Per movie (matrix order), the liked movies whose description counted
  /// towards its score. Empty for zero-score movies.
  std::vector<std::vector<MovieId>> evidence;

  std::size_t score(const RatingMatrix& matrix, MovieId movie) const {
    return scores[matrix.movie_index(movie)];
  }
};

/// M_t: movies the target rated inside `pref`.
std::vector<MovieId> liked_movies(const RatingMatrix& matrix, UserId target,
                                  const PreferenceInterval& pref);

RapsResult raps_recommend(const RatingMatrix& matrix, UserId target,
                          const PreferenceInterval& pref, bool exclude_rated = true);

/// The pattern concept derived from one liked movie: the other users who
/// liked it and their common description.
struct LikedDescription {
  MovieId movie;
  std::vector<UserId> extent;
  /// Absent when the extent is empty (nobody else liked the movie).
  std::optional<IntervalVector> intent;
};

/// Extents and intents behind a RAPS run, one per liked movie.
std::vector<LikedDescription> raps_trace(const RatingMatrix& matrix, UserId target,
                                         const PreferenceInterval& pref);

struct ScoredMovie {
  MovieId movie;
  double score;
};

/// Recommended movies ordered by descending score, ties by ascending id,
/// truncated to `limit` when given.
std::vector<ScoredMovie> top_n(const RatingMatrix& matrix, const RapsResult& result,
                               std::optional<std::size_t> limit = std::nullopt);

}  // namespace patrec
