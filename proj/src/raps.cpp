#include "patrec/raps.hpp"

#include <algorithm>

namespace patrec {

namespace {

std::vector<std::size_t> liked_indices(const RatingMatrix& matrix, std::size_t target,
                                       const std::optional<Interval>& span) {
  std::vector<std::size_t> out;
  if (!span) return out;
  for (const auto& c : matrix.user_row(target)) {
    if (span->contains(c.rating)) out.push_back(c.index);
  }
  return out;
}

bool within(const IntervalVector::Component& component, const Interval& span) {
  return component && subsumes(span, *component);
}

}  // namespace

std::vector<MovieId> liked_movies(const RatingMatrix& matrix, UserId target,
                                  const PreferenceInterval& pref) {
  const std::size_t t = matrix.user_index(target);
  std::vector<MovieId> out;
  for (const auto m : liked_indices(matrix, t, pref.rating_span())) {
    out.push_back(matrix.movies()[m]);
  }
  return out;
}

RapsResult raps_recommend(const RatingMatrix& matrix, UserId target,
                          const PreferenceInterval& pref, bool exclude_rated) {
  const std::size_t t = matrix.user_index(target);
  pref.validate(matrix.bounds());
  const std::size_t n = matrix.movies().size();

  RapsResult result;
  result.scores.assign(n, 0);
  result.evidence.resize(n);

  const auto span = pref.rating_span();
  const auto liked = liked_indices(matrix, t, span);
  for (const auto source : liked) {
    const MovieId source_id = matrix.movies()[source];
    result.liked.push_back(source_id);
    const auto extent = internal::extent_indices(matrix, source, *span, t);
    if (extent.empty()) continue;
    const auto intent = internal::intent_indices(matrix, extent);
    for (std::size_t j = 0; j < n; ++j) {
      if (within(intent[j], *span)) {
        ++result.scores[j];
        result.evidence[j].push_back(source_id);
      }
    }
  }

  std::vector<bool> rated(n, false);
  if (exclude_rated) {
    for (const auto& c : matrix.user_row(t)) rated[c.index] = true;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (result.scores[j] > 0 && !rated[j]) result.recommended.push_back(matrix.movies()[j]);
  }
  return result;
}

std::vector<LikedDescription> raps_trace(const RatingMatrix& matrix, UserId target,
                                         const PreferenceInterval& pref) {
  const std::size_t t = matrix.user_index(target);
  pref.validate(matrix.bounds());
  const auto span = pref.rating_span();
  std::vector<LikedDescription> out;
  for (const auto source : liked_indices(matrix, t, span)) {
    LikedDescription d{matrix.movies()[source], {}, std::nullopt};
    const auto extent = internal::extent_indices(matrix, source, *span, t);
    for (const auto u : extent) d.extent.push_back(matrix.users()[u]);
    if (!extent.empty()) d.intent = internal::intent_indices(matrix, extent);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<ScoredMovie> top_n(const RatingMatrix& matrix, const RapsResult& result,
                               std::optional<std::size_t> limit) {
  std::vector<ScoredMovie> out;
  out.reserve(result.recommended.size());
  for (const auto& m : result.recommended) {
    out.push_back({m, static_cast<double>(result.score(matrix, m))});
  }
  std::stable_sort(out.begin(), out.end(), [](const ScoredMovie& a, const ScoredMovie& b) {
    return a.score > b.score;
  });
  if (limit && out.size() > *limit) out.resize(*limit);
  return out;
}

}  // namespace patrec
