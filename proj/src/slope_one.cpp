#include "patrec/slope_one.hpp"

#include <algorithm>

#include "patrec/error.hpp"

namespace patrec {

namespace {

std::optional<Deviation> deviation_indices(const RatingMatrix& matrix, std::size_t j,
                                           std::size_t i, std::optional<std::size_t> excluded) {
  const auto col_j = matrix.movie_column(j);
  const auto col_i = matrix.movie_column(i);
  long long diff_sum = 0;
  std::size_t support = 0;
  auto a = col_j.begin();
  auto b = col_i.begin();
  while (a != col_j.end() && b != col_i.end()) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      if (a->index != excluded) {
        diff_sum += a->rating - b->rating;
        ++support;
      }
      ++a;
      ++b;
    }
  }
  if (support == 0) return std::nullopt;
  return Deviation{static_cast<double>(diff_sum) / static_cast<double>(support), support};
}

std::optional<Prediction> predict_indices(const RatingMatrix& matrix, std::size_t target,
                                          std::size_t j) {
  Prediction p{matrix.movies()[j], 0.0, 0.0, {}};
  double sum = 0.0;
  for (const auto& c : matrix.user_row(target)) {
    if (c.index == j) {
      throw PreconditionError("user " + std::to_string(matrix.users()[target].value) +
                              " already rated movie " + std::to_string(p.movie.value));
    }
    if (auto dev = deviation_indices(matrix, j, c.index, target)) {
      sum += dev->value + c.rating;
      p.support.push_back(matrix.movies()[c.index]);
    }
  }
  if (p.support.empty()) return std::nullopt;
  p.raw_score = sum / static_cast<double>(p.support.size());
  p.clamped_score = std::clamp(p.raw_score, static_cast<double>(matrix.min_border()),
                               static_cast<double>(matrix.max_border()));
  return p;
}

}  // namespace

std::optional<Deviation> deviation(const RatingMatrix& matrix, MovieId movie_j, MovieId movie_i,
                                   std::optional<UserId> excluded_user) {
  const std::size_t j = matrix.movie_index(movie_j);
  const std::size_t i = matrix.movie_index(movie_i);
  if (j == i) throw PreconditionError("deviation of a movie with itself");
  std::optional<std::size_t> excluded;
  if (excluded_user) excluded = matrix.find_user(*excluded_user);
  return deviation_indices(matrix, j, i, excluded);
}

std::optional<Prediction> predict(const RatingMatrix& matrix, UserId target, MovieId movie_j) {
  return predict_indices(matrix, matrix.user_index(target), matrix.movie_index(movie_j));
}

std::vector<Prediction> predict_many(const RatingMatrix& matrix, UserId target,
                                     std::span<const MovieId> candidates) {
  const std::size_t t = matrix.user_index(target);
  std::vector<Prediction> out;
  for (const auto& m : candidates) {
    if (auto p = predict_indices(matrix, t, matrix.movie_index(m))) out.push_back(std::move(*p));
  }
  return out;
}

std::vector<Prediction> slope_one_recommend(const RatingMatrix& matrix, UserId target,
                                            const PreferenceInterval& pref) {
  const std::size_t t = matrix.user_index(target);
  std::vector<MovieId> unrated;
  const auto row = matrix.user_row(t);
  auto it = row.begin();
  for (std::size_t j = 0; j < matrix.movies().size(); ++j) {
    if (it != row.end() && it->index == j) {
      ++it;
      continue;
    }
    unrated.push_back(matrix.movies()[j]);
  }
  return slope_one_recommend(matrix, target, pref, unrated);
}

std::vector<Prediction> slope_one_recommend(const RatingMatrix& matrix, UserId target,
                                            const PreferenceInterval& pref,
                                            std::span<const MovieId> candidates) {
  pref.validate(matrix.bounds());
  auto predictions = predict_many(matrix, target, candidates);
  std::erase_if(predictions, [&](const Prediction& p) { return !pref.contains(p.clamped_score); });
  return predictions;
}

std::vector<Prediction> rank_predictions(std::vector<Prediction> predictions,
                                         std::optional<std::size_t> limit) {
  std::sort(predictions.begin(), predictions.end(), [](const Prediction& a, const Prediction& b) {
    if (a.clamped_score != b.clamped_score) return a.clamped_score > b.clamped_score;
    return a.movie < b.movie;
  });
  if (limit && predictions.size() > *limit) predictions.resize(*limit);
  return predictions;
}

}  // namespace patrec
