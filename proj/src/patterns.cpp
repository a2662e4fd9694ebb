#include "patrec/patterns.hpp"

namespace patrec {

namespace internal {

std::vector<std::size_t> extent_indices(const RatingMatrix& matrix, std::size_t movie,
                                        const Interval& interval,
                                        std::optional<std::size_t> excluded_user) {
  std::vector<std::size_t> out;
  for (const auto& c : matrix.movie_column(movie)) {
    if (interval.contains(c.rating) && c.index != excluded_user) out.push_back(c.index);
  }
  return out;
}

IntervalVector intent_indices(const RatingMatrix& matrix, std::span<const std::size_t> users) {
  if (users.empty()) throw EmptyExtentError("intent of an empty user set");
  IntervalVector out(matrix.movies().size());
  for (const std::size_t u : users) {
    for (const auto& c : matrix.user_row(u)) {
      auto& component = out[c.index];
      component = component ? meet(*component, Interval::point(c.rating))
                            : Interval::point(c.rating);
    }
  }
  return out;
}

}  // namespace internal

IntervalVector description_of(const RatingMatrix& matrix, UserId user) {
  IntervalVector out(matrix.movies().size());
  for (const auto& c : matrix.user_row(matrix.user_index(user))) {
    out[c.index] = Interval::point(c.rating);
  }
  return out;
}

std::vector<UserId> extent_of(const RatingMatrix& matrix, MovieId movie, const Interval& interval,
                              std::optional<UserId> excluded_user) {
  std::optional<std::size_t> excluded;
  if (excluded_user) excluded = matrix.find_user(*excluded_user);
  const auto indices =
      internal::extent_indices(matrix, matrix.movie_index(movie), interval, excluded);
  std::vector<UserId> out;
  out.reserve(indices.size());
  for (const auto u : indices) out.push_back(matrix.users()[u]);
  return out;
}

std::vector<UserId> extent_of(const RatingMatrix& matrix, const IntervalVector& description) {
  if (description.size() != matrix.movies().size()) {
    throw DimensionError("description of length " + std::to_string(description.size()) +
                         " for a matrix with " + std::to_string(matrix.movies().size()) +
                         " movies");
  }
  std::vector<UserId> out;
  for (std::size_t u = 0; u < matrix.users().size(); ++u) {
    bool within = true;
    for (const auto& c : matrix.user_row(u)) {
      const auto& component = description[c.index];
      if (component && !component->contains(c.rating)) {
        within = false;
        break;
      }
    }
    if (within) out.push_back(matrix.users()[u]);
  }
  return out;
}

IntervalVector intent_of(const RatingMatrix& matrix, std::span<const UserId> users) {
  std::vector<std::size_t> indices;
  indices.reserve(users.size());
  for (const auto& u : users) indices.push_back(matrix.user_index(u));
  return internal::intent_indices(matrix, indices);
}

}  // namespace patrec
