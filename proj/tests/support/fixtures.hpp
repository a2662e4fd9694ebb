#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "patrec/context.hpp"

namespace patrec::testing {

inline constexpr int kMissing = 0;

/// Dense users x movies grid, 0 = missing. User k has id k+1, movie k has id k+1.
struct DenseContext {
  std::size_t users = 0;
  std::size_t movies = 0;
  std::vector<int> cells;

  int at(std::size_t u, std::size_t m) const { return cells[u * movies + m]; }
  int& at(std::size_t u, std::size_t m) { return cells[u * movies + m]; }
};

/// Every user and movie is registered even when its row or column is empty.
inline RatingMatrix to_matrix(const DenseContext& dense, RatingBounds bounds = {}) {
  std::vector<RatingEntry> entries;
  std::vector<UserId> users;
  std::vector<MovieId> movies;
  for (std::size_t u = 0; u < dense.users; ++u) users.push_back(UserId{std::int64_t(u + 1)});
  for (std::size_t m = 0; m < dense.movies; ++m) movies.push_back(MovieId{std::int64_t(m + 1)});
  for (std::size_t u = 0; u < dense.users; ++u) {
    for (std::size_t m = 0; m < dense.movies; ++m) {
      if (dense.at(u, m) != kMissing) {
        entries.push_back({users[u], movies[m], dense.at(u, m),
                           std::int64_t(1000 + u * dense.movies + m)});
      }
    }
  }
  return RatingMatrix(std::move(entries), bounds, users, movies);
}

/// Slope One example: 3 users x 3 movies.
inline DenseContext slope_one_context() {
  return {3, 3, {5, 3, 2,  //
                 3, 4, kMissing,  //
                 kMissing, 2, 5}};
}

/// RAPS example: 7 users x 6 movies.
inline DenseContext raps_context() {
  return {7, 6, {5, 3, 1, 3, 5, 3,  //
                 4, 4, 1, 5, 4, 3,  //
                 5, kMissing, kMissing, 3, kMissing, 4,  //
                 kMissing, 3, 4, kMissing, 2, 4,  //
                 4, kMissing, 4, 5, 4, kMissing,  //
                 3, 4, 5, 5, kMissing, 3,  //
                 5, 4, 2, kMissing, kMissing, kMissing}};
}

/// Each cell missing with probability `missing`, otherwise uniform in 1..5.
inline DenseContext random_context(std::mt19937_64& rng, std::size_t users, std::size_t movies,
                                   double missing = 1.0 / 6.0) {
  DenseContext d{users, movies, std::vector<int>(users * movies, kMissing)};
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> rating(1, 5);
  for (auto& c : d.cells) c = coin(rng) < missing ? kMissing : rating(rng);
  return d;
}

inline UserId user(std::int64_t id) { return UserId{id}; }
inline MovieId movie(std::int64_t id) { return MovieId{id}; }

inline std::vector<UserId> users(std::initializer_list<std::int64_t> ids) {
  std::vector<UserId> out;
  for (auto id : ids) out.push_back(UserId{id});
  return out;
}

inline std::vector<MovieId> movies(std::initializer_list<std::int64_t> ids) {
  std::vector<MovieId> out;
  for (auto id : ids) out.push_back(MovieId{id});
  return out;
}

}  // namespace patrec::testing
