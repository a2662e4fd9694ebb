#pragma once

// Sparse many-valued rating context: users x movies, each cell either a
// rating or missing. Missing cells are simply absent from the structure.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace patrec {

struct UserId {
  std::int64_t value = 0;
  auto operator<=>(const UserId&) const = default;
};

struct MovieId {
  std::int64_t value = 0;
  auto operator<=>(const MovieId&) const = default;
};

using Rating = int;

struct RatingBounds {
  Rating min_border = 1;
  Rating max_border = 5;

  bool contains(Rating r) const noexcept { return min_border <= r && r <= max_border; }
};

struct RatingEntry {
  UserId user;
  MovieId movie;
  Rating rating = 0;
  std::int64_t timestamp = 0;

  bool operator==(const RatingEntry&) const = default;
};

/// One non-missing cell as seen from a row or a column. `index` is the dense
/// index of the other axis (movie index in a user row, user index in a movie
/// column).
struct Cell {
  std::size_t index;
  Rating rating;
};

/// Immutable sparse rating matrix.
///
/// Users and movies are kept in ascending identifier order; the dense index of
/// an identifier is its position in that order and never changes. Rows and
/// columns are stored sorted by the other axis' index.
class RatingMatrix {
 public:
  RatingMatrix() = default;

  /// Builds the matrix from `entries`. The user and movie sets are the
  /// identifiers found in `entries` plus any listed in `extra_users` /
  /// `extra_movies` (which may have no ratings at all).
  ///
  /// Throws DuplicateEntryError on a repeated (user, movie) pair and
  /// RangeError on a rating outside `bounds`.
  RatingMatrix(std::vector<RatingEntry> entries, RatingBounds bounds,
               std::span<const UserId> extra_users = {},
               std::span<const MovieId> extra_movies = {});

  std::span<const UserId> users() const noexcept { return users_; }
  std::span<const MovieId> movies() const noexcept { return movies_; }
  /// Entries sorted by (user, movie).
  std::span<const RatingEntry> entries() const noexcept { return entries_; }
  std::size_t num_entries() const noexcept { return entries_.size(); }
  const RatingBounds& bounds() const noexcept { return bounds_; }
  Rating min_border() const noexcept { return bounds_.min_border; }
  Rating max_border() const noexcept { return bounds_.max_border; }

  std::optional<std::size_t> find_user(UserId u) const noexcept;
  std::optional<std::size_t> find_movie(MovieId m) const noexcept;
  /// Like find_*, but throw UnknownIdentifierError.
  std::size_t user_index(UserId u) const;
  std::size_t movie_index(MovieId m) const;

  /// Rating of `u` for `m`, or nullopt when missing. Unknown identifiers throw.
  std::optional<Rating> lookup(UserId u, MovieId m) const;
  std::optional<Rating> lookup_index(std::size_t user, std::size_t movie) const noexcept;

  std::span<const Cell> user_row(std::size_t user) const noexcept;
  std::span<const Cell> movie_column(std::size_t movie) const noexcept;

  /// The entries of one user, in movie order.
  std::span<const RatingEntry> user_entries(std::size_t user) const noexcept;

 private:
  RatingBounds bounds_;
  std::vector<UserId> users_;
  std::vector<MovieId> movies_;
  std::vector<RatingEntry> entries_;
  // CSR by user and CSC by movie.
  std::vector<std::size_t> row_offsets_;
  std::vector<Cell> row_cells_;
  std::vector<std::size_t> col_offsets_;
  std::vector<Cell> col_cells_;
};

/// Reads MovieLens `u.data`: one record per LF-terminated line, four decimal
/// integer fields (user, item, rating, timestamp) separated by a single TAB.
RatingMatrix load_movielens(std::istream& in, RatingBounds bounds = {});
RatingMatrix load_movielens_file(const std::filesystem::path& path, RatingBounds bounds = {});

/// Writes entries in `u.data` format, in (user, movie) order.
void write_movielens(std::ostream& out, const RatingMatrix& matrix);

/// S(u): movies with a non-missing rating by `user`, ascending.
std::vector<MovieId> rated_movies(const RatingMatrix& matrix, UserId user);

/// Users other than `excluded_user` who rated both movies, ascending.
std::vector<UserId> co_raters(const RatingMatrix& matrix, MovieId movie_j, MovieId movie_i,
                              std::optional<UserId> excluded_user = std::nullopt);

}  // namespace patrec

template <>
struct std::hash<patrec::UserId> {
  std::size_t operator()(const patrec::UserId& u) const noexcept {
    return std::hash<std::int64_t>{}(u.value);
  }
};

template <>
struct std::hash<patrec::MovieId> {
  std::size_t operator()(const patrec::MovieId& m) const noexcept {
    return std::hash<std::int64_t>{}(m.value);
  }
};
