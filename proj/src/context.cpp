#include "patrec/context.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>

#include "patrec/error.hpp"

namespace patrec {

namespace {

template <typename Id>
std::optional<std::size_t> find_sorted(const std::vector<Id>& ids, Id id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

template <typename Id>
void sort_unique(std::vector<Id>& ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

RatingMatrix::RatingMatrix(std::vector<RatingEntry> entries, RatingBounds bounds,
                           std::span<const UserId> extra_users,
                           std::span<const MovieId> extra_movies)
    : bounds_(bounds), entries_(std::move(entries)) {
  if (bounds_.min_border > bounds_.max_border) {
    throw RangeError("rating bounds: min_border " + std::to_string(bounds_.min_border) +
                     " exceeds max_border " + std::to_string(bounds_.max_border));
  }
  std::sort(entries_.begin(), entries_.end(), [](const RatingEntry& a, const RatingEntry& b) {
    return std::tie(a.user, a.movie) < std::tie(b.user, b.movie);
  });

  users_.assign(extra_users.begin(), extra_users.end());
  movies_.assign(extra_movies.begin(), extra_movies.end());
  users_.reserve(users_.size() + entries_.size());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (k > 0 && entries_[k - 1].user == e.user && entries_[k - 1].movie == e.movie) {
      throw DuplicateEntryError("duplicate rating for user " + std::to_string(e.user.value) +
                                ", movie " + std::to_string(e.movie.value));
    }
    if (!bounds_.contains(e.rating)) {
      throw RangeError("rating " + std::to_string(e.rating) + " for user " +
                       std::to_string(e.user.value) + ", movie " + std::to_string(e.movie.value) +
                       " outside [" + std::to_string(bounds_.min_border) + ", " +
                       std::to_string(bounds_.max_border) + "]");
    }
    users_.push_back(e.user);
    movies_.push_back(e.movie);
  }
  sort_unique(users_);
  sort_unique(movies_);

  // Entries are sorted by (user, movie) so rows come out ordered by movie.
  row_offsets_.assign(users_.size() + 1, 0);
  col_offsets_.assign(movies_.size() + 1, 0);
  row_cells_.reserve(entries_.size());
  std::vector<std::size_t> entry_movie(entries_.size());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const std::size_t u = *find_sorted(users_, entries_[k].user);
    const std::size_t m = *find_sorted(movies_, entries_[k].movie);
    entry_movie[k] = m;
    ++row_offsets_[u + 1];
    ++col_offsets_[m + 1];
    row_cells_.push_back({m, entries_[k].rating});
  }
  for (std::size_t u = 0; u < users_.size(); ++u) row_offsets_[u + 1] += row_offsets_[u];
  for (std::size_t m = 0; m < movies_.size(); ++m) col_offsets_[m + 1] += col_offsets_[m];

  // Walking users in order keeps every column sorted by user index.
  col_cells_.resize(entries_.size());
  std::vector<std::size_t> fill(col_offsets_.begin(), col_offsets_.end() - 1);
  for (std::size_t u = 0; u < users_.size(); ++u) {
    for (std::size_t k = row_offsets_[u]; k < row_offsets_[u + 1]; ++k) {
      col_cells_[fill[entry_movie[k]]++] = {u, row_cells_[k].rating};
    }
  }
}

std::optional<std::size_t> RatingMatrix::find_user(UserId u) const noexcept {
  return find_sorted(users_, u);
}

std::optional<std::size_t> RatingMatrix::find_movie(MovieId m) const noexcept {
  return find_sorted(movies_, m);
}

std::size_t RatingMatrix::user_index(UserId u) const {
  if (auto idx = find_user(u)) return *idx;
  throw UnknownIdentifierError("unknown user " + std::to_string(u.value));
}

std::size_t RatingMatrix::movie_index(MovieId m) const {
  if (auto idx = find_movie(m)) return *idx;
  throw UnknownIdentifierError("unknown movie " + std::to_string(m.value));
}

std::optional<Rating> RatingMatrix::lookup(UserId u, MovieId m) const {
  return lookup_index(user_index(u), movie_index(m));
}

std::optional<Rating> RatingMatrix::lookup_index(std::size_t user,
                                                 std::size_t movie) const noexcept {
  const auto row = user_row(user);
  auto it = std::lower_bound(row.begin(), row.end(), movie,
                             [](const Cell& c, std::size_t m) { return c.index < m; });
  if (it == row.end() || it->index != movie) return std::nullopt;
  return it->rating;
}

std::span<const Cell> RatingMatrix::user_row(std::size_t user) const noexcept {
  return {row_cells_.data() + row_offsets_[user], row_offsets_[user + 1] - row_offsets_[user]};
}

std::span<const Cell> RatingMatrix::movie_column(std::size_t movie) const noexcept {
  return {col_cells_.data() + col_offsets_[movie], col_offsets_[movie + 1] - col_offsets_[movie]};
}

std::span<const RatingEntry> RatingMatrix::user_entries(std::size_t user) const noexcept {
  return {entries_.data() + row_offsets_[user], row_offsets_[user + 1] - row_offsets_[user]};
}

namespace {

template <typename Int>
Int parse_field(std::string_view field, std::size_t line_no, const char* name) {
  Int value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(line_no, std::string("field '") + name + "' is not a decimal integer: '" +
                                  std::string(field) + "'");
  }
  return value;
}

}  // namespace

RatingMatrix load_movielens(std::istream& in, RatingBounds bounds) {
  static constexpr const char* kFieldNames[] = {"user id", "item id", "rating", "timestamp"};
  std::vector<RatingEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::string_view fields[4];
    std::size_t count = 0;
    while (true) {
      const auto tab = rest.find('\t');
      if (count < 4) fields[count] = rest.substr(0, tab);
      ++count;
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (count != 4) {
      throw ParseError(line_no, "expected 4 TAB-separated fields, found " + std::to_string(count));
    }
    RatingEntry e;
    e.user = UserId{parse_field<std::int64_t>(fields[0], line_no, kFieldNames[0])};
    e.movie = MovieId{parse_field<std::int64_t>(fields[1], line_no, kFieldNames[1])};
    e.rating = parse_field<Rating>(fields[2], line_no, kFieldNames[2]);
    e.timestamp = parse_field<std::int64_t>(fields[3], line_no, kFieldNames[3]);
    if (!bounds.contains(e.rating)) {
      throw ParseError(line_no, "rating " + std::to_string(e.rating) + " outside [" +
                                    std::to_string(bounds.min_border) + ", " +
                                    std::to_string(bounds.max_border) + "]");
    }
    entries.push_back(e);
  }
  if (in.bad()) throw Error("read failure while loading ratings");
  return RatingMatrix(std::move(entries), bounds);
}

RatingMatrix load_movielens_file(const std::filesystem::path& path, RatingBounds bounds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open ratings file " + path.string());
  return load_movielens(in, bounds);
}

void write_movielens(std::ostream& out, const RatingMatrix& matrix) {
  for (const auto& e : matrix.entries()) {
    out << e.user.value << '\t' << e.movie.value << '\t' << e.rating << '\t' << e.timestamp
        << '\n';
  }
}

std::vector<MovieId> rated_movies(const RatingMatrix& matrix, UserId user) {
  const auto row = matrix.user_row(matrix.user_index(user));
  std::vector<MovieId> out;
  out.reserve(row.size());
  for (const auto& c : row) out.push_back(matrix.movies()[c.index]);
  return out;
}

std::vector<UserId> co_raters(const RatingMatrix& matrix, MovieId movie_j, MovieId movie_i,
                              std::optional<UserId> excluded_user) {
  const auto col_j = matrix.movie_column(matrix.movie_index(movie_j));
  const auto col_i = matrix.movie_column(matrix.movie_index(movie_i));
  std::vector<UserId> out;
  auto a = col_j.begin();
  auto b = col_i.begin();
  while (a != col_j.end() && b != col_i.end()) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      const UserId u = matrix.users()[a->index];
      if (!excluded_user || u != *excluded_user) out.push_back(u);
      ++a;
      ++b;
    }
  }
  return out;
}

}  // namespace patrec
