#include "patrec/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <iterator>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

#include "patrec/error.hpp"
#include "patrec/raps.hpp"
#include "patrec/slope_one.hpp"

namespace patrec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Unbiased draw from [0, bound) on top of mt19937_64, whose output sequence is
// fixed by the standard (std::uniform_int_distribution is not).
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <typename T>
void shuffle_prefix(std::vector<T>& items, std::size_t count, std::mt19937_64& rng) {
  for (std::size_t k = 0; k < count && k + 1 < items.size(); ++k) {
    const std::size_t j = k + static_cast<std::size_t>(draw_below(rng, items.size() - k));
    std::swap(items[k], items[j]);
  }
}

// ceil(fraction * n) without being tripped by 0.8 * 10 = 8.000000000000002.
std::size_t ceil_fraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

std::vector<MovieId> sorted_unique(std::span<const MovieId> ids) {
  std::vector<MovieId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<MovieId> intersect(const std::vector<MovieId>& a, const std::vector<MovieId>& b) {
  std::vector<MovieId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Runs fn(k) for k in [0, n), partitioned over `threads` workers. Returns the
// time spent in each call.
template <typename Fn>
std::vector<double> for_each_user(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<double> seconds(n, 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto start = Clock::now();
      fn(k);
      seconds[k] = seconds_since(start);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers == 1) {
    work(0, n);
    return seconds;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(std::min(n, w * chunk), std::min(n, (w + 1) * chunk));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return seconds;
}

}  // namespace

void SplitSpec::validate() const {
  if (!(test_user_fraction > 0.0 && test_user_fraction <= 1.0)) {
    throw RangeError("test user fraction must be in (0, 1], got " +
                     std::to_string(test_user_fraction));
  }
  if (!(visible_fraction > 0.0 && visible_fraction < 1.0)) {
    throw RangeError("visible fraction must be in (0, 1), got " + std::to_string(visible_fraction));
  }
}

EvalSplit make_split(const RatingMatrix& matrix, const SplitSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.rng_seed);

  std::vector<UserId> pool(matrix.users().begin(), matrix.users().end());
  const std::size_t count = std::min(pool.size(), ceil_fraction(spec.test_user_fraction, pool.size()));
  shuffle_prefix(pool, count, rng);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());

  EvalSplit split;
  split.test_users = pool;
  std::vector<RatingEntry> training;
  training.reserve(matrix.num_entries());
  std::size_t next_test = 0;
  for (std::size_t u = 0; u < matrix.users().size(); ++u) {
    const auto entries = matrix.user_entries(u);
    if (next_test == pool.size() || pool[next_test] != matrix.users()[u]) {
      training.insert(training.end(), entries.begin(), entries.end());
      continue;
    }
    ++next_test;
    const UserId user = matrix.users()[u];
    if (entries.size() < 2) {
      throw SplitError("test user " + std::to_string(user.value) + " has " +
                       std::to_string(entries.size()) + " rating(s); at least 2 are needed");
    }
    std::vector<RatingEntry> ordered(entries.begin(), entries.end());
    if (spec.order_by_timestamp) {
      std::sort(ordered.begin(), ordered.end(), [](const RatingEntry& a, const RatingEntry& b) {
        return std::tie(a.timestamp, a.movie) < std::tie(b.timestamp, b.movie);
      });
    } else {
      shuffle_prefix(ordered, ordered.size(), rng);
    }
    const std::size_t visible =
        std::clamp<std::size_t>(ceil_fraction(spec.visible_fraction, ordered.size()), 1,
                                ordered.size() - 1);
    UserPartition part;
    part.visible.assign(ordered.begin(), ordered.begin() + static_cast<std::ptrdiff_t>(visible));
    part.hidden.assign(ordered.begin() + static_cast<std::ptrdiff_t>(visible), ordered.end());
    training.insert(training.end(), part.visible.begin(), part.visible.end());
    split.per_test_user.emplace(user, std::move(part));
  }
  split.training = RatingMatrix(std::move(training), matrix.bounds(), matrix.users(), matrix.movies());
  return split;
}

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Raps ? "raps" : "slope-one";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "raps") return Algorithm::Raps;
  if (name == "slope-one") return Algorithm::SlopeOne;
  throw RangeError("unknown algorithm '" + std::string(name) + "'");
}

PrecisionRecall adjusted_metrics(std::span<const MovieId> relevant,
                                 std::span<const MovieId> retrieved,
                                 std::span<const MovieId> test, Convention convention) {
  const auto test_set = sorted_unique(test);
  const auto rel = intersect(sorted_unique(relevant), test_set);
  const auto ret = intersect(sorted_unique(retrieved), test_set);
  const bool lenient = convention == Convention::Type2;
  if (rel.empty() && ret.empty()) return {lenient ? 1.0 : 0.0, 1.0};
  if (rel.empty()) return {0.0, 1.0};
  if (ret.empty()) return {lenient ? 1.0 : 0.0, 0.0};
  const double hits = static_cast<double>(intersect(rel, ret).size());
  return {hits / static_cast<double>(ret.size()), hits / static_cast<double>(rel.size())};
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

struct Evaluator::State {
  struct TestUser {
    UserId user;
    std::vector<MovieId> hidden;  // ascending
    std::vector<Rating> hidden_ratings;
  };
  struct Retrieval {
    // Per test user: (movie, score) of every hidden movie the algorithm
    // retrieves or scores.
    std::vector<std::vector<std::pair<MovieId, double>>> scored;
    double wall_clock = 0.0;
    double summed = 0.0;
  };

  const RatingMatrix* matrix;
  const EvalSplit* split;
  EvalOptions options;
  std::vector<TestUser> users;
  std::optional<Retrieval> slope_one;
  std::map<std::pair<Rating, Rating>, Retrieval> raps;
  Retrieval raps_empty;

  const Retrieval& retrieval(Algorithm algorithm, const PreferenceInterval& pref) {
    if (algorithm == Algorithm::SlopeOne) {
      if (!slope_one) slope_one = compute_slope_one();
      return *slope_one;
    }
    const auto span = pref.rating_span();
    if (!span) {
      raps_empty.scored.assign(users.size(), {});
      return raps_empty;
    }
    // RAPS consumes only the integer ratings inside pref.
    const auto key = std::make_pair(span->lo(), span->hi());
    auto it = raps.find(key);
    if (it == raps.end()) it = raps.emplace(key, compute_raps(pref)).first;
    return it->second;
  }

  Retrieval compute_slope_one() const {
    Retrieval r;
    r.scored.resize(users.size());
    const auto start = Clock::now();
    const auto per_user = for_each_user(users.size(), options.threads, [&](std::size_t k) {
      for (const auto& p : predict_many(split->training, users[k].user, users[k].hidden)) {
        r.scored[k].emplace_back(p.movie, p.clamped_score);
      }
    });
    r.wall_clock = seconds_since(start);
    for (const double s : per_user) r.summed += s;
    return r;
  }

  Retrieval compute_raps(const PreferenceInterval& pref) const {
    Retrieval r;
    r.scored.resize(users.size());
    const auto start = Clock::now();
    const auto per_user = for_each_user(users.size(), options.threads, [&](std::size_t k) {
      const auto result = raps_recommend(split->training, users[k].user, pref, true);
      for (const auto& m : intersect(result.recommended, users[k].hidden)) {
        r.scored[k].emplace_back(m, static_cast<double>(result.score(split->training, m)));
      }
    });
    r.wall_clock = seconds_since(start);
    for (const double s : per_user) r.summed += s;
    return r;
  }

  std::vector<MovieId> retrieved_for(Algorithm algorithm, const PreferenceInterval& pref,
                                     const Retrieval& r, std::size_t k) const {
    std::vector<MovieId> out;
    for (const auto& [movie, score] : r.scored[k]) {
      if (algorithm == Algorithm::Raps || pref.contains(score)) out.push_back(movie);
    }
    return out;
  }
};

Evaluator::Evaluator(const RatingMatrix& matrix, const EvalSplit& split, EvalOptions options)
    : state_(std::make_unique<State>()) {
  state_->matrix = &matrix;
  state_->split = &split;
  state_->options = options;

  const auto& training = split.training;
  if (!std::ranges::equal(training.users(), matrix.users()) ||
      !std::ranges::equal(training.movies(), matrix.movies()) ||
      training.bounds().min_border != matrix.min_border() ||
      training.bounds().max_border != matrix.max_border()) {
    throw ConsistencyError("training matrix does not share users, movies and bounds with the data");
  }
  std::size_t hidden_total = 0;
  for (const auto& user : split.test_users) {
    auto it = split.per_test_user.find(user);
    if (it == split.per_test_user.end()) {
      throw ConsistencyError("test user " + std::to_string(user.value) + " has no partition");
    }
    const auto& part = it->second;
    const auto full = matrix.user_entries(matrix.user_index(user));
    if (part.visible.size() + part.hidden.size() != full.size()) {
      throw ConsistencyError("partition of user " + std::to_string(user.value) +
                             " does not cover its ratings");
    }
    State::TestUser tu{user, {}, {}};
    std::vector<std::pair<MovieId, Rating>> hidden;
    for (const auto& e : part.hidden) {
      if (e.user != user || matrix.lookup(user, e.movie) != e.rating ||
          training.lookup(user, e.movie).has_value()) {
        throw ConsistencyError("hidden rating of user " + std::to_string(user.value) +
                               " for movie " + std::to_string(e.movie.value) +
                               " inconsistent with the data or visible to training");
      }
      hidden.emplace_back(e.movie, e.rating);
    }
    for (const auto& e : part.visible) {
      if (e.user != user || matrix.lookup(user, e.movie) != e.rating ||
          training.lookup(user, e.movie) != e.rating) {
        throw ConsistencyError("visible rating of user " + std::to_string(user.value) +
                               " for movie " + std::to_string(e.movie.value) +
                               " inconsistent with the data or missing from training");
      }
    }
    std::sort(hidden.begin(), hidden.end());
    for (const auto& [m, r] : hidden) {
      tu.hidden.push_back(m);
      tu.hidden_ratings.push_back(r);
    }
    hidden_total += hidden.size();
    state_->users.push_back(std::move(tu));
  }
  if (training.num_entries() + hidden_total != matrix.num_entries()) {
    throw ConsistencyError("training matrix holds " + std::to_string(training.num_entries()) +
                           " ratings, expected " +
                           std::to_string(matrix.num_entries() - hidden_total));
  }
}

Evaluator::~Evaluator() = default;

MetricsReport Evaluator::evaluate(Algorithm algorithm, const PreferenceInterval& pref,
                                  Convention convention) {
  pref.validate(state_->matrix->bounds());
  const auto& r = state_->retrieval(algorithm, pref);

  MetricsReport report;
  report.algorithm = algorithm;
  report.convention = convention;
  report.pref = pref;
  report.wall_clock_seconds = r.wall_clock;
  report.summed_user_seconds = r.summed;
  double p_sum = 0.0;
  double r_sum = 0.0;
  for (std::size_t k = 0; k < state_->users.size(); ++k) {
    const auto& tu = state_->users[k];
    std::vector<MovieId> relevant;
    for (std::size_t h = 0; h < tu.hidden.size(); ++h) {
      if (pref.contains(tu.hidden_ratings[h])) relevant.push_back(tu.hidden[h]);
    }
    const auto retrieved = state_->retrieved_for(algorithm, pref, r, k);
    const auto pr = adjusted_metrics(relevant, retrieved, tu.hidden, convention);
    report.per_user.push_back({tu.user, pr.precision, pr.recall});
    p_sum += pr.precision;
    r_sum += pr.recall;
  }
  if (!state_->users.empty()) {
    report.mean_precision = p_sum / static_cast<double>(state_->users.size());
    report.mean_recall = r_sum / static_cast<double>(state_->users.size());
  }
  report.f1 = f1_score(report.mean_precision, report.mean_recall);
  return report;
}

std::vector<MovieId> Evaluator::retrieved(Algorithm algorithm, const PreferenceInterval& pref,
                                          UserId user) {
  pref.validate(state_->matrix->bounds());
  const auto& r = state_->retrieval(algorithm, pref);
  for (std::size_t k = 0; k < state_->users.size(); ++k) {
    if (state_->users[k].user == user) return state_->retrieved_for(algorithm, pref, r, k);
  }
  throw UnknownIdentifierError("user " + std::to_string(user.value) + " is not a test user");
}

MetricsReport evaluate(const RatingMatrix& matrix, const EvalSplit& split, Algorithm algorithm,
                       const PreferenceInterval& pref, Convention convention,
                       EvalOptions options) {
  Evaluator evaluator(matrix, split, options);
  return evaluator.evaluate(algorithm, pref, convention);
}

std::vector<SweepPoint> sweep(Evaluator& evaluator, const RatingBounds& bounds,
                              Algorithm algorithm, std::span<const double> lower_bounds,
                              Convention convention) {
  for (const double b : lower_bounds) {
    if (!(b >= bounds.min_border && b <= bounds.max_border)) {
      throw RangeError("sweep bound " + std::to_string(b) + " outside rating range [" +
                       std::to_string(bounds.min_border) + ", " +
                       std::to_string(bounds.max_border) + "]");
    }
  }
  std::vector<SweepPoint> out;
  out.reserve(lower_bounds.size());
  for (const double b : lower_bounds) {
    const PreferenceInterval pref{b, static_cast<double>(bounds.max_border)};
    const auto report = evaluator.evaluate(algorithm, pref, convention);
    out.push_back({b, report.mean_precision, report.mean_recall, report.f1,
                   report.wall_clock_seconds});
  }
  return out;
}

std::vector<SweepPoint> sweep(const RatingMatrix& matrix, const EvalSplit& split,
                              Algorithm algorithm, std::span<const double> lower_bounds,
                              Convention convention, EvalOptions options) {
  Evaluator evaluator(matrix, split, options);
  return sweep(evaluator, matrix.bounds(), algorithm, lower_bounds, convention);
}

std::vector<double> bound_grid(double from, double to, double step) {
  if (!(step > 0.0)) throw RangeError("sweep step must be positive");
  if (!(from <= to)) throw RangeError("sweep start exceeds sweep end");
  std::vector<double> out;
  const auto steps = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
  for (std::size_t k = 0; k <= steps; ++k) {
    // Round to 1e-9 so 3 + 7 * 0.01 compares as 3.07.
    double b = std::round((from + static_cast<double>(k) * step) * 1e9) / 1e9;
    out.push_back(std::min(b, to));
  }
  return out;
}

ReportRow to_row(const MetricsReport& report) {
  return {report.pref.left_border, report.algorithm,      report.convention,
          report.mean_precision,   report.mean_recall,    report.f1,
          report.wall_clock_seconds};
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  std::ostringstream buf;
  buf << kReportHeader << '\n' << std::fixed << std::setprecision(6);
  for (const auto& r : rows) {
    buf << r.lower_bound << ',' << to_string(r.algorithm) << ','
        << static_cast<int>(r.convention) << ',' << r.mean_precision << ',' << r.mean_recall
        << ',' << r.f1 << ',' << r.seconds << '\n';
  }
  out << buf.str();
}

}  // namespace patrec
