#pragma once

// Offline evaluation: test-user sampling, chronological visible/hidden split,
// adjusted precision/recall restricted to each user's hidden movies, and
// lower-bound sweeps.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patrec/context.hpp"
#include "patrec/preference.hpp"

namespace patrec {

struct SplitSpec {
  double test_user_fraction = 0.2;
  double visible_fraction = 0.8;
  std::uint64_t rng_seed = 42;
  /// Otherwise each test user's ratings are shuffled before the cut.
  bool order_by_timestamp = true;

  /// Throws RangeError unless test fraction is in (0,1] and visible fraction in (0,1).
  void validate() const;
};

struct UserPartition {
  std::vector<RatingEntry> visible;
  std::vector<RatingEntry> hidden;
};

struct EvalSplit {
  /// The source matrix without any hidden entry; same users and movies.
  RatingMatrix training;
  /// Ascending.
  std::vector<UserId> test_users;
  std::map<UserId, UserPartition> per_test_user;
};

/// Samples ceil(test_user_fraction * |U|) test users with a seeded generator
/// and, per test user, keeps the earliest ceil(visible_fraction * n) ratings
/// (ordered by timestamp, then movie id) visible and hides the rest. The
/// visible count is capped at n - 1 so the hidden part is never empty.
/// Throws SplitError when a selected user has fewer than two ratings.
EvalSplit make_split(const RatingMatrix& matrix, const SplitSpec& spec);

enum class Algorithm { Raps, SlopeOne };

/// Zero-denominator conventions. Type1 is strict, Type2 grants precision 1
/// when nothing was retrieved.
enum class Convention { Type1 = 1, Type2 = 2 };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct PrecisionRecall {
  double precision;
  double recall;
};

/// Precision and recall of `retrieved` against `relevant`, both first
/// intersected with `test`.
PrecisionRecall adjusted_metrics(std::span<const MovieId> relevant,
                                 std::span<const MovieId> retrieved,
                                 std::span<const MovieId> test, Convention convention);

struct UserMetrics {
  UserId user;
  double precision;
  double recall;
};

/// 2PR/(P+R), or 0 when P+R is 0.
double f1_score(double precision, double recall);

struct MetricsReport {
  Algorithm algorithm = Algorithm::Raps;
  Convention convention = Convention::Type1;
  PreferenceInterval pref;
  std::vector<UserMetrics> per_user;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double f1 = 0.0;
  /// Wall clock of the recommendation phase for all test users.
  double wall_clock_seconds = 0.0;
  /// Sum of per-user recommendation times; equals wall clock when serial.
  double summed_user_seconds = 0.0;
};

struct EvalOptions {
  unsigned threads = 1;
};

/// Runs evaluations over one split and caches what can be shared between
/// them: Slope One predictions do not depend on the preference interval, and
/// RAPS only depends on the integer ratings inside it.
class Evaluator {
 public:
  /// Throws ConsistencyError when `split` was not derived from `matrix`.
  Evaluator(const RatingMatrix& matrix, const EvalSplit& split, EvalOptions options = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  MetricsReport evaluate(Algorithm algorithm, const PreferenceInterval& pref,
                         Convention convention);

  /// Movies retrieved for one test user (already restricted to its hidden set).
  std::vector<MovieId> retrieved(Algorithm algorithm, const PreferenceInterval& pref, UserId user);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

MetricsReport evaluate(const RatingMatrix& matrix, const EvalSplit& split, Algorithm algorithm,
                       const PreferenceInterval& pref, Convention convention,
                       EvalOptions options = {});

struct SweepPoint {
  double lower_bound;
  double mean_precision;
  double mean_recall;
  double f1;
  double seconds;
};

/// Evaluates pref = [bound, max_border] for each bound. Throws RangeError for
/// a bound outside the rating range.
std::vector<SweepPoint> sweep(const RatingMatrix& matrix, const EvalSplit& split,
                              Algorithm algorithm, std::span<const double> lower_bounds,
                              Convention convention, EvalOptions options = {});
std::vector<SweepPoint> sweep(Evaluator& evaluator, const RatingBounds& bounds,
                              Algorithm algorithm, std::span<const double> lower_bounds,
                              Convention convention);

/// from, from + step, ..., up to `to` inclusive (within 1e-9).
std::vector<double> bound_grid(double from, double to, double step);

struct ReportRow {
  double lower_bound;
  Algorithm algorithm;
  Convention convention;
  double mean_precision;
  double mean_recall;
  double f1;
  double seconds;
};

ReportRow to_row(const MetricsReport& report);

inline constexpr std::string_view kReportHeader =
    "lower_bound,algorithm,convention,mean_precision,mean_recall,f1,seconds";

/// Header plus one line per row, six decimals, LF endings.
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);

}  // namespace patrec
