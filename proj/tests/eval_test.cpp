#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "patrec/eval.hpp"
#include "properties.hpp"

namespace patrec {
namespace {

using testing::movie;
using testing::movies;
using testing::user;

TEST(AdjustedMetrics, RegularCase) {
  const auto pr = adjusted_metrics(movies({1, 2}), movies({2, 3}), movies({1, 2, 3}),
                                   Convention::Type1);
  EXPECT_EQ(pr.precision, 0.5);
  EXPECT_EQ(pr.recall, 0.5);
  const auto pr2 = adjusted_metrics(movies({1, 2}), movies({2, 3}), movies({1, 2, 3}),
                                    Convention::Type2);
  EXPECT_EQ(pr2.precision, 0.5);
  EXPECT_EQ(pr2.recall, 0.5);
}

TEST(AdjustedMetrics, EverythingIsRestrictedToTestMovies) {
  // Movie 9 is outside the test set and ignored on both sides.
  const auto pr = adjusted_metrics(movies({1, 9}), movies({1, 2, 9}), movies({1, 2}),
                                   Convention::Type1);
  EXPECT_EQ(pr.precision, 0.5);
  EXPECT_EQ(pr.recall, 1.0);
}

TEST(AdjustedMetrics, ZeroDenominatorConventions) {
  const std::vector<MovieId> none;
  const auto test = movies({1, 2});
  // relevant empty, retrieved empty
  EXPECT_EQ(adjusted_metrics(none, none, test, Convention::Type1).precision, 0.0);
  EXPECT_EQ(adjusted_metrics(none, none, test, Convention::Type1).recall, 1.0);
  EXPECT_EQ(adjusted_metrics(none, none, test, Convention::Type2).precision, 1.0);
  EXPECT_EQ(adjusted_metrics(none, none, test, Convention::Type2).recall, 1.0);
  // relevant empty, retrieved non-empty
  for (auto c : {Convention::Type1, Convention::Type2}) {
    EXPECT_EQ(adjusted_metrics(none, movies({1}), test, c).precision, 0.0);
    EXPECT_EQ(adjusted_metrics(none, movies({1}), test, c).recall, 1.0);
  }
  // relevant non-empty, retrieved empty
  EXPECT_EQ(adjusted_metrics(movies({1}), none, test, Convention::Type1).precision, 0.0);
  EXPECT_EQ(adjusted_metrics(movies({1}), none, test, Convention::Type1).recall, 0.0);
  EXPECT_EQ(adjusted_metrics(movies({1}), none, test, Convention::Type2).precision, 1.0);
  EXPECT_EQ(adjusted_metrics(movies({1}), none, test, Convention::Type2).recall, 0.0);
}

TEST(F1, HarmonicMeanOrZero) {
  EXPECT_EQ(f1_score(0.0, 0.0), 0.0);
  EXPECT_NEAR(f1_score(0.1942, 0.5052), 0.2806, 5e-4);
}

RatingMatrix single_user(std::size_t n) {
  std::vector<RatingEntry> entries;
  for (std::size_t k = 0; k < n; ++k) {
    // Timestamps descend with the movie id so the split has to sort.
    entries.push_back({user(1), movie(std::int64_t(k + 1)), 1 + int(k % 5),
                       std::int64_t(1000 - k)});
  }
  return RatingMatrix(std::move(entries), {});
}

TEST(MakeSplit, CeilingArithmeticAndTimeOrder) {
  const auto m = single_user(10);
  const auto split = make_split(m, {1.0, 0.8, 3, true});
  ASSERT_EQ(split.test_users.size(), 1u);
  const auto& part = split.per_test_user.at(user(1));
  EXPECT_EQ(part.visible.size(), 8u);
  EXPECT_EQ(part.hidden.size(), 2u);
  std::int64_t latest_visible = 0;
  for (const auto& e : part.visible) latest_visible = std::max(latest_visible, e.timestamp);
  for (const auto& e : part.hidden) EXPECT_GT(e.timestamp, latest_visible);
  EXPECT_EQ(split.training.num_entries(), 8u);
  EXPECT_EQ(split.training.movies().size(), 10u);
}

TEST(MakeSplit, TimestampTiesBreakByMovieId) {
  std::vector<RatingEntry> entries;
  for (std::int64_t k = 1; k <= 5; ++k) entries.push_back({user(1), movie(k), 3, 50});
  const RatingMatrix m(std::move(entries), {});
  const auto split = make_split(m, {1.0, 0.6, 0, true});
  const auto& part = split.per_test_user.at(user(1));
  ASSERT_EQ(part.hidden.size(), 2u);
  EXPECT_EQ(part.hidden[0].movie, movie(4));
  EXPECT_EQ(part.hidden[1].movie, movie(5));
}

TEST(MakeSplit, HiddenPartNeverEmpty) {
  const auto split = make_split(single_user(2), {1.0, 0.8, 1, true});
  EXPECT_EQ(split.per_test_user.at(user(1)).visible.size(), 1u);
  EXPECT_EQ(split.per_test_user.at(user(1)).hidden.size(), 1u);
}

TEST(MakeSplit, DeterministicForSeedAndCoversEveryRating) {
  std::mt19937_64 rng(4);
  const auto m = testing::to_matrix(testing::random_context(rng, 40, 12, 0.2));
  const auto a = make_split(m, {0.2, 0.8, 17, true});
  const auto b = make_split(m, {0.2, 0.8, 17, true});
  EXPECT_EQ(a.test_users, b.test_users);
  EXPECT_EQ(a.test_users.size(), 8u);
  EXPECT_TRUE(std::ranges::equal(a.training.entries(), b.training.entries()));
  std::size_t hidden = 0;
  for (const auto& [u, part] : a.per_test_user) {
    EXPECT_EQ(part.visible.size() + part.hidden.size(),
              m.user_entries(m.user_index(u)).size());
    hidden += part.hidden.size();
  }
  EXPECT_EQ(a.training.num_entries() + hidden, m.num_entries());
  const auto c = make_split(m, {0.2, 0.8, 18, true});
  EXPECT_NE(a.test_users, c.test_users);
}

TEST(MakeSplit, Errors) {
  const auto m = single_user(1);
  EXPECT_THROW(make_split(m, {1.0, 0.8, 0, true}), SplitError);
  EXPECT_THROW(make_split(m, {0.0, 0.8, 0, true}), RangeError);
  EXPECT_THROW(make_split(m, {0.5, 1.0, 0, true}), RangeError);
}

TEST(MakeSplit, ShuffledOrderStillPartitions) {
  const auto m = single_user(20);
  const auto split = make_split(m, {1.0, 0.8, 5, false});
  const auto& part = split.per_test_user.at(user(1));
  EXPECT_EQ(part.visible.size(), 16u);
  EXPECT_EQ(part.hidden.size(), 4u);
}

TEST(Evaluate, EmptyHiddenSetsGiveStrictDefaults) {
  std::mt19937_64 rng(8);
  const auto m = testing::to_matrix(testing::random_context(rng, 5, 6, 0.2));
  EvalSplit split;
  split.training = m;
  for (const auto& u : m.users()) {
    split.test_users.push_back(u);
    const auto entries = m.user_entries(m.user_index(u));
    split.per_test_user[u].visible.assign(entries.begin(), entries.end());
  }
  for (auto algorithm : {Algorithm::Raps, Algorithm::SlopeOne}) {
    const auto report = evaluate(m, split, algorithm, {4, 5}, Convention::Type1);
    ASSERT_EQ(report.per_user.size(), 5u);
    for (const auto& u : report.per_user) {
      EXPECT_EQ(u.precision, 0.0);
      EXPECT_EQ(u.recall, 1.0);
    }
  }
}

TEST(Evaluate, RejectsForeignSplit) {
  std::mt19937_64 rng(9);
  const auto m = testing::to_matrix(testing::random_context(rng, 10, 6, 0.1));
  auto other_cells = testing::random_context(rng, 10, 6, 0.1);
  const auto other = testing::to_matrix(other_cells);
  const auto split = make_split(other, {0.5, 0.8, 1, true});
  EXPECT_THROW(evaluate(m, split, Algorithm::Raps, {4, 5}, Convention::Type1), ConsistencyError);
}

TEST(Evaluate, DeterministicAndBounded) {
  std::mt19937_64 rng(10);
  const auto m = testing::to_matrix(testing::random_context(rng, 50, 20, 0.3));
  const auto split = make_split(m, {0.3, 0.8, 2, true});
  for (auto algorithm : {Algorithm::Raps, Algorithm::SlopeOne}) {
    for (auto convention : {Convention::Type1, Convention::Type2}) {
      const auto a = evaluate(m, split, algorithm, {3.5, 5}, convention);
      const auto b = evaluate(m, split, algorithm, {3.5, 5}, convention, {4});
      EXPECT_EQ(a.mean_precision, b.mean_precision);
      EXPECT_EQ(a.mean_recall, b.mean_recall);
      EXPECT_EQ(a.f1, b.f1);
      ASSERT_EQ(a.per_user.size(), 15u);
      for (std::size_t k = 0; k < a.per_user.size(); ++k) {
        EXPECT_EQ(a.per_user[k].precision, b.per_user[k].precision);
        EXPECT_GE(a.per_user[k].precision, 0.0);
        EXPECT_LE(a.per_user[k].precision, 1.0);
        EXPECT_GE(a.per_user[k].recall, 0.0);
        EXPECT_LE(a.per_user[k].recall, 1.0);
      }
      EXPECT_NEAR(a.f1, f1_score(a.mean_precision, a.mean_recall), 1e-15);
    }
  }
}

TEST(Evaluate, TypeTwoPrecisionDominatesPerUser) {
  std::mt19937_64 rng(12);
  const auto m = testing::to_matrix(testing::random_context(rng, 60, 25, 0.5));
  const auto split = make_split(m, {0.5, 0.8, 3, true});
  Evaluator evaluator(m, split);
  for (auto algorithm : {Algorithm::Raps, Algorithm::SlopeOne}) {
    for (double left : {3.0, 4.0, 4.5, 5.0}) {
      const auto t1 = evaluator.evaluate(algorithm, {left, 5}, Convention::Type1);
      const auto t2 = evaluator.evaluate(algorithm, {left, 5}, Convention::Type2);
      for (std::size_t k = 0; k < t1.per_user.size(); ++k) {
        EXPECT_GE(t2.per_user[k].precision, t1.per_user[k].precision);
        EXPECT_EQ(t2.per_user[k].recall, t1.per_user[k].recall);
      }
    }
  }
}

TEST(EvalProperties, TypeTwoDominatesOnRandomSets) {
  const auto r = testing::check_type2_dominates_type1(10000, 31);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(EvalProperties, HiddenRatingsDoNotLeak) {
  const auto r = testing::check_hidden_leak(60, 32);
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(Sweep, GridAndValidation) {
  const auto grid = bound_grid(3.0, 5.0, 0.01);
  ASSERT_EQ(grid.size(), 201u);
  EXPECT_EQ(grid.front(), 3.0);
  EXPECT_EQ(grid[7], 3.07);
  EXPECT_EQ(grid.back(), 5.0);
  EXPECT_EQ(bound_grid(3, 3, 1).size(), 1u);
  EXPECT_THROW(bound_grid(3, 5, 0), RangeError);
  EXPECT_THROW(bound_grid(5, 3, 0.1), RangeError);

  std::mt19937_64 rng(13);
  const auto m = testing::to_matrix(testing::random_context(rng, 30, 10, 0.3));
  const auto split = make_split(m, {0.5, 0.8, 3, true});
  EXPECT_TRUE(sweep(m, split, Algorithm::Raps, {}, Convention::Type1).empty());
  const std::vector<double> bad{3.0, 5.5};
  EXPECT_THROW(sweep(m, split, Algorithm::Raps, bad, Convention::Type1), RangeError);
}

TEST(Sweep, RapsIsStepwiseInTheLowerBound) {
  std::mt19937_64 rng(14);
  const auto m = testing::to_matrix(testing::random_context(rng, 60, 20, 0.3));
  const auto split = make_split(m, {0.5, 0.8, 3, true});
  const std::vector<double> bounds{3.01, 3.5, 4.0, 4.01, 5.0};
  const auto points = sweep(m, split, Algorithm::Raps, bounds, Convention::Type1);
  ASSERT_EQ(points.size(), 5u);
  EXPECT_EQ(points[0].mean_precision, points[2].mean_precision);
  EXPECT_EQ(points[1].mean_recall, points[2].mean_recall);
  EXPECT_EQ(points[3].mean_precision, points[4].mean_precision);
  const auto direct = evaluate(m, split, Algorithm::Raps, {4, 5}, Convention::Type1);
  EXPECT_EQ(points[0].mean_precision, direct.mean_precision);
  EXPECT_EQ(points[0].mean_recall, direct.mean_recall);
}

TEST(ReportCsv, FixedSixDecimals) {
  const std::vector<ReportRow> rows{{3.0, Algorithm::SlopeOne, Convention::Type2, 0.5, 1.0 / 3.0,
                                     0.4, 1.25}};
  std::ostringstream out;
  write_report_csv(out, rows);
  EXPECT_EQ(out.str(),
            "lower_bound,algorithm,convention,mean_precision,mean_recall,f1,seconds\n"
            "3.000000,slope-one,2,0.500000,0.333333,0.400000,1.250000\n");
}

}  // namespace
}  // namespace patrec
