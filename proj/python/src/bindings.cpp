#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <memory>

#include "patrec/context.hpp"
#include "patrec/error.hpp"
#include "patrec/eval.hpp"
#include "patrec/raps.hpp"
#include "patrec/slope_one.hpp"

namespace py = pybind11;
using namespace patrec;

namespace {

using Row = std::tuple<std::int64_t, std::int64_t, int, std::int64_t>;

std::vector<std::int64_t> ids(std::span<const MovieId> movies) {
  std::vector<std::int64_t> out;
  out.reserve(movies.size());
  for (const auto& m : movies) out.push_back(m.value);
  return out;
}

std::vector<MovieId> movie_ids(const std::vector<std::int64_t>& values) {
  std::vector<MovieId> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back(MovieId{v});
  return out;
}

std::vector<Row> rows(std::span<const RatingEntry> entries) {
  std::vector<Row> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.emplace_back(e.user.value, e.movie.value, e.rating, e.timestamp);
  return out;
}

// Keeps the source matrix alive next to the split so evaluate() can check both.
struct PySplit {
  std::shared_ptr<const RatingMatrix> source;
  EvalSplit split;
};

Convention convention_of(int c) {
  if (c != 1 && c != 2) throw RangeError("convention must be 1 or 2");
  return static_cast<Convention>(c);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "RAPS and Slope One recommenders with offline evaluation";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<RatingMatrix, std::shared_ptr<RatingMatrix>>(m, "RatingMatrix")
      .def(py::init([](const std::vector<Row>& entries, int min_rating, int max_rating) {
             std::vector<RatingEntry> es;
             es.reserve(entries.size());
             for (const auto& [u, mv, r, t] : entries) es.push_back({UserId{u}, MovieId{mv}, r, t});
             return std::make_shared<RatingMatrix>(std::move(es),
                                                   RatingBounds{min_rating, max_rating});
           }),
           py::arg("entries"), py::arg("min_rating") = 1, py::arg("max_rating") = 5,
           "Build from (user, movie, rating, timestamp) tuples.")
      .def_static(
          "load",
          [](const std::filesystem::path& path, int min_rating, int max_rating) {
            return std::make_shared<RatingMatrix>(
                load_movielens_file(path, {min_rating, max_rating}));
          },
          py::arg("path"), py::arg("min_rating") = 1, py::arg("max_rating") = 5,
          "Read a MovieLens u.data file.")
      .def_property_readonly("users",
                             [](const RatingMatrix& x) {
                               std::vector<std::int64_t> out;
                               for (const auto& u : x.users()) out.push_back(u.value);
                               return out;
                             })
      .def_property_readonly("movies", [](const RatingMatrix& x) { return ids(x.movies()); })
      .def_property_readonly("num_entries", &RatingMatrix::num_entries)
      .def_property_readonly("min_rating", &RatingMatrix::min_border)
      .def_property_readonly("max_rating", &RatingMatrix::max_border)
      .def("entries", [](const RatingMatrix& x) { return rows(x.entries()); })
      .def(
          "rating",
          [](const RatingMatrix& x, std::int64_t u, std::int64_t mv) {
            return x.lookup(UserId{u}, MovieId{mv});
          },
          py::arg("user"), py::arg("movie"));

  py::class_<RapsResult>(m, "RapsResult")
      .def_property_readonly("recommended", [](const RapsResult& r) { return ids(r.recommended); })
      .def_property_readonly("liked", [](const RapsResult& r) { return ids(r.liked); })
      .def_readonly("scores", &RapsResult::scores, "R_j per movie, in RatingMatrix.movies order.");

  m.def(
      "raps_recommend",
      [](const RatingMatrix& x, std::int64_t target, double left, double right,
         bool exclude_rated) {
        return raps_recommend(x, UserId{target}, {left, right}, exclude_rated);
      },
      py::arg("matrix"), py::arg("target"), py::arg("left") = 4.0, py::arg("right") = 5.0,
      py::arg("exclude_rated") = true);

  py::class_<Prediction>(m, "Prediction")
      .def_property_readonly("movie", [](const Prediction& p) { return p.movie.value; })
      .def_readonly("raw_score", &Prediction::raw_score)
      .def_readonly("clamped_score", &Prediction::clamped_score)
      .def_property_readonly("support", [](const Prediction& p) { return ids(p.support); })
      .def("__repr__", [](const Prediction& p) {
        return "Prediction(movie=" + std::to_string(p.movie.value) +
               ", clamped_score=" + std::to_string(p.clamped_score) + ")";
      });

  m.def(
      "deviation",
      [](const RatingMatrix& x, std::int64_t j, std::int64_t i,
         std::optional<std::int64_t> excluded_user) -> std::optional<std::pair<double, std::size_t>> {
        std::optional<UserId> ex;
        if (excluded_user) ex = UserId{*excluded_user};
        const auto d = deviation(x, MovieId{j}, MovieId{i}, ex);
        if (!d) return std::nullopt;
        return std::make_pair(d->value, d->support);
      },
      py::arg("matrix"), py::arg("movie_j"), py::arg("movie_i"),
      py::arg("excluded_user") = py::none(), "(value, support), or None without co-raters.");
  m.def(
      "predict",
      [](const RatingMatrix& x, std::int64_t u, std::int64_t mv) {
        return predict(x, UserId{u}, MovieId{mv});
      },
      py::arg("matrix"), py::arg("user"), py::arg("movie"));
  m.def(
      "slope_one_recommend",
      [](const RatingMatrix& x, std::int64_t target, double left, double right,
         std::optional<std::size_t> top_n) {
        return rank_predictions(slope_one_recommend(x, UserId{target}, {left, right}), top_n);
      },
      py::arg("matrix"), py::arg("target"), py::arg("left") = 4.0, py::arg("right") = 5.0,
      py::arg("top_n") = py::none(), "Predictions inside [left, right], best first.");

  m.def(
      "adjusted_metrics",
      [](const std::vector<std::int64_t>& relevant, const std::vector<std::int64_t>& retrieved,
         const std::vector<std::int64_t>& test, int convention) {
        const auto pr = adjusted_metrics(movie_ids(relevant), movie_ids(retrieved),
                                         movie_ids(test), convention_of(convention));
        return std::make_pair(pr.precision, pr.recall);
      },
      py::arg("relevant"), py::arg("retrieved"), py::arg("test"), py::arg("convention") = 1);

  py::class_<PySplit>(m, "Split")
      .def_property_readonly("test_users",
                             [](const PySplit& s) {
                               std::vector<std::int64_t> out;
                               for (const auto& u : s.split.test_users) out.push_back(u.value);
                               return out;
                             })
      .def_property_readonly("training",
                             [](const PySplit& s) { return s.split.training; })
      .def(
          "visible",
          [](const PySplit& s, std::int64_t u) { return rows(s.split.per_test_user.at(UserId{u}).visible); },
          py::arg("user"))
      .def(
          "hidden",
          [](const PySplit& s, std::int64_t u) { return rows(s.split.per_test_user.at(UserId{u}).hidden); },
          py::arg("user"));

  m.def(
      "make_split",
      [](std::shared_ptr<const RatingMatrix> x, double test_fraction, double visible_fraction,
         std::uint64_t seed, bool order_by_timestamp) {
        return PySplit{x, make_split(*x, {test_fraction, visible_fraction, seed, order_by_timestamp})};
      },
      py::arg("matrix"), py::arg("test_fraction") = 0.2, py::arg("visible_fraction") = 0.8,
      py::arg("seed") = 42, py::arg("order_by_timestamp") = true);

  py::class_<MetricsReport>(m, "Report")
      .def_property_readonly("algorithm",
                             [](const MetricsReport& r) { return std::string(to_string(r.algorithm)); })
      .def_readonly("mean_precision", &MetricsReport::mean_precision)
      .def_readonly("mean_recall", &MetricsReport::mean_recall)
      .def_readonly("f1", &MetricsReport::f1)
      .def_readonly("wall_clock_seconds", &MetricsReport::wall_clock_seconds)
      .def_readonly("summed_user_seconds", &MetricsReport::summed_user_seconds)
      .def_property_readonly("per_user", [](const MetricsReport& r) {
        std::vector<std::tuple<std::int64_t, double, double>> out;
        for (const auto& u : r.per_user) out.emplace_back(u.user.value, u.precision, u.recall);
        return out;
      });

  m.def(
      "evaluate",
      [](const PySplit& s, const std::string& algorithm, double left, double right,
         int convention, unsigned threads) {
        py::gil_scoped_release release;
        return evaluate(*s.source, s.split, parse_algorithm(algorithm), {left, right},
                        convention_of(convention), {threads});
      },
      py::arg("split"), py::arg("algorithm") = "raps", py::arg("left") = 4.0,
      py::arg("right") = 5.0, py::arg("convention") = 1, py::arg("threads") = 1);
  m.def(
      "sweep",
      [](const PySplit& s, const std::string& algorithm, const std::vector<double>& bounds,
         int convention) {
        const auto alg = parse_algorithm(algorithm);
        const auto conv = convention_of(convention);
        py::gil_scoped_release release;
        std::vector<std::tuple<double, double, double, double>> out;
        for (const auto& p : sweep(*s.source, s.split, alg, bounds, conv)) {
          out.emplace_back(p.lower_bound, p.mean_precision, p.mean_recall, p.f1);
        }
        return out;
      },
      py::arg("split"), py::arg("algorithm"), py::arg("lower_bounds"), py::arg("convention") = 1,
      "(lower_bound, precision, recall, f1) per bound.");
  m.def("bound_grid", &bound_grid, py::arg("start"), py::arg("stop"), py::arg("step"));
}
