#include "patrec/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "patrec/context.hpp"
#include "patrec/error.hpp"
#include "patrec/eval.hpp"
#include "patrec/raps.hpp"
#include "patrec/slope_one.hpp"

namespace patrec::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<Algorithm> algorithms(const std::string& name) {
  if (name == "both") return {Algorithm::Raps, Algorithm::SlopeOne};
  if (name == "raps" || name == "slope-one") return {parse_algorithm(name)};
  throw UsageError("--algorithm must be raps, slope-one or both, got '" + name + "'");
}

void validate(const RunConfig& c) {
  if (c.min_rating > c.max_rating) throw UsageError("--min-rating exceeds --max-rating");
  const PreferenceInterval pref{c.left, c.right};
  try {
    pref.validate({c.min_rating, c.max_rating});
  } catch (const RangeError& e) {
    throw UsageError(std::string("--left/--right: ") + e.what());
  }
  if (c.convention != 1 && c.convention != 2) throw UsageError("--convention must be 1 or 2");
  algorithms(c.algorithm);
  switch (c.command) {
    case Command::Recommend:
      if (!c.target_user) throw UsageError("recommend requires --target-user");
      if (c.algorithm == "both") throw UsageError("recommend takes a single algorithm");
      break;
    case Command::Sweep:
      if (!(c.sweep_step > 0.0)) throw UsageError("--sweep-step must be positive");
      if (c.sweep_from > c.sweep_to) throw UsageError("--sweep-from exceeds --sweep-to");
      if (c.sweep_from < c.min_rating || c.sweep_to > c.max_rating) {
        throw UsageError("sweep bounds must lie within [--min-rating, --max-rating]");
      }
      [[fallthrough]];
    case Command::Evaluate:
      try {
        SplitSpec{c.test_fraction, c.visible_fraction, c.seed, true}.validate();
      } catch (const RangeError& e) {
        throw UsageError(e.what());
      }
      break;
  }
}

std::string recommend_csv(const RatingMatrix& matrix, const RunConfig& c) {
  const UserId target{*c.target_user};
  const PreferenceInterval pref{c.left, c.right};
  std::ostringstream out;
  out << "movie,score\n";
  if (parse_algorithm(c.algorithm) == Algorithm::Raps) {
    const auto result = raps_recommend(matrix, target, pref, true);
    for (const auto& s : top_n(matrix, result, c.top_n)) {
      out << s.movie.value << ',' << static_cast<long long>(s.score) << '\n';
    }
  } else {
    out << std::fixed << std::setprecision(6);
    for (const auto& p : rank_predictions(slope_one_recommend(matrix, target, pref), c.top_n)) {
      out << p.movie.value << ',' << p.clamped_score << '\n';
    }
  }
  return out.str();
}

std::string evaluation_csv(const RatingMatrix& matrix, const RunConfig& c) {
  const SplitSpec spec{c.test_fraction, c.visible_fraction, c.seed, true};
  const auto split = make_split(matrix, spec);
  Evaluator evaluator(matrix, split, {c.threads});
  const auto convention = static_cast<Convention>(c.convention);
  std::vector<ReportRow> rows;
  for (const auto algorithm : algorithms(c.algorithm)) {
    if (c.command == Command::Evaluate) {
      rows.push_back(to_row(evaluator.evaluate(algorithm, {c.left, c.right}, convention)));
      continue;
    }
    const auto bounds = bound_grid(c.sweep_from, c.sweep_to, c.sweep_step);
    for (const auto& p : sweep(evaluator, matrix.bounds(), algorithm, bounds, convention)) {
      rows.push_back({p.lower_bound, algorithm, convention, p.mean_precision, p.mean_recall, p.f1,
                      p.seconds});
    }
  }
  std::ostringstream out;
  write_report_csv(out, rows);
  return out.str();
}

void emit(const std::string& csv, const RunConfig& c, std::ostream& out) {
  if (!c.output_path) {
    out << csv;
    return;
  }
  const auto& target = *c.output_path;
  auto tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f << csv;
    f.close();
    if (!f) throw Error("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move output into place: " + ec.message());
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RatingMatrix matrix;
  try {
    validate(config);
    matrix = load_movielens_file(config.data_path, {config.min_rating, config.max_rating});
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  try {
    const std::string csv = config.command == Command::Recommend ? recommend_csv(matrix, config)
                                                                 : evaluation_csv(matrix, config);
    emit(csv, config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pattern-structure (RAPS) and Slope One recommenders with offline evaluation"};
  app.require_subcommand(1);
  RunConfig config;
  std::int64_t target = 0;
  std::size_t top = 0;
  std::string output;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--data", config.data_path, "MovieLens u.data file")->required();
    sub->add_option("--algorithm", config.algorithm, "raps, slope-one or both")
        ->capture_default_str();
    sub->add_option("--left", config.left, "Left border of the preferred ratings")
        ->capture_default_str();
    sub->add_option("--right", config.right, "Right border of the preferred ratings")
        ->capture_default_str();
    sub->add_option("--min-rating", config.min_rating)->capture_default_str();
    sub->add_option("--max-rating", config.max_rating)->capture_default_str();
    sub->add_option("--test-fraction", config.test_fraction)->capture_default_str();
    sub->add_option("--visible-fraction", config.visible_fraction)->capture_default_str();
    sub->add_option("--seed", config.seed)->capture_default_str();
    sub->add_option("--convention", config.convention, "Zero-denominator convention, 1 or 2")
        ->capture_default_str();
    sub->add_option("--top-n", top, "Keep only the N best recommendations");
    sub->add_option("--target-user", target, "User to recommend for");
    sub->add_option("--output", output, "Write CSV here instead of stdout");
    sub->add_option("--sweep-from", config.sweep_from)->capture_default_str();
    sub->add_option("--sweep-to", config.sweep_to)->capture_default_str();
    sub->add_option("--sweep-step", config.sweep_step)->capture_default_str();
    sub->add_option("--threads", config.threads, "Worker threads for evaluation")
        ->capture_default_str();
  };
  auto* recommend = app.add_subcommand("recommend", "Recommend movies for one user");
  auto* evaluate = app.add_subcommand("evaluate", "Precision/recall on a held-out split");
  auto* sweep = app.add_subcommand("sweep", "Evaluate over a range of lower bounds");
  for (auto* sub : {recommend, evaluate, sweep}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, msg, msg);
    (code == 0 ? out : err) << msg.str();
    return code == 0 ? kOk : kUsageError;
  }

  if (recommend->parsed()) config.command = Command::Recommend;
  if (evaluate->parsed()) config.command = Command::Evaluate;
  if (sweep->parsed()) config.command = Command::Sweep;
  auto* active = app.get_subcommands().front();
  if (active->count("--target-user")) config.target_user = target;
  if (active->count("--top-n")) config.top_n = top;
  if (active->count("--output")) config.output_path = output;
  return run(config, out, err);
}

}  // namespace patrec::cli
