#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace patrec::cli {

enum class Command { Recommend, Evaluate, Sweep };

struct RunConfig {
  std::filesystem::path data_path;
  Command command = Command::Recommend;
  /// "raps", "slope-one" or "both".
  std::string algorithm = "raps";
  double left = 4.0;
  double right = 5.0;
  int min_rating = 1;
  int max_rating = 5;
  double test_fraction = 0.2;
  double visible_fraction = 0.8;
  std::uint64_t seed = 42;
  int convention = 1;
  std::optional<std::size_t> top_n;
  std::optional<std::int64_t> target_user;
  std::optional<std::filesystem::path> output_path;
  double sweep_from = 3.0;
  double sweep_to = 5.0;
  double sweep_step = 0.01;
  unsigned threads = 1;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsageError = 2;

/// Executes one configured run. CSV goes to `out` (or the output file, written
/// atomically); diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and runs.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patrec::cli
