#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cactus::cli {

/// Exit codes of `cactus lint`.
inline constexpr int kExitClean = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConflicts = 2;

struct SplitOptions {
  double validation_fraction = 0.2;
  std::uint64_t split_seed = 0;
};

struct LintOptions {
  std::filesystem::path function_path;
  std::filesystem::path data_path;
  bool json = false;
  SplitOptions split;
};

/// Prints the ranked conflict report. 0 = no conflicts, 2 = conflicts found,
/// 1 = validation or IO error.
int run_lint(const LintOptions& options, std::ostream& out, std::ostream& err);

struct TrainOptions {
  std::filesystem::path function_path;
  std::filesystem::path data_path;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;  // overrides the function's seed
  SplitOptions split;
  std::size_t threads = 0;
};

/// Writes selection.json, model_card.json and the canonical function.json to
/// out_dir and prints the validation accuracy x100. 0 on success, 1 on error.
int run_train(const TrainOptions& options, std::ostream& out, std::ostream& err);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = ".";
  std::size_t max_samples = 200;
};

int run_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace cactus::cli
