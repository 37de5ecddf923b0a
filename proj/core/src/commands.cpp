#include "cactus/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cactus/api.hpp"
#include "cactus/error.hpp"
#include "cactus/server.hpp"
#include "cactus/workflow.hpp"

namespace cactus::cli {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string(), path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string(), path.string());
  out << body;
  if (!out.flush()) throw Error(ErrorCode::IoError, "failed writing " + path.string(), path.string());
}

int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what();
  if (!e.context().empty()) err << " [" << e.context() << "]";
  err << "\n";
  return kExitError;
}

void print_issues(const ValidationReport& report, std::ostream& out) {
  for (const auto& e : report.errors) out << "error   " << e.code << ": " << e.message << "\n";
  for (const auto& w : report.warnings) out << "warning " << w.code << ": " << w.message << "\n";
}

}  // namespace

int run_lint(const LintOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Dataset ds = load_dataset_file(options.data_path);
    const ObjectiveFunction of = parse_objective_function(read_file(options.function_path));
    const DataSplit split = make_split(ds, options.split.validation_fraction, options.split.split_seed);
    const LintResult result = lint(of, ds, split);

    if (options.json) {
      out << to_json(result, of).dump(2) << "\n";
    } else {
      print_issues(result.validation, out);
      const auto ranked = rank_conflicts(result.conflicts);
      if (result.validation.ok()) {
        out << ranked.size() << " conflict(s) in '" << of.id << "'\n";
      }
      for (const auto& c : ranked) {
        out << "  [" << conflict_hash(of, c) << "] severity " << c.severity << "  "
            << objective_key(of.objectives[c.left]) << " x " << objective_key(of.objectives[c.right])
            << "\n";
      }
    }
    if (!result.validation.ok()) {
      if (!options.json) err << "error: objective function failed validation\n";
      return kExitError;
    }
    return result.conflicts.empty() ? kExitClean : kExitConflicts;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int run_train(const TrainOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Dataset ds = load_dataset_file(options.data_path);
    ObjectiveFunction of = parse_objective_function(read_file(options.function_path));
    if (options.seed) of.seed = *options.seed;
    const DataSplit split = make_split(ds, options.split.validation_fraction, options.split.split_seed);

    SolverOptions solver;
    solver.threads = options.threads;
    const TrainResult result = train_function(of, ds, split, solver);

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + options.out_dir.string(), ec.message());
    write_file(options.out_dir / "selection.json", to_json(result.selection, of).dump(2) + "\n");
    write_file(options.out_dir / "model_card.json", result.model_card.dump(2) + "\n");
    write_file(options.out_dir / "function.json", serialize_objective_function(of));

    char line[64];
    std::snprintf(line, sizeof line, "%.2f", display_percent(result.selection.best().validation_accuracy));
    out << "validation accuracy: " << line << "\n";
    return kExitClean;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int run_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    ServiceOptions service;
    service.data_dir = options.data_dir;
    service.max_samples = options.max_samples;
    Api api(service);
    HttpServer server(api);
    const int port = server.bind(options.host, options.port);
    out << "cactus listening on http://" << options.host << ":" << port << "\n" << std::flush;
    server.run();
    return kExitClean;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

}  // namespace cactus::cli
