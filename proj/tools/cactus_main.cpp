#include <iostream>

#include <CLI11.hpp>

#include "cactus/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cactus: conflict detection and model selection for multi-objective objective functions"};
  app.require_subcommand(1);

  cactus::cli::LintOptions lint;
  auto* lint_cmd = app.add_subcommand("lint", "Validate an objective function and report conflicts");
  lint_cmd->add_option("function", lint.function_path, "Objective-function JSON")->required();
  lint_cmd->add_option("--data", lint.data_path, "Dataset CSV")->required();
  lint_cmd->add_flag("--json", lint.json, "Emit the report as JSON");
  lint_cmd->add_option("--validation-fraction", lint.split.validation_fraction, "Held-out share")
      ->check(CLI::Range(0.0, 1.0));
  lint_cmd->add_option("--split-seed", lint.split.split_seed, "Seed of the train/validation split");

  cactus::cli::TrainOptions train;
  std::uint64_t seed = 0;
  auto* train_cmd = app.add_subcommand("train", "Select the best classifier for an objective function");
  train_cmd->add_option("function", train.function_path, "Objective-function JSON")->required();
  train_cmd->add_option("--data", train.data_path, "Dataset CSV")->required();
  train_cmd->add_option("--out", train.out_dir, "Output directory")->required();
  auto* seed_opt = train_cmd->add_option("--seed", seed, "Override the function's sampling seed");
  train_cmd->add_option("--validation-fraction", train.split.validation_fraction, "Held-out share")
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--split-seed", train.split.split_seed, "Seed of the train/validation split");
  train_cmd->add_option("--threads", train.threads, "Worker threads (0 = all cores)");

  cactus::cli::ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--port", serve.port, "Port")->required();
  serve_cmd->add_option("--data-dir", serve.data_dir, "Directory holding dataset CSVs")->required();
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--max-samples", serve.max_samples, "Cap on sampled models per training run");

  CLI11_PARSE(app, argc, argv);

  if (lint_cmd->parsed()) return cactus::cli::run_lint(lint, std::cout, std::cerr);
  if (train_cmd->parsed()) {
    if (seed_opt->count() > 0) train.seed = seed;
    return cactus::cli::run_train(train, std::cout, std::cerr);
  }
  if (serve_cmd->parsed()) return cactus::cli::run_serve(serve, std::cout, std::cerr);
  return 1;
}
