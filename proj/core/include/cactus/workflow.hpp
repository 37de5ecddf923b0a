#pragma once

#include <nlohmann/json.hpp>

#include "cactus/conflict.hpp"
#include "cactus/dataset.hpp"
#include "cactus/objective.hpp"
#include "cactus/scorer.hpp"

namespace cactus {

/// Engine entry points shared by the CLI and the HTTP API, so both surfaces
/// produce identical results for identical inputs.

struct LintResult {
  ValidationReport validation;
  ConflictReport conflicts;  // empty when validation failed
};

LintResult lint(const ObjectiveFunction& of, const Dataset& ds, const DataSplit& split);
nlohmann::json to_json(const LintResult& result, const ObjectiveFunction& of);

struct TrainResult {
  SelectionResult selection;
  nlohmann::json model_card;
};

/// Validates, runs the model solver and refits the winning config for its
/// model card. Throws ValidationFailed, AllZeroWeights and solver errors.
TrainResult train_function(const ObjectiveFunction& of, const Dataset& ds, const DataSplit& split,
                           const SolverOptions& options = {});

}  // namespace cactus
