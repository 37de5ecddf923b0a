#include "cactus/workflow.hpp"

#include "cactus/error.hpp"
#include "cactus/model_zoo.hpp"

namespace cactus {

LintResult lint(const ObjectiveFunction& of, const Dataset& ds, const DataSplit& split) {
  LintResult result;
  result.validation = validate_function(of, ds, split);
  result.conflicts.function_id = of.id;
  if (result.validation.ok()) result.conflicts = detect_conflicts(of);
  return result;
}

nlohmann::json to_json(const LintResult& result, const ObjectiveFunction& of) {
  nlohmann::json conflicts = nlohmann::json::array();
  for (const auto& c : rank_conflicts(result.conflicts)) conflicts.push_back(to_json(of, c));
  return {{"function_id", of.id},
          {"valid", result.validation.ok()},
          {"validation", to_json(result.validation)},
          {"conflicts", std::move(conflicts)}};
}

TrainResult train_function(const ObjectiveFunction& of, const Dataset& ds, const DataSplit& split,
                           const SolverOptions& options) {
  require_valid(validate_function(of, ds, split));
  TrainResult result;
  result.selection = select_model(of, ds, split, options);
  const auto rows = ds.indices_of(effective_train_ids(of, split));
  result.model_card = train(result.selection.best().config, ds, rows).model_card();
  return result;
}

}  // namespace cactus
