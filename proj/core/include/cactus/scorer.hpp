#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cactus/dataset.hpp"
#include "cactus/model_zoo.hpp"
#include "cactus/objective.hpp"

namespace cactus {

struct ObjectiveScore {
  std::size_t objective = 0;
  double score = 0.0;  // in [0, 1]
  std::size_t support = 0;

  bool operator==(const ObjectiveScore&) const = default;
};

struct ModelEvaluation {
  ModelConfig config;
  std::vector<ObjectiveScore> per_objective;
  double aggregate = 0.0;
  double validation_accuracy = 0.0;
  bool degenerate = false;

  bool operator==(const ModelEvaluation&) const = default;
};

struct SelectionResult {
  std::size_t best_index = 0;
  /// Ordered by config index.
  std::vector<ModelEvaluation> all;

  const ModelEvaluation& best() const { return all.at(best_index); }
  bool operator==(const SelectionResult&) const = default;
};

/// Train split minus every Ignore objective's ids. Throws
/// EmptyEffectiveTrainSet.
IdSet effective_train_ids(const ObjectiveFunction& of, const DataSplit& split);

/// Predicted class index per dataset row. Rows that were not predicted hold
/// `npos`.
struct RowPredictions {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> labels;

  /// Throws InvalidArgument for rows that were not predicted.
  std::size_t at(std::size_t row) const;
};

RowPredictions predict_rows(const TrainedClassifier& clf, const Dataset& ds,
                            std::span<const std::size_t> rows);

/// Hard-prediction score of one objective:
///   candidate(L, T)       mean over T of [pred = L]
///   similarity(T, L)      mean over T of [pred = L]
///   similarity(T)         largest share of T predicted as one label
///   critical(T)           mean over T of [pred = truth]
///   ignore                1.0 (support |T|)
///   train_accuracy        accuracy over the effective train ids
///   validation_accuracy   accuracy over the validation ids
///   f1_macro, precision_macro  macro average over the label domain on the
///                         validation ids, 0/0 terms counted as 0
/// Throws EmptyObjectiveSet.
ObjectiveScore score_objective(const RowPredictions& predictions, const ObjectiveSpec& objective,
                               std::size_t objective_index, const Dataset& ds, const DataSplit& split,
                               const IdSet& effective_train);
ObjectiveScore score_objective(const TrainedClassifier& clf, const ObjectiveSpec& objective,
                               std::size_t objective_index, const Dataset& ds, const DataSplit& split,
                               const IdSet& effective_train);

/// Weight-normalized combination sum(w_i * s_i) / sum(w_i). Throws
/// AllZeroWeights.
double aggregate_score(const ObjectiveFunction& of, std::span<const ObjectiveScore> scores);

struct SolverOptions {
  /// Upper bound on the number of sampled configs; 0 means of.n_samples.
  std::size_t max_samples = 0;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  HyperparameterSpace space = HyperparameterSpace::defaults();
  /// Invoked from worker threads with each learner's training rows.
  TrainingObserver observer;
};

/// Samples configs with of.seed, fits each on the effective train ids, scores
/// every objective and picks the highest aggregate (ties to the lowest config
/// index; aggregates within 1e-12 count as tied). Errors are rethrown with the offending config index in the message.
SelectionResult select_model(const ObjectiveFunction& of, const Dataset& ds, const DataSplit& split,
                             const SolverOptions& options = {});

/// Evaluates a single config the way select_model does.
ModelEvaluation evaluate_config(const ModelConfig& config, const ObjectiveFunction& of,
                                const Dataset& ds, const DataSplit& split,
                                const TrainingObserver& observer = {});

/// Re-aggregates an existing pool under the weights of `of` and picks the best.
/// Each evaluation's per_objective list must align with of.objectives.
SelectionResult select_from_pool(const ObjectiveFunction& of, std::vector<ModelEvaluation> pool);

/// Scores are reported raw and as display values scaled to 0-100 with two
/// decimals.
double display_percent(double fraction);
nlohmann::json to_json(const ModelEvaluation& evaluation, const ObjectiveFunction& of);
nlohmann::json to_json(const SelectionResult& result, const ObjectiveFunction& of);

}  // namespace cactus
