#include "cactus/scorer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "cactus/error.hpp"

namespace cactus {

IdSet effective_train_ids(const ObjectiveFunction& of, const DataSplit& split) {
  IdSet out = split.train_ids;
  for (const auto& o : of.objectives) {
    if (o.kind != ObjectiveKind::Ignore) continue;
    for (const auto& id : o.ids) out.erase(id);
  }
  if (out.empty()) {
    throw Error(ErrorCode::EmptyEffectiveTrainSet, "ignore objectives cover the whole train split",
                of.id);
  }
  return out;
}

std::size_t RowPredictions::at(std::size_t row) const {
  if (row >= labels.size() || labels[row] == npos) {
    throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(row) + " was not predicted");
  }
  return labels[row];
}

RowPredictions predict_rows(const TrainedClassifier& clf, const Dataset& ds,
                            std::span<const std::size_t> rows) {
  RowPredictions out;
  out.labels.assign(ds.size(), RowPredictions::npos);
  const auto predicted = clf.predict_labels(ds, rows);
  for (std::size_t k = 0; k < rows.size(); ++k) out.labels[rows[k]] = predicted[k];
  return out;
}

namespace {

void require_nonempty(const IdSet& ids, const ObjectiveSpec& objective) {
  if (ids.empty()) {
    throw Error(ErrorCode::EmptyObjectiveSet,
                "objective " + objective_key(objective) + " has no rows to score",
                objective_key(objective));
  }
}

double accuracy(const RowPredictions& preds, const Dataset& ds, const std::vector<std::size_t>& rows) {
  std::size_t hits = 0;
  for (std::size_t r : rows) hits += preds.at(r) == ds.label_code(r) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

double macro_metric(const RowPredictions& preds, const Dataset& ds,
                    const std::vector<std::size_t>& rows, bool f1) {
  const std::size_t k = ds.label_domain().size();
  std::vector<std::size_t> tp(k, 0), fp(k, 0), fn(k, 0);
  for (std::size_t r : rows) {
    const std::size_t truth = ds.label_code(r);
    const std::size_t pred = preds.at(r);
    if (pred == truth) {
      ++tp[truth];
    } else {
      ++fp[pred];
      ++fn[truth];
    }
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double precision =
        tp[c] + fp[c] == 0 ? 0.0 : static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fp[c]);
    if (!f1) {
      total += precision;
      continue;
    }
    const double recall =
        tp[c] + fn[c] == 0 ? 0.0 : static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fn[c]);
    total += precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
  }
  return total / static_cast<double>(k);
}

std::vector<std::size_t> rows_of(const Dataset& ds, const IdSet& ids) { return ds.indices_of(ids); }

}  // namespace

ObjectiveScore score_objective(const RowPredictions& preds, const ObjectiveSpec& objective,
                               std::size_t objective_index, const Dataset& ds, const DataSplit& split,
                               const IdSet& effective_train) {
  ObjectiveScore out{objective_index, 0.0, 0};
  switch (objective.kind) {
    case ObjectiveKind::Candidate:
    case ObjectiveKind::Similarity: {
      require_nonempty(objective.ids, objective);
      const auto rows = rows_of(ds, objective.ids);
      out.support = rows.size();
      if (objective.label) {
        const auto target = ds.label_index(*objective.label);
        std::size_t hits = 0;
        if (target) {
          for (std::size_t r : rows) hits += preds.at(r) == *target ? 1 : 0;
        }
        out.score = static_cast<double>(hits) / static_cast<double>(rows.size());
      } else {
        std::vector<std::size_t> counts(ds.label_domain().size(), 0);
        for (std::size_t r : rows) ++counts[preds.at(r)];
        out.score = static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
                    static_cast<double>(rows.size());
      }
      break;
    }
    case ObjectiveKind::Critical: {
      require_nonempty(objective.ids, objective);
      const auto rows = rows_of(ds, objective.ids);
      out.support = rows.size();
      out.score = accuracy(preds, ds, rows);
      break;
    }
    case ObjectiveKind::Ignore:
      out.support = objective.ids.size();
      out.score = 1.0;
      break;
    case ObjectiveKind::TrainAccuracy: {
      require_nonempty(effective_train, objective);
      const auto rows = rows_of(ds, effective_train);
      out.support = rows.size();
      out.score = accuracy(preds, ds, rows);
      break;
    }
    case ObjectiveKind::ValidationAccuracy:
    case ObjectiveKind::F1Macro:
    case ObjectiveKind::PrecisionMacro: {
      require_nonempty(split.validation_ids, objective);
      const auto rows = rows_of(ds, split.validation_ids);
      out.support = rows.size();
      if (objective.kind == ObjectiveKind::ValidationAccuracy) {
        out.score = accuracy(preds, ds, rows);
      } else {
        out.score = macro_metric(preds, ds, rows, objective.kind == ObjectiveKind::F1Macro);
      }
      break;
    }
  }
  return out;
}

namespace {

// Rows a classifier must predict to score `of` and report validation accuracy.
std::vector<std::size_t> rows_to_predict(const ObjectiveFunction& of, const Dataset& ds,
                                         const DataSplit& split, const IdSet& effective_train) {
  std::vector<char> needed(ds.size(), 0);
  auto mark = [&](const IdSet& ids) {
    for (const auto& id : ids) needed[ds.index_of(id)] = 1;
  };
  mark(split.validation_ids);
  for (const auto& o : of.objectives) {
    if (o.kind == ObjectiveKind::TrainAccuracy) mark(effective_train);
    if (is_instance_set(o.kind) && o.kind != ObjectiveKind::Ignore) mark(o.ids);
  }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < needed.size(); ++r) {
    if (needed[r]) rows.push_back(r);
  }
  return rows;
}

std::vector<std::size_t> rows_for_objective(const ObjectiveSpec& o, const Dataset& ds,
                                            const DataSplit& split, const IdSet& effective_train) {
  switch (o.kind) {
    case ObjectiveKind::Ignore: return {};
    case ObjectiveKind::TrainAccuracy: return ds.indices_of(effective_train);
    case ObjectiveKind::ValidationAccuracy:
    case ObjectiveKind::F1Macro:
    case ObjectiveKind::PrecisionMacro: return ds.indices_of(split.validation_ids);
    default: return ds.indices_of(o.ids);
  }
}

}  // namespace

ObjectiveScore score_objective(const TrainedClassifier& clf, const ObjectiveSpec& objective,
                               std::size_t objective_index, const Dataset& ds, const DataSplit& split,
                               const IdSet& effective_train) {
  const auto rows = rows_for_objective(objective, ds, split, effective_train);
  return score_objective(predict_rows(clf, ds, rows), objective, objective_index, ds, split,
                         effective_train);
}

double aggregate_score(const ObjectiveFunction& of, std::span<const ObjectiveScore> scores) {
  double weighted = 0.0;
  double total = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& s : scores) {
    const double w = of.objectives.at(s.objective).weight;
    if (w <= 0.0) continue;
    weighted += w * s.score;
    total += w;
    lo = std::min(lo, s.score);
    hi = std::max(hi, s.score);
  }
  if (total <= 0.0) {
    throw Error(ErrorCode::AllZeroWeights, "objective weights sum to zero", of.id);
  }
  // Keep the convex-combination bounds exact despite rounding.
  return std::clamp(weighted / total, lo, hi);
}

ModelEvaluation evaluate_config(const ModelConfig& config, const ObjectiveFunction& of,
                                const Dataset& ds, const DataSplit& split,
                                const TrainingObserver& observer) {
  const IdSet effective = effective_train_ids(of, split);
  const auto train_rows = ds.indices_of(effective);
  const TrainedClassifier clf = train(config, ds, train_rows, observer);
  const auto predict = rows_to_predict(of, ds, split, effective);
  const RowPredictions preds = predict_rows(clf, ds, predict);

  ModelEvaluation eval;
  eval.config = config;
  eval.degenerate = clf.degenerate();
  eval.per_objective.reserve(of.objectives.size());
  for (std::size_t i = 0; i < of.objectives.size(); ++i) {
    eval.per_objective.push_back(score_objective(preds, of.objectives[i], i, ds, split, effective));
  }
  eval.aggregate = aggregate_score(of, eval.per_objective);
  if (split.validation_ids.empty()) {
    throw Error(ErrorCode::EmptyObjectiveSet, "validation split is empty");
  }
  eval.validation_accuracy = accuracy(preds, ds, ds.indices_of(split.validation_ids));
  return eval;
}

namespace {

// Aggregates that agree up to rounding are ties. Rescaling the weights moves
// them by a few ulps, which must not change the winner.
constexpr double kTieTolerance = 1e-12;

std::size_t argmax_aggregate(const std::vector<ModelEvaluation>& all) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].aggregate > all[best].aggregate + kTieTolerance) best = i;
  }
  return best;
}

}  // namespace

SelectionResult select_model(const ObjectiveFunction& of, const Dataset& ds, const DataSplit& split,
                             const SolverOptions& options) {
  if (of.total_weight() <= 0.0) {
    throw Error(ErrorCode::AllZeroWeights, "objective weights sum to zero", of.id);
  }
  // Fail fast on set problems before spending time on training.
  effective_train_ids(of, split);

  std::size_t n = of.n_samples;
  if (options.max_samples > 0) n = std::min(n, options.max_samples);
  const auto configs = sample_configs(options.space, n, of.seed);

  std::vector<ModelEvaluation> all(configs.size());
  std::vector<std::exception_ptr> failures(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        all[i] = evaluate_config(configs[i], of, ds, split, options.observer);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, configs.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "config " + std::to_string(i) + ": " + e.what(), e.context());
    }
  }

  SelectionResult result;
  result.all = std::move(all);
  result.best_index = argmax_aggregate(result.all);
  return result;
}

SelectionResult select_from_pool(const ObjectiveFunction& of, std::vector<ModelEvaluation> pool) {
  if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "model pool is empty");
  for (auto& eval : pool) {
    if (eval.per_objective.size() != of.objectives.size()) {
      throw Error(ErrorCode::InvalidArgument, "evaluation does not align with the objective function");
    }
    eval.aggregate = aggregate_score(of, eval.per_objective);
  }
  SelectionResult result;
  result.all = std::move(pool);
  result.best_index = argmax_aggregate(result.all);
  return result;
}

double display_percent(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

nlohmann::json to_json(const ModelEvaluation& evaluation, const ObjectiveFunction& of) {
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& s : evaluation.per_objective) {
    nlohmann::json entry = {{"objective", s.objective},
                            {"score", s.score},
                            {"display", display_percent(s.score)},
                            {"support", s.support}};
    if (s.objective < of.objectives.size()) entry["key"] = objective_key(of.objectives[s.objective]);
    scores.push_back(std::move(entry));
  }
  return {{"config", to_json(evaluation.config)},
          {"per_objective", std::move(scores)},
          {"aggregate", evaluation.aggregate},
          {"aggregate_display", display_percent(evaluation.aggregate)},
          {"validation_accuracy", evaluation.validation_accuracy},
          {"validation_accuracy_display", display_percent(evaluation.validation_accuracy)},
          {"degenerate", evaluation.degenerate}};
}

nlohmann::json to_json(const SelectionResult& result, const ObjectiveFunction& of) {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& e : result.all) all.push_back(to_json(e, of));
  return {{"function_id", of.id},
          {"best_index", result.best_index},
          {"best", to_json(result.best(), of)},
          {"all", std::move(all)}};
}

}  // namespace cactus
