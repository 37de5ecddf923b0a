#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cactus/dataset.hpp"

namespace cactus {

enum class LearnerKind { DecisionTree, KNearestNeighbors, LogisticRegression, GaussianNaiveBayes };

inline constexpr LearnerKind kAllLearners[] = {
    LearnerKind::DecisionTree, LearnerKind::KNearestNeighbors, LearnerKind::LogisticRegression,
    LearnerKind::GaussianNaiveBayes};

std::string_view to_string(LearnerKind kind) noexcept;
LearnerKind parse_learner_kind(std::string_view name);

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamMap = std::map<std::string, ParamValue, std::less<>>;

struct IntDomain {
  std::int64_t lo = 0, hi = 0;  // inclusive
};
struct RealDomain {
  double lo = 0, hi = 0;
  bool log_scale = false;
};
struct ChoiceDomain {
  std::vector<std::string> options;
};
using ParamDomain = std::variant<IntDomain, RealDomain, ChoiceDomain>;

/// Named parameter domains per learner. Parameters are sampled in the listed
/// order, so the order is part of the sampling contract.
struct HyperparameterSpace {
  std::map<LearnerKind, std::vector<std::pair<std::string, ParamDomain>>> domains;

  static HyperparameterSpace defaults();
};

struct ModelConfig {
  std::size_t index = 0;
  LearnerKind learner = LearnerKind::DecisionTree;
  ParamMap params;
  std::uint64_t seed = 0;

  bool operator==(const ModelConfig&) const = default;

  std::int64_t int_param(std::string_view name) const;
  double real_param(std::string_view name) const;
  const std::string& choice_param(std::string_view name) const;
};

/// n configs, learner uniform per sample, parameters uniform (log-uniform
/// where declared). Deterministic per seed.
std::vector<ModelConfig> sample_configs(const HyperparameterSpace& space, std::size_t n,
                                        std::uint64_t seed);

/// Dense row-major feature matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static FeatureMatrix gather(const Dataset& ds, std::span<const std::size_t> row_indices);
};

struct Prediction {
  std::size_t label_index = 0;
  std::string label;
  std::vector<double> probabilities;  // over label_domain
};

namespace detail {
class FittedModel;
}

/// Called with the dataset row indices a learner is about to be fitted on.
using TrainingObserver = std::function<void(const ModelConfig&, std::span<const std::size_t>)>;

class TrainedClassifier {
 public:
  const ModelConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& label_domain() const noexcept { return label_domain_; }
  std::size_t feature_count() const noexcept { return feature_count_; }
  /// True when the training set held a single class and a constant predictor
  /// was fitted instead of the configured learner.
  bool degenerate() const noexcept { return degenerate_; }

  /// Throws ArityMismatch.
  std::vector<Prediction> predict(std::span<const DataRow> rows) const;
  Prediction predict_one(std::span<const double> features) const;
  /// Class index per requested dataset row; argmax, ties to the lower index.
  std::vector<std::size_t> predict_labels(const Dataset& ds, std::span<const std::size_t> rows) const;

  /// JSON model card: learner, params, and fitted parameters where they are
  /// finite-dimensional (tree as nested nodes).
  nlohmann::json model_card() const;

 private:
  friend TrainedClassifier train(const ModelConfig&, const Dataset&, std::span<const std::size_t>,
                                 const TrainingObserver&);
  TrainedClassifier() = default;

  ModelConfig config_;
  std::vector<std::string> label_domain_;
  std::size_t feature_count_ = 0;
  bool degenerate_ = false;
  std::shared_ptr<const detail::FittedModel> model_;
};

/// Fits `config` on the given dataset rows. Deterministic per config.
/// Throws InvalidArgument on an empty training set.
TrainedClassifier train(const ModelConfig& config, const Dataset& ds,
                        std::span<const std::size_t> train_rows, const TrainingObserver& observer = {});
TrainedClassifier train(const ModelConfig& config, const Dataset& ds, const IdSet& train_ids,
                        const TrainingObserver& observer = {});

nlohmann::json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& doc);

/// Multinomial logistic regression objective, exposed for gradient checking.
/// Parameters are a classes x (features + 1) row-major matrix, bias last.
namespace logistic {

struct Problem {
  const FeatureMatrix* x = nullptr;
  std::span<const std::size_t> y;  // class index per row
  std::size_t classes = 0;
  double l2 = 0.0;
};

/// Mean cross-entropy plus (l2 / 2) * ||W||^2 over non-bias weights. Writes
/// the gradient into `grad` (same layout as `params`) when non-empty.
double loss_and_gradient(const Problem& problem, std::span<const double> params, std::span<double> grad);

}  // namespace logistic

}  // namespace cactus
