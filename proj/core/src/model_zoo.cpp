#include "cactus/model_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cactus/error.hpp"
#include "cactus/random.hpp"

namespace cactus {

using nlohmann::json;

std::string_view to_string(LearnerKind kind) noexcept {
  switch (kind) {
    case LearnerKind::DecisionTree: return "decision_tree";
    case LearnerKind::KNearestNeighbors: return "knn";
    case LearnerKind::LogisticRegression: return "logistic_regression";
    case LearnerKind::GaussianNaiveBayes: return "gaussian_nb";
  }
  return "unknown";
}

LearnerKind parse_learner_kind(std::string_view name) {
  for (LearnerKind kind : kAllLearners) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown learner '" + std::string(name) + "'",
              std::string(name));
}

HyperparameterSpace HyperparameterSpace::defaults() {
  HyperparameterSpace space;
  space.domains[LearnerKind::DecisionTree] = {{"max_depth", IntDomain{1, 12}},
                                              {"min_leaf", IntDomain{1, 20}}};
  space.domains[LearnerKind::KNearestNeighbors] = {
      {"k", IntDomain{1, 25}}, {"distance", ChoiceDomain{{"euclidean", "manhattan"}}}};
  space.domains[LearnerKind::LogisticRegression] = {
      {"l2_strength", RealDomain{1e-4, 10.0, true}},
      {"epochs", IntDomain{50, 500}},
      {"learning_rate", RealDomain{1e-3, 1.0, true}}};
  space.domains[LearnerKind::GaussianNaiveBayes] = {{"var_smoothing", RealDomain{1e-9, 1e-3, true}}};
  return space;
}

namespace {

template <typename T>
const T& param_as(const ParamMap& params, std::string_view name) {
  auto it = params.find(name);
  if (it == params.end()) {
    throw Error(ErrorCode::InvalidArgument, "missing hyperparameter '" + std::string(name) + "'",
                std::string(name));
  }
  const T* value = std::get_if<T>(&it->second);
  if (value == nullptr) {
    throw Error(ErrorCode::InvalidArgument, "hyperparameter '" + std::string(name) + "' has the wrong type",
                std::string(name));
  }
  return *value;
}

}  // namespace

std::int64_t ModelConfig::int_param(std::string_view name) const {
  return param_as<std::int64_t>(params, name);
}
double ModelConfig::real_param(std::string_view name) const { return param_as<double>(params, name); }
const std::string& ModelConfig::choice_param(std::string_view name) const {
  return param_as<std::string>(params, name);
}

std::vector<ModelConfig> sample_configs(const HyperparameterSpace& space, std::size_t n,
                                        std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  std::vector<LearnerKind> learners;
  for (const auto& [kind, _] : space.domains) learners.push_back(kind);
  if (learners.empty()) throw Error(ErrorCode::InvalidArgument, "hyperparameter space is empty");

  Rng rng(mix_seed(seed, 0xc0ffee));
  std::vector<ModelConfig> configs;
  configs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ModelConfig c;
    c.index = i;
    c.learner = learners[rng.index(learners.size())];
    c.seed = mix_seed(seed, i);
    for (const auto& [name, domain] : space.domains.at(c.learner)) {
      ParamValue value = std::visit(
          [&](const auto& d) -> ParamValue {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, IntDomain>) {
              return rng.integer(d.lo, d.hi);
            } else if constexpr (std::is_same_v<D, RealDomain>) {
              if (d.log_scale) return std::exp(rng.uniform(std::log(d.lo), std::log(d.hi)));
              return rng.uniform(d.lo, d.hi);
            } else {
              return d.options.at(rng.index(d.options.size()));
            }
          },
          domain);
      c.params.emplace(name, std::move(value));
    }
    configs.push_back(std::move(c));
  }
  return configs;
}

FeatureMatrix FeatureMatrix::gather(const Dataset& ds, std::span<const std::size_t> row_indices) {
  FeatureMatrix m;
  m.rows = row_indices.size();
  m.cols = ds.feature_count();
  m.data.reserve(m.rows * m.cols);
  for (std::size_t r : row_indices) {
    const auto& f = ds.row(r).features;
    m.data.insert(m.data.end(), f.begin(), f.end());
  }
  return m;
}

namespace detail {

class FittedModel {
 public:
  virtual ~FittedModel() = default;
  /// Writes class probabilities (over the full label domain) into `out`.
  virtual void predict_proba(std::span<const double> x, std::span<double> out) const = 0;
  virtual json card() const = 0;
};

}  // namespace detail

namespace {

using detail::FittedModel;

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

void softmax_inplace(std::span<double> v) {
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

// Per-feature affine rescaling fitted on the training rows.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> scale;

  static Scaler fit(const FeatureMatrix& x) {
    Scaler s{std::vector<double>(x.cols, 0.0), std::vector<double>(x.cols, 1.0)};
    for (std::size_t j = 0; j < x.cols; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < x.rows; ++i) sum += x.at(i, j);
      const double mean = sum / static_cast<double>(x.rows);
      double ss = 0.0;
      for (std::size_t i = 0; i < x.rows; ++i) ss += (x.at(i, j) - mean) * (x.at(i, j) - mean);
      const double sd = std::sqrt(ss / static_cast<double>(x.rows));
      s.mean[j] = mean;
      s.scale[j] = sd > 0.0 ? sd : 1.0;
    }
    return s;
  }

  void apply(std::span<const double> in, std::span<double> out) const {
    for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / scale[j];
  }

  FeatureMatrix transform(const FeatureMatrix& x) const {
    FeatureMatrix out = x;
    for (std::size_t i = 0; i < x.rows; ++i) {
      apply(x.row(i), {out.data.data() + i * x.cols, x.cols});
    }
    return out;
  }

  json card() const { return {{"mean", mean}, {"scale", scale}}; }
};

class ConstantModel final : public FittedModel {
 public:
  ConstantModel(std::size_t label, std::size_t classes) : label_(label), classes_(classes) {}

  void predict_proba(std::span<const double>, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    out[label_] = 1.0;
  }
  json card() const override { return {{"type", "constant"}, {"class_index", label_}, {"classes", classes_}}; }

 private:
  std::size_t label_;
  std::size_t classes_;
};

// ---------------------------------------------------------------------------
// CART decision tree, Gini impurity.

double gini(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

class TreeModel final : public FittedModel {
 public:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    std::size_t left = 0, right = 0;
    std::size_t samples = 0;
    double impurity = 0.0;
    std::vector<double> distribution;
  };

  TreeModel(const FeatureMatrix& x, std::span<const std::size_t> y, std::size_t classes,
            std::size_t max_depth, std::size_t min_leaf)
      : classes_(classes), max_depth_(max_depth), min_leaf_(std::max<std::size_t>(min_leaf, 1)) {
    std::vector<std::size_t> rows(x.rows);
    std::iota(rows.begin(), rows.end(), 0);
    build(x, y, rows, 0);
  }

  void predict_proba(std::span<const double> x, std::span<double> out) const override {
    std::size_t n = 0;
    while (nodes_[n].feature >= 0) {
      n = x[static_cast<std::size_t>(nodes_[n].feature)] <= nodes_[n].threshold ? nodes_[n].left
                                                                              : nodes_[n].right;
    }
    std::copy(nodes_[n].distribution.begin(), nodes_[n].distribution.end(), out.begin());
  }

  json card() const override { return {{"type", "tree"}, {"root", node_card(0)}}; }

 private:
  json node_card(std::size_t n) const {
    const Node& node = nodes_[n];
    json j = {{"samples", node.samples}, {"impurity", node.impurity}};
    if (node.feature < 0) {
      j["distribution"] = node.distribution;
    } else {
      j["feature"] = node.feature;
      j["threshold"] = node.threshold;
      j["left"] = node_card(node.left);
      j["right"] = node_card(node.right);
    }
    return j;
  }

  std::size_t build(const FeatureMatrix& x, std::span<const std::size_t> y,
                    std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    std::vector<std::size_t> counts(classes_, 0);
    for (std::size_t r : rows) ++counts[y[r]];
    {
      Node& node = nodes_[id];
      node.samples = rows.size();
      node.impurity = gini(counts, rows.size());
      node.distribution.resize(classes_);
      for (std::size_t c = 0; c < classes_; ++c) {
        node.distribution[c] = static_cast<double>(counts[c]) / static_cast<double>(rows.size());
      }
    }
    const double parent_impurity = nodes_[id].impurity;
    if (depth >= max_depth_ || rows.size() < 2 * min_leaf_ || parent_impurity <= 0.0) return id;

    // Best split over all features and thresholds between distinct values.
    double best_score = parent_impurity;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> sorted = rows;
    std::vector<std::size_t> left_counts(classes_);
    std::vector<std::size_t> right_counts(classes_);
    const double n = static_cast<double>(rows.size());
    for (std::size_t f = 0; f < x.cols; ++f) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) { return x.at(a, f) < x.at(b, f); });
      std::fill(left_counts.begin(), left_counts.end(), 0);
      right_counts = counts;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        const std::size_t c = y[sorted[k]];
        ++left_counts[c];
        --right_counts[c];
        const std::size_t n_left = k + 1;
        const std::size_t n_right = sorted.size() - n_left;
        const double a = x.at(sorted[k], f);
        const double b = x.at(sorted[k + 1], f);
        if (a == b || n_left < min_leaf_ || n_right < min_leaf_) continue;
        const double score = (static_cast<double>(n_left) * gini(left_counts, n_left) +
                               static_cast<double>(n_right) * gini(right_counts, n_right)) /
                              n;
        if (score < best_score) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = a + (b - a) / 2.0;
          if (!(best_threshold < b)) best_threshold = a;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      (x.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left_rows : right_rows)
          .push_back(r);
    }
    const std::size_t left = build(x, y, left_rows, depth + 1);
    const std::size_t right = build(x, y, right_rows, depth + 1);
    Node& node = nodes_[id];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  std::size_t classes_;
  std::size_t max_depth_;
  std::size_t min_leaf_;
  std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------
// k nearest neighbours over standardized features.

class KnnModel final : public FittedModel {
 public:
  KnnModel(const FeatureMatrix& x, std::span<const std::size_t> y, std::size_t classes,
           std::size_t k, bool manhattan)
      : scaler_(Scaler::fit(x)),
        points_(scaler_.transform(x)),
        labels_(y.begin(), y.end()),
        classes_(classes),
        k_(std::clamp<std::size_t>(k, 1, x.rows)),
        manhattan_(manhattan) {}

  void predict_proba(std::span<const double> x, std::span<double> out) const override {
    std::vector<double> q(x.size());
    scaler_.apply(x, q);
    std::vector<std::pair<double, std::size_t>> dist(points_.rows);
    for (std::size_t i = 0; i < points_.rows; ++i) {
      const auto p = points_.row(i);
      double d = 0.0;
      if (manhattan_) {
        for (std::size_t j = 0; j < q.size(); ++j) d += std::abs(p[j] - q[j]);
      } else {
        for (std::size_t j = 0; j < q.size(); ++j) d += (p[j] - q[j]) * (p[j] - q[j]);
      }
      dist[i] = {d, i};
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_ - 1), dist.end());
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < k_; ++i) out[labels_[dist[i].second]] += 1.0;
    for (double& v : out) v /= static_cast<double>(k_);
  }

  json card() const override {
    return {{"type", "knn"},
            {"k", k_},
            {"distance", manhattan_ ? "manhattan" : "euclidean"},
            {"reference_rows", points_.rows},
            {"scaler", scaler_.card()}};
  }

 private:
  Scaler scaler_;
  FeatureMatrix points_;
  std::vector<std::size_t> labels_;
  std::size_t classes_;
  std::size_t k_;
  bool manhattan_;
};

// ---------------------------------------------------------------------------
// Multinomial logistic regression, full-batch gradient descent.

class LogisticModel final : public FittedModel {
 public:
  LogisticModel(const FeatureMatrix& x, std::span<const std::size_t> y, std::size_t classes,
                double l2, std::size_t epochs, double learning_rate)
      : scaler_(Scaler::fit(x)), classes_(classes), cols_(x.cols) {
    const FeatureMatrix z = scaler_.transform(x);
    const logistic::Problem problem{&z, y, classes, l2};
    params_.assign(classes * (cols_ + 1), 0.0);
    std::vector<double> grad(params_.size());
    for (std::size_t e = 0; e < epochs; ++e) {
      logistic::loss_and_gradient(problem, params_, grad);
      for (std::size_t p = 0; p < params_.size(); ++p) params_[p] -= learning_rate * grad[p];
    }
  }

  void predict_proba(std::span<const double> x, std::span<double> out) const override {
    std::vector<double> z(cols_);
    scaler_.apply(x, z);
    for (std::size_t c = 0; c < classes_; ++c) {
      const double* w = params_.data() + c * (cols_ + 1);
      double s = w[cols_];
      for (std::size_t j = 0; j < cols_; ++j) s += w[j] * z[j];
      out[c] = s;
    }
    softmax_inplace(out);
  }

  json card() const override {
    json weights = json::array();
    for (std::size_t c = 0; c < classes_; ++c) {
      const auto first = params_.begin() + static_cast<std::ptrdiff_t>(c * (cols_ + 1));
      weights.push_back(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(cols_ + 1)));
    }
    return {{"type", "logistic_regression"}, {"weights", weights}, {"scaler", scaler_.card()}};
  }

 private:
  Scaler scaler_;
  std::size_t classes_;
  std::size_t cols_;
  std::vector<double> params_;
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes.

class NaiveBayesModel final : public FittedModel {
 public:
  NaiveBayesModel(const FeatureMatrix& x, std::span<const std::size_t> y, std::size_t classes,
                  double var_smoothing)
      : classes_(classes),
        cols_(x.cols),
        log_prior_(classes, -std::numeric_limits<double>::infinity()),
        mean_(classes * x.cols, 0.0),
        var_(classes * x.cols, 0.0) {
    std::vector<std::size_t> counts(classes, 0);
    for (std::size_t i = 0; i < x.rows; ++i) {
      ++counts[y[i]];
      for (std::size_t j = 0; j < cols_; ++j) mean_[y[i] * cols_ + j] += x.at(i, j);
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) mean_[c * cols_ + j] /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < x.rows; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        const double d = x.at(i, j) - mean_[y[i] * cols_ + j];
        var_[y[i] * cols_ + j] += d * d;
      }
    }
    // Smoothing proportional to the largest feature variance, as in sklearn.
    double max_var = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < x.rows; ++i) sum += x.at(i, j);
      const double mean = sum / static_cast<double>(x.rows);
      double ss = 0.0;
      for (std::size_t i = 0; i < x.rows; ++i) ss += (x.at(i, j) - mean) * (x.at(i, j) - mean);
      max_var = std::max(max_var, ss / static_cast<double>(x.rows));
    }
    epsilon_ = var_smoothing * (max_var > 0.0 ? max_var : 1.0);
    for (std::size_t c = 0; c < classes; ++c) {
      if (counts[c] == 0) continue;
      log_prior_[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(x.rows));
      for (std::size_t j = 0; j < cols_; ++j) {
        var_[c * cols_ + j] = var_[c * cols_ + j] / static_cast<double>(counts[c]) + epsilon_;
      }
    }
  }

  void predict_proba(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t c = 0; c < classes_; ++c) {
      if (std::isinf(log_prior_[c])) {
        out[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double ll = log_prior_[c];
      for (std::size_t j = 0; j < cols_; ++j) {
        const double v = var_[c * cols_ + j];
        const double d = x[j] - mean_[c * cols_ + j];
        ll -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + d * d / v);
      }
      out[c] = ll;
    }
    softmax_inplace(out);
  }

  json card() const override {
    return {{"type", "gaussian_nb"},
            {"log_prior", log_prior_card()},
            {"mean", mean_},
            {"variance", var_},
            {"epsilon", epsilon_}};
  }

 private:
  json log_prior_card() const {
    json out = json::array();
    for (double lp : log_prior_) out.push_back(std::isinf(lp) ? json(nullptr) : json(lp));
    return out;
  }

  std::size_t classes_;
  std::size_t cols_;
  std::vector<double> log_prior_;
  std::vector<double> mean_;
  std::vector<double> var_;
  double epsilon_ = 0.0;
};

}  // namespace

namespace logistic {

double loss_and_gradient(const Problem& problem, std::span<const double> params, std::span<double> grad) {
  const FeatureMatrix& x = *problem.x;
  const std::size_t k = problem.classes;
  const std::size_t stride = x.cols + 1;
  if (params.size() != k * stride) {
    throw Error(ErrorCode::ArityMismatch, "parameter vector has the wrong size");
  }
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);

  std::vector<double> p(k);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto xi = x.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      const double* w = params.data() + c * stride;
      double s = w[x.cols];
      for (std::size_t j = 0; j < x.cols; ++j) s += w[j] * xi[j];
      p[c] = s;
    }
    // log-sum-exp for a stable cross-entropy
    const double top = *std::max_element(p.begin(), p.end());
    double sum = 0.0;
    for (double s : p) sum += std::exp(s - top);
    const double log_norm = top + std::log(sum);
    loss += log_norm - p[problem.y[i]];
    if (!want_grad) continue;
    for (std::size_t c = 0; c < k; ++c) {
      const double residual = std::exp(p[c] - log_norm) - (c == problem.y[i] ? 1.0 : 0.0);
      double* g = grad.data() + c * stride;
      for (std::size_t j = 0; j < x.cols; ++j) g[j] += residual * xi[j];
      g[x.cols] += residual;
    }
  }
  const double n = static_cast<double>(x.rows);
  loss /= n;
  double penalty = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < x.cols; ++j) {
      const double w = params[c * stride + j];
      penalty += w * w;
      if (want_grad) grad[c * stride + j] = grad[c * stride + j] / n + problem.l2 * w;
    }
    if (want_grad) grad[c * stride + x.cols] /= n;
  }
  return loss + 0.5 * problem.l2 * penalty;
}

}  // namespace logistic

TrainedClassifier train(const ModelConfig& config, const Dataset& ds,
                        std::span<const std::size_t> train_rows, const TrainingObserver& observer) {
  if (train_rows.empty()) throw Error(ErrorCode::InvalidArgument, "training set is empty");
  if (observer) observer(config, train_rows);

  TrainedClassifier clf;
  clf.config_ = config;
  clf.label_domain_ = ds.label_domain();
  clf.feature_count_ = ds.feature_count();
  const std::size_t classes = clf.label_domain_.size();

  std::vector<std::size_t> y;
  y.reserve(train_rows.size());
  for (std::size_t r : train_rows) y.push_back(ds.label_code(r));
  const bool single_class =
      std::all_of(y.begin(), y.end(), [&](std::size_t c) { return c == y.front(); });
  if (single_class) {
    clf.degenerate_ = true;
    clf.model_ = std::make_shared<ConstantModel>(y.front(), classes);
    return clf;
  }

  const FeatureMatrix x = FeatureMatrix::gather(ds, train_rows);
  switch (config.learner) {
    case LearnerKind::DecisionTree:
      clf.model_ = std::make_shared<TreeModel>(
          x, y, classes, static_cast<std::size_t>(std::max<std::int64_t>(config.int_param("max_depth"), 0)),
          static_cast<std::size_t>(std::max<std::int64_t>(config.int_param("min_leaf"), 1)));
      break;
    case LearnerKind::KNearestNeighbors:
      clf.model_ = std::make_shared<KnnModel>(
          x, y, classes, static_cast<std::size_t>(std::max<std::int64_t>(config.int_param("k"), 1)),
          config.choice_param("distance") == "manhattan");
      break;
    case LearnerKind::LogisticRegression:
      clf.model_ = std::make_shared<LogisticModel>(
          x, y, classes, config.real_param("l2_strength"),
          static_cast<std::size_t>(std::max<std::int64_t>(config.int_param("epochs"), 0)),
          config.real_param("learning_rate"));
      break;
    case LearnerKind::GaussianNaiveBayes:
      clf.model_ = std::make_shared<NaiveBayesModel>(x, y, classes, config.real_param("var_smoothing"));
      break;
  }
  return clf;
}

TrainedClassifier train(const ModelConfig& config, const Dataset& ds, const IdSet& train_ids,
                        const TrainingObserver& observer) {
  const auto rows = ds.indices_of(train_ids);
  return train(config, ds, rows, observer);
}

Prediction TrainedClassifier::predict_one(std::span<const double> features) const {
  if (features.size() != feature_count_) {
    throw Error(ErrorCode::ArityMismatch,
                "expected " + std::to_string(feature_count_) + " features, got " +
                    std::to_string(features.size()));
  }
  Prediction p;
  p.probabilities.resize(label_domain_.size());
  model_->predict_proba(features, p.probabilities);
  p.label_index = argmax(p.probabilities);
  p.label = label_domain_[p.label_index];
  return p;
}

std::vector<Prediction> TrainedClassifier::predict(std::span<const DataRow> rows) const {
  std::vector<Prediction> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(predict_one(r.features));
  return out;
}

std::vector<std::size_t> TrainedClassifier::predict_labels(const Dataset& ds,
                                                           std::span<const std::size_t> rows) const {
  std::vector<std::size_t> out;
  out.reserve(rows.size());
  std::vector<double> proba(label_domain_.size());
  for (std::size_t r : rows) {
    const auto& f = ds.row(r).features;
    if (f.size() != feature_count_) throw Error(ErrorCode::ArityMismatch, "feature arity mismatch");
    model_->predict_proba(f, proba);
    out.push_back(argmax(proba));
  }
  return out;
}

json to_json(const ModelConfig& config) {
  json params = json::object();
  for (const auto& [name, value] : config.params) {
    std::visit([&](const auto& v) { params[name] = v; }, value);
  }
  return {{"index", config.index},
          {"learner", std::string(to_string(config.learner))},
          {"params", params},
          {"seed", config.seed}};
}

ModelConfig model_config_from_json(const json& doc) {
  ModelConfig c;
  c.index = doc.at("index").get<std::size_t>();
  c.learner = parse_learner_kind(doc.at("learner").get<std::string>());
  c.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& [name, value] : doc.at("params").items()) {
    if (value.is_string()) {
      c.params.emplace(name, value.get<std::string>());
    } else if (value.is_number_integer()) {
      c.params.emplace(name, value.get<std::int64_t>());
    } else {
      c.params.emplace(name, value.get<double>());
    }
  }
  return c;
}

json TrainedClassifier::model_card() const {
  return {{"config", to_json(config_)},
          {"label_domain", label_domain_},
          {"feature_count", feature_count_},
          {"degenerate", degenerate_},
          {"fitted", model_->card()}};
}

}  // namespace cactus
