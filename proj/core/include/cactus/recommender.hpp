#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cactus/objective.hpp"

namespace cactus {

/// One past training iteration, keyed by objective key so records line up
/// across function versions that add or drop objectives.
struct IterationRecord {
  std::size_t iteration = 0;
  std::map<std::string, double> weights;
  std::map<std::string, double> scores;
  double overall_accuracy = 0.0;

  bool operator==(const IterationRecord&) const = default;
};

enum class RecommendationSource { WarmupRandom, HistoryDerived };
std::string_view to_string(RecommendationSource source) noexcept;

struct RecommendedWeight {
  std::string key;
  double value = 0.0;  // in [0, 1]
  RecommendationSource source = RecommendationSource::WarmupRandom;
};

struct WeightRecommendation {
  /// One entry per objective, in function order.
  std::vector<RecommendedWeight> weights;
};

struct RecommenderOptions {
  double alpha = 0.5;  // blend of overall accuracy vs. the objective's own score
  double beta = 5.0;   // softmax inverse temperature
  std::size_t warmup = 2;
};

/// Softmax-weighted average of historical weights. Record h's utility for
/// objective i is alpha * accuracy_h + (1 - alpha) * score_{h,i}; the
/// recommendation is sum_h softmax(beta * utility)_h * w_{h,i} over records
/// that contain i. With fewer than `warmup` records, or none containing i,
/// the value is a uniform draw determined by (seed, history size, key).
WeightRecommendation recommend_weights(const std::vector<IterationRecord>& history,
                                       const ObjectiveFunction& of, std::uint64_t seed,
                                       const RecommenderOptions& options = {});

/// Softmax mass of each record for one objective key; records lacking the key
/// get zero. Exposed for inspection and testing.
std::vector<double> record_masses(const std::vector<IterationRecord>& history, std::string_view key,
                                  const RecommenderOptions& options = {});

nlohmann::json to_json(const WeightRecommendation& rec);
nlohmann::json to_json(const IterationRecord& record);
IterationRecord iteration_record_from_json(const nlohmann::json& doc);

}  // namespace cactus
