#include "cactus/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "cactus/random.hpp"

namespace cactus {

std::string_view to_string(RecommendationSource source) noexcept {
  return source == RecommendationSource::WarmupRandom ? "warmup-random" : "history-derived";
}

namespace {

double warmup_value(std::uint64_t seed, std::size_t history_size, std::string_view key) {
  Rng rng(mix_seed(mix_seed(seed, history_size), fnv1a(key)));
  return rng.uniform01();
}

bool has_key(const IterationRecord& r, std::string_view key) {
  const std::string k(key);
  return r.weights.contains(k) && r.scores.contains(k);
}

}  // namespace

std::vector<double> record_masses(const std::vector<IterationRecord>& history, std::string_view key,
                                  const RecommenderOptions& options) {
  const std::string k(key);
  std::vector<double> logits(history.size(), -std::numeric_limits<double>::infinity());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < history.size(); ++h) {
    if (!has_key(history[h], key)) continue;
    const double utility =
        options.alpha * history[h].overall_accuracy + (1.0 - options.alpha) * history[h].scores.at(k);
    logits[h] = options.beta * utility;
    top = std::max(top, logits[h]);
  }
  std::vector<double> mass(history.size(), 0.0);
  if (std::isinf(top)) return mass;
  double sum = 0.0;
  for (std::size_t h = 0; h < history.size(); ++h) {
    if (std::isinf(logits[h])) continue;
    mass[h] = std::exp(logits[h] - top);
    sum += mass[h];
  }
  for (double& m : mass) m /= sum;
  return mass;
}

WeightRecommendation recommend_weights(const std::vector<IterationRecord>& history,
                                       const ObjectiveFunction& of, std::uint64_t seed,
                                       const RecommenderOptions& options) {
  WeightRecommendation rec;
  rec.weights.reserve(of.objectives.size());
  const bool warm = history.size() >= options.warmup;
  for (const auto& objective : of.objectives) {
    const std::string key = objective_key(objective);
    RecommendedWeight out{key, warmup_value(seed, history.size(), key), RecommendationSource::WarmupRandom};
    if (warm && std::any_of(history.begin(), history.end(),
                            [&](const auto& r) { return has_key(r, key); })) {
      const auto mass = record_masses(history, key, options);
      double value = 0.0;
      double lo = 1.0;
      double hi = 0.0;
      for (std::size_t h = 0; h < history.size(); ++h) {
        if (!has_key(history[h], key)) continue;
        const double w = history[h].weights.at(key);
        value += mass[h] * w;
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
      out.value = std::clamp(value, lo, hi);
      out.source = RecommendationSource::HistoryDerived;
    }
    rec.weights.push_back(std::move(out));
  }
  return rec;
}

nlohmann::json to_json(const WeightRecommendation& rec) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : rec.weights) {
    out.push_back({{"key", w.key},
                   {"value", w.value},
                   {"display", std::round(w.value * 100.0) / 100.0},
                   {"source", std::string(to_string(w.source))}});
  }
  return out;
}

nlohmann::json to_json(const IterationRecord& record) {
  return {{"iteration", record.iteration},
          {"weights", record.weights},
          {"scores", record.scores},
          {"overall_accuracy", record.overall_accuracy}};
}

IterationRecord iteration_record_from_json(const nlohmann::json& doc) {
  IterationRecord r;
  r.iteration = doc.at("iteration").get<std::size_t>();
  r.weights = doc.at("weights").get<std::map<std::string, double>>();
  r.scores = doc.at("scores").get<std::map<std::string, double>>();
  r.overall_accuracy = doc.at("overall_accuracy").get<double>();
  return r;
}

}  // namespace cactus
