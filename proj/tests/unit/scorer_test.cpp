#include <gtest/gtest.h>

#include <mutex>
#include <random>

#include "cactus/error.hpp"
#include "cactus/scorer.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace cactus {
namespace {

using K = ObjectiveKind;

DataSplit even_odd_split(const Dataset& ds) {
  DataSplit split;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (i % 5 == 4 ? split.validation_ids : split.train_ids).insert(ds.row(i).id);
  }
  return split;
}

IdSet first_train(const DataSplit& split, std::size_t n) {
  IdSet out;
  for (const auto& id : split.train_ids) {
    if (out.size() == n) break;
    out.insert(id);
  }
  return out;
}

TEST(EffectiveTrainIds, Examples) {
  DataSplit split;
  for (std::size_t i = 0; i < 100; ++i) split.train_ids.insert(testing::row_id(i));
  ObjectiveFunction of;
  of.objectives.push_back({K::Critical, {"r0001"}, std::nullopt, 1.0});
  EXPECT_EQ(effective_train_ids(of, split), split.train_ids);
  of.objectives.push_back({K::Ignore, first_train(split, 10), std::nullopt, 1.0});
  EXPECT_EQ(effective_train_ids(of, split).size(), 90u);
  of.objectives.back().ids = split.train_ids;
  try {
    effective_train_ids(of, split);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyEffectiveTrainSet);
  }
}

TEST(ScoreObjective, PerfectClassifierOnCritical) {
  const Dataset ds = testing::separable_dataset(100);
  const DataSplit split = even_odd_split(ds);
  ObjectiveFunction of;
  of.objectives.push_back({K::Critical, first_train(split, 5), std::nullopt, 1.0});
  const ModelConfig config{0, LearnerKind::DecisionTree, {{"max_depth", std::int64_t{12}}, {"min_leaf", std::int64_t{1}}}, 0};
  const auto eval = evaluate_config(config, of, ds, split);
  EXPECT_EQ(eval.per_objective[0].score, 1.0);
  EXPECT_EQ(eval.per_objective[0].support, 5u);
  EXPECT_EQ(eval.validation_accuracy, 1.0);
}

TEST(ScoreObjective, UnlabelledSimilarityIsPurity) {
  const Dataset ds("s", {"x"}, {{"a", {1}, "A"}, {"b", {2}, "A"}, {"c", {3}, "B"}, {"d", {4}, "B"}});
  DataSplit split;
  split.train_ids = {"a", "b", "c", "d"};
  RowPredictions preds{{0, 0, 0, 1}};
  const ObjectiveSpec sim{K::Similarity, {"a", "b", "c", "d"}, std::nullopt, 1.0};
  EXPECT_DOUBLE_EQ(score_objective(preds, sim, 0, ds, split, split.train_ids).score, 0.75);
  const ObjectiveSpec labelled{K::Similarity, {"a", "b", "c", "d"}, "B", 1.0};
  EXPECT_DOUBLE_EQ(score_objective(preds, labelled, 0, ds, split, split.train_ids).score, 0.25);
  const ObjectiveSpec ignore{K::Ignore, {"a"}, std::nullopt, 1.0};
  EXPECT_EQ(score_objective(preds, ignore, 0, ds, split, split.train_ids).score, 1.0);
}

TEST(ScoreObjective, MacroMetricsCountZeroOverZeroAsZero) {
  const Dataset ds("m", {"x"}, {{"a", {1}, "A"}, {"b", {2}, "B"}, {"c", {3}, "C"}, {"t", {0}, "A"}});
  DataSplit split;
  split.train_ids = {"t"};
  split.validation_ids = {"a", "b", "c"};
  RowPredictions preds{{0, 0, 0, 0}};  // everything predicted A
  const IdSet effective = {"t"};
  const ObjectiveSpec f1{K::F1Macro, {}, std::nullopt, 1.0};
  const ObjectiveSpec precision{K::PrecisionMacro, {}, std::nullopt, 1.0};
  // A: tp 1, fp 2, fn 0 -> precision 1/3, f1 0.5. B and C: 0.
  EXPECT_DOUBLE_EQ(score_objective(preds, f1, 0, ds, split, effective).score, 0.5 / 3.0);
  EXPECT_DOUBLE_EQ(score_objective(preds, precision, 0, ds, split, effective).score, (1.0 / 3.0) / 3.0);
}

TEST(ScoreObjective, MatchesConfusionMatrixOracle) {
  std::mt19937_64 rng(61);
  const Dataset ds = testing::random_dataset(rng, 120, 3, 3, 4.0);
  const DataSplit split = make_split(ds, 0.25, 5);
  std::vector<std::string> universe(split.train_ids.begin(), split.train_ids.end());
  const auto configs = sample_configs(HyperparameterSpace::defaults(), 20, 8);
  for (int trial = 0; trial < 40; ++trial) {
    ObjectiveFunction of = testing::random_function(rng, universe, ds.label_domain(), 8, 30);
    IdSet effective;
    try {
      effective = effective_train_ids(of, split);
    } catch (const Error&) {
      continue;
    }
    const auto clf = train(configs[trial % configs.size()], ds, effective);
    for (std::size_t i = 0; i < of.objectives.size(); ++i) {
      const double got = score_objective(clf, of.objectives[i], i, ds, split, effective).score;
      EXPECT_NEAR(got, oracle::objective_score(clf, of.objectives[i], ds, split, effective), 1e-12)
          << to_string(of.objectives[i].kind);
    }
  }
}

TEST(AggregateScore, Examples) {
  ObjectiveFunction of;
  of.objectives.push_back({K::TrainAccuracy, {}, std::nullopt, 1.0});
  of.objectives.push_back({K::ValidationAccuracy, {}, std::nullopt, 1.0});
  const std::vector<ObjectiveScore> two = {{0, 0.2, 1}, {1, 0.8, 1}};
  EXPECT_DOUBLE_EQ(aggregate_score(of, two), 0.5);

  ObjectiveFunction single;
  single.objectives.push_back({K::ValidationAccuracy, {}, std::nullopt, 0.3});
  const std::vector<ObjectiveScore> one = {{0, 0.9, 1}};
  EXPECT_DOUBLE_EQ(aggregate_score(single, one), 0.9);

  single.objectives[0].weight = 0.0;
  EXPECT_THROW(aggregate_score(single, one), Error);
}

TEST(AggregateScore, BoundedByScores) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    ObjectiveFunction of;
    std::vector<ObjectiveScore> scores;
    for (std::size_t i = 0; i < 1 + rng() % 6; ++i) {
      of.objectives.push_back({K::ValidationAccuracy, {}, std::nullopt, unit(rng) + 1e-3});
      scores.push_back({i, unit(rng), 1});
    }
    const double agg = aggregate_score(of, scores);
    const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end(),
                                              [](const auto& a, const auto& b) { return a.score < b.score; });
    EXPECT_GE(agg, lo->score);
    EXPECT_LE(agg, hi->score);
  }
}

class SelectModelTest : public ::testing::Test {
 protected:
  SelectModelTest() : ds_(make()), split_(make_split(ds_, 0.2, 1)) {}
  static Dataset make() {
    std::mt19937_64 rng(5);
    return testing::random_dataset(rng, 150, 3, 3, 3.0);
  }
  ObjectiveFunction function(std::uint32_t n) const {
    ObjectiveFunction of;
    of.n_samples = n;
    of.seed = 9;
    of.objectives.push_back({K::Critical, first_train(split_, 20), std::nullopt, 0.6});
    of.objectives.push_back({K::ValidationAccuracy, {}, std::nullopt, 0.4});
    return of;
  }
  Dataset ds_;
  DataSplit split_;
};

TEST_F(SelectModelTest, SingleSample) {
  const auto result = select_model(function(1), ds_, split_);
  ASSERT_EQ(result.all.size(), 1u);
  EXPECT_EQ(result.best_index, 0u);
}

TEST_F(SelectModelTest, BestIsMaximumAndDeterministic) {
  const auto of = function(10);
  SolverOptions serial, parallel;
  serial.threads = 1;
  parallel.threads = 3;
  const auto a = select_model(of, ds_, split_, serial);
  const auto b = select_model(of, ds_, split_, parallel);
  EXPECT_EQ(a, b);
  for (const auto& e : a.all) EXPECT_GE(a.best().aggregate, e.aggregate);
  for (std::size_t i = 0; i < a.best_index; ++i) EXPECT_LT(a.all[i].aggregate, a.best().aggregate);
  for (std::size_t i = 0; i < a.all.size(); ++i) EXPECT_EQ(a.all[i].config.index, i);
}

TEST_F(SelectModelTest, ScaleInvariantArgmax) {
  const auto of = function(12);
  const auto base = select_model(of, ds_, split_);
  for (double c : {0.1, 2.0, 10.0}) {
    ObjectiveFunction scaled = of;
    for (auto& o : scaled.objectives) o.weight *= c;
    EXPECT_EQ(select_from_pool(scaled, base.all).best_index, base.best_index) << c;
  }
}

TEST_F(SelectModelTest, IgnoredRowsNeverTrained) {
  ObjectiveFunction of = function(8);
  const IdSet ignored = first_train(split_, 30);
  of.objectives.push_back({K::Ignore, ignored, std::nullopt, 0.5});
  std::mutex mutex;
  std::size_t calls = 0;
  bool leaked = false;
  SolverOptions options;
  options.threads = 2;
  options.observer = [&](const ModelConfig&, std::span<const std::size_t> rows) {
    std::lock_guard lock(mutex);
    ++calls;
    for (std::size_t r : rows) leaked |= ignored.contains(ds_.row(r).id);
  };
  select_model(of, ds_, split_, options);
  EXPECT_EQ(calls, 8u);
  EXPECT_FALSE(leaked);
}

TEST_F(SelectModelTest, AllZeroWeightsRejected) {
  ObjectiveFunction of = function(2);
  for (auto& o : of.objectives) o.weight = 0.0;
  try {
    select_model(of, ds_, split_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllZeroWeights);
  }
}

// Constructed pools: models differ only in their Critical score.
TEST(SelectFromPool, RaisingCriticalWeightNeverLowersCriticalScore) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    ObjectiveFunction of;
    of.objectives.push_back({K::Critical, {"a"}, std::nullopt, unit(rng)});
    of.objectives.push_back({K::ValidationAccuracy, {}, std::nullopt, unit(rng) + 0.01});
    of.objectives.push_back({K::F1Macro, {}, std::nullopt, unit(rng)});
    const double shared_val = unit(rng), shared_f1 = unit(rng);
    std::vector<ModelEvaluation> pool(2 + rng() % 8);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      pool[i].config.index = i;
      pool[i].per_objective = {{0, unit(rng), 1}, {1, shared_val, 1}, {2, shared_f1, 1}};
    }
    double previous = select_from_pool(of, pool).best().per_objective[0].score;
    for (double w = of.objectives[0].weight; w <= 1.0; w += 0.1) {
      of.objectives[0].weight = w;
      const double now = select_from_pool(of, pool).best().per_objective[0].score;
      EXPECT_GE(now, previous);
      previous = now;
    }
  }
}

TEST(DisplayPercent, TwoDecimals) {
  EXPECT_DOUBLE_EQ(display_percent(0.80123), 80.12);
  EXPECT_DOUBLE_EQ(display_percent(1.0), 100.0);
}

}  // namespace
}  // namespace cactus
