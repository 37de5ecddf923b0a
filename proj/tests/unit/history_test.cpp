#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "cactus/error.hpp"
#include "cactus/history.hpp"
#include "generators.hpp"

namespace cactus {
namespace {

using K = ObjectiveKind;

SelectionResult fake_result(double accuracy) {
  SelectionResult r;
  ModelEvaluation e;
  e.config = {0, LearnerKind::KNearestNeighbors, {{"k", std::int64_t{3}}, {"distance", std::string("euclidean")}}, 5};
  e.per_objective = {{0, 0.25, 4}};
  e.aggregate = 0.25;
  e.validation_accuracy = accuracy;
  r.all = {e};
  return r;
}

ObjectiveFunction function(double weight) {
  ObjectiveFunction of;
  of.id = "f";
  of.objectives.push_back({K::Critical, {"b", "a"}, std::nullopt, weight});
  return of;
}

Session make_session() {
  DataSplit split;
  split.train_ids = {"a", "b"};
  split.validation_ids = {"c"};
  split.seed = 4;
  return Session("s1", "data", split, 0.2, 99);
}

TEST(Snapshot, ImprovedFlag) {
  Session s = make_session();
  EXPECT_FALSE(s.snapshot(function(0.1), fake_result(0.70), 1).improved);
  EXPECT_EQ(s.gallery()[0].iteration, 0u);
  EXPECT_TRUE(s.snapshot(function(0.2), fake_result(0.80), 2).improved);
  EXPECT_FALSE(s.snapshot(function(0.3), fake_result(0.80), 3).improved);
  EXPECT_EQ(s.gallery().size(), 3u);
  EXPECT_EQ(s.gallery()[2].iteration, 2u);
}

TEST(Snapshot, DeepCopy) {
  Session s = make_session();
  ObjectiveFunction of = function(0.1);
  s.snapshot(of, fake_result(0.5), 1);
  of.objectives[0].weight = 0.9;
  EXPECT_EQ(s.gallery()[0].function.objectives[0].weight, 0.1);
}

TEST(Revert, RestoresCanonicalFormWithoutTruncating) {
  Session s = make_session();
  const auto first = function(0.1);
  s.snapshot(first, fake_result(0.5), 1);
  s.snapshot(function(0.2), fake_result(0.6), 2);
  s.snapshot(function(0.3), fake_result(0.7), 3);
  s.set_current(function(0.9));
  EXPECT_EQ(serialize_objective_function(s.revert(0)), serialize_objective_function(first));
  EXPECT_EQ(s.current(), first);
  s.snapshot(s.current(), fake_result(0.4), 4);
  EXPECT_EQ(s.gallery().size(), 4u);
  EXPECT_EQ(s.gallery()[1].function, function(0.2));
  try {
    s.revert(99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(PersistSession, RoundTrip) {
  const auto dir = testing::scratch_dir("history-persist");
  Session empty = make_session();
  persist_session(empty, dir / "empty.json");
  EXPECT_EQ(load_session(dir / "empty.json"), empty);

  Session s = make_session();
  s.snapshot(function(0.1), fake_result(0.5), 1);
  s.snapshot(function(0.2), fake_result(0.6), 2);
  s.set_current(function(0.45));
  persist_session(s, dir / "s.json");
  EXPECT_EQ(load_session(dir / "s.json"), s);
  EXPECT_EQ(nlohmann::json::parse(testing::read_text(dir / "s.json"))["version"], kSessionFileVersion);
}

TEST(PersistSession, VersionAndCorruption) {
  const auto dir = testing::scratch_dir("history-corrupt");
  auto doc = to_json(make_session());
  doc["version"] = 2;
  testing::write_text(dir / "v2.json", doc.dump());
  testing::write_text(dir / "junk.json", "{ nope");
  for (const char* name : {"v2.json", "junk.json"}) {
    try {
      load_session(dir / name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CorruptSession) << name;
    }
  }
  try {
    load_session(dir / "absent.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

// Retraining every gallery function (same seeds) reproduces its aggregate.
TEST(Session, ReplayReproducesAggregates) {
  std::mt19937_64 rng(3);
  const Dataset ds = testing::random_dataset(rng, 120, 3, 3, 3.0);
  const DataSplit split = make_split(ds, 0.2, 2);
  Session s("s", ds.name(), split, 0.2, 1);
  ObjectiveFunction of;
  of.n_samples = 6;
  of.seed = 17;
  of.objectives.push_back({K::Critical, {*split.train_ids.begin()}, std::nullopt, 0.5});
  of.objectives.push_back({K::ValidationAccuracy, {}, std::nullopt, 0.5});
  for (double w : {0.5, 0.9, 0.1}) {
    of.objectives[0].weight = w;
    s.snapshot(of, select_model(of, ds, split));
  }
  s.revert(1);
  s.snapshot(s.current(), select_model(s.current(), ds, split));
  for (const auto& entry : s.gallery()) {
    EXPECT_EQ(select_model(entry.function, ds, split).best().aggregate, entry.summary.aggregate);
  }
  EXPECT_EQ(s.gallery()[3].summary, s.gallery()[1].summary);
}

}  // namespace
}  // namespace cactus
