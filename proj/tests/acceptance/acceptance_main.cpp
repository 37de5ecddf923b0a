// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cactus/commands.hpp"
#include "cactus/conflict.hpp"
#include "cactus/error.hpp"
#include "cactus/model_zoo.hpp"
#include "cactus/recommender.hpp"
#include "cactus/scorer.hpp"
#include "cactus/stats.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace {

using namespace cactus;
using K = ObjectiveKind;
using Clock = std::chrono::steady_clock;

// Collects mismatches; the first few are kept for the report line.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << " want " << want;
    expect(std::abs(got - want) <= tol, s.str());
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  std::string notes() const {
    std::string out;
    for (const auto& n : notes_) out += "; " + n;
    return out;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> universe(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(testing::row_id(i));
  return ids;
}

std::vector<std::string> train_universe(const DataSplit& split) {
  return {split.train_ids.begin(), split.train_ids.end()};
}

// Random function that the solver accepts: some weight is positive and the
// Ignore objectives leave training rows behind.
ObjectiveFunction trainable_function(std::mt19937_64& rng, const Dataset& ds, const DataSplit& split,
                                     std::size_t max_objectives, std::size_t max_ids) {
  const auto ids = train_universe(split);
  for (;;) {
    ObjectiveFunction of = testing::random_function(rng, ids, ds.label_domain(), max_objectives, max_ids);
    if (of.objectives.empty() || of.total_weight() <= 0.0) continue;
    try {
      effective_train_ids(of, split);
    } catch (const Error&) {
      continue;
    }
    return of;
  }
}

// ---------------------------------------------------------------------------

std::string conflict_oracle(Check& check) {
  std::mt19937_64 rng(1001);
  const auto ids = universe(400);
  double detect_seconds = 0.0;
  std::size_t total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto of = testing::random_function(rng, ids, {"p", "q", "r"}, 10, 200);
    const auto start = Clock::now();
    const auto report = detect_conflicts(of);
    detect_seconds += seconds_since(start);
    const auto expected = oracle::brute_force_conflicts(of);
    total += expected.size();
    check.expect(report.conflicts.size() == expected.size(), "conflict count");
    for (std::size_t k = 0; k < std::min(expected.size(), report.conflicts.size()); ++k) {
      const auto& c = report.conflicts[k];
      check.expect(c.left == expected[k].left && c.right == expected[k].right, "pair order");
      check.expect(std::vector<std::string>(c.conflicted_ids.begin(), c.conflicted_ids.end()) == expected[k].ids,
                   "conflicted ids");
      check.expect(c.severity == expected[k].ids.size(), "severity");
    }
  }
  check.expect(detect_seconds < 5.0, "runtime over 5 s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 functions, %zu conflicts, detect %.3f s", total, detect_seconds);
  return buf;
}

std::string resolution_soundness(Check& check) {
  std::mt19937_64 rng(1002);
  const auto ids = universe(120);
  std::size_t resolutions = 0;
  int cases = 0;
  while (cases < 500) {
    const auto of = testing::random_function(rng, ids, {"p", "q", "r"}, 10, 60);
    const auto report = detect_conflicts(of);
    if (report.empty()) continue;
    ++cases;
    auto keyed = [](const ObjectiveFunction& f, const ConflictReport& r) {
      std::map<std::pair<std::string, std::string>, std::size_t> out;
      for (const auto& c : r.conflicts) {
        out[{objective_key(f.objectives[c.left]), objective_key(f.objectives[c.right])}] = c.severity;
      }
      return out;
    };
    const auto before = keyed(of, report);
    for (const auto& c : report.conflicts) {
      const auto pair = std::make_pair(objective_key(of.objectives[c.left]), objective_key(of.objectives[c.right]));
      for (const auto& action : {Resolution::move_to_left(), Resolution::move_to_right(), Resolution::remove_from_both()}) {
        const auto next = resolve_conflict(of, c, action);
        const auto after = keyed(next, detect_conflicts(next));
        check.expect(!after.contains(pair), "pair still conflicts after " + std::string(to_string(action.action)));
        for (const auto& [p, severity] : after) {
          const auto it = before.find(p);
          check.expect(it != before.end() && severity <= it->second, "another pair's severity grew");
        }
        ++resolutions;
      }
    }
  }
  return "500 cases, " + std::to_string(resolutions) + " resolutions";
}

std::string eligibility_table(Check& check) {
  const std::vector<std::optional<std::string>> labels = {std::nullopt, "p", "q"};
  std::size_t cells = 0;
  for (K a : kAllObjectiveKinds) {
    for (K b : kAllObjectiveKinds) {
      for (const auto& la : labels) {
        for (const auto& lb : labels) {
          const bool got = conflict_eligible(a, la, b, lb);
          const std::string where = std::string(to_string(a)) + "/" + la.value_or("-") + " x " +
                                    std::string(to_string(b)) + "/" + lb.value_or("-");
          check.expect(got == conflict_eligible(b, lb, a, la), "asymmetric " + where);
          check.expect(got == oracle::documented_eligibility(a, la.has_value(), b, lb.has_value(), la == lb),
                       "table mismatch " + where);
          ++cells;
        }
      }
    }
  }
  return std::to_string(cells) + " kind/label combinations";
}

std::string scoring_oracles(Check& check) {
  std::mt19937_64 rng(1004);
  const auto configs = sample_configs(HyperparameterSpace::defaults(), 200, 1004);
  std::map<K, std::size_t> seen;
  std::size_t pairs = 0;
  while (pairs < 200) {
    const Dataset ds = testing::random_dataset(rng, 60 + rng() % 120, 1 + rng() % 4, 2 + rng() % 4, 3.0);
    const DataSplit split = make_split(ds, 0.25, rng());
    for (int local = 0; local < 10 && pairs < 200; ++local, ++pairs) {
      const auto of = trainable_function(rng, ds, split, 10, 30);
      const IdSet effective = effective_train_ids(of, split);
      const auto clf = train(configs[pairs], ds, effective);
      for (std::size_t i = 0; i < of.objectives.size(); ++i) {
        const auto& o = of.objectives[i];
        const double got = score_objective(clf, o, i, ds, split, effective).score;
        check.near(got, oracle::objective_score(clf, o, ds, split, effective), 1e-12, std::string(to_string(o.kind)));
        ++seen[o.kind];
      }
    }
  }
  for (K k : kAllObjectiveKinds) {
    if (k != K::Ignore) check.expect(seen[k] > 0, "kind never exercised: " + std::string(to_string(k)));
  }
  std::size_t scores = 0;
  for (const auto& [_, n] : seen) scores += n;
  return "200 (model, function) pairs, " + std::to_string(scores) + " scores";
}

std::string argmax_invariance(Check& check) {
  std::mt19937_64 rng(1005);
  for (int instance = 0; instance < 50; ++instance) {
    const Dataset ds = testing::random_dataset(rng, 80 + rng() % 80, 2 + rng() % 3, 2 + rng() % 3, 3.0);
    const DataSplit split = make_split(ds, 0.25, rng());
    ObjectiveFunction of = trainable_function(rng, ds, split, 6, 20);
    of.n_samples = 8;
    of.seed = rng();
    SolverOptions options;
    options.threads = 1;
    const std::size_t base = select_model(of, ds, split, options).best_index;
    for (double c : {0.1, 2.0, 10.0}) {
      ObjectiveFunction scaled = of;
      for (auto& o : scaled.objectives) o.weight *= c;
      check.expect(select_model(scaled, ds, split, options).best_index == base,
                   "instance " + std::to_string(instance) + " c=" + std::to_string(c));
    }
  }
  return "50 instances x c in {0.1, 2, 10}";
}

std::string gradient_check(Check& check) {
  std::mt19937_64 rng(1006);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int probe = 0; probe < 20; ++probe) {
    const std::size_t rows = 5 + rng() % 30, cols = 1 + rng() % 5, classes = 2 + rng() % 4;
    FeatureMatrix x{rows, cols, std::vector<double>(rows * cols)};
    for (auto& v : x.data) v = normal(rng);
    std::vector<std::size_t> y(rows);
    for (auto& v : y) v = rng() % classes;
    const logistic::Problem problem{&x, y, classes, std::uniform_real_distribution<double>(0.0, 2.0)(rng)};
    std::vector<double> params(classes * (cols + 1));
    for (auto& v : params) v = normal(rng);
    std::vector<double> grad(params.size());
    logistic::loss_and_gradient(problem, params, grad);
    const auto numeric = oracle::numeric_gradient(
        [&](const std::vector<double>& p) { return logistic::loss_and_gradient(problem, p, {}); }, params, 1e-6);
    const double err = oracle::relative_error(grad, numeric);
    worst = std::max(worst, err);
    check.expect(err < 1e-5, "probe " + std::to_string(probe) + " relative error " + std::to_string(err));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "20 probes, worst relative error %.2e", worst);
  return buf;
}

std::string train_determinism(Check& check) {
  const auto dir = testing::scratch_dir("acceptance-determinism");
  std::mt19937_64 rng(1007);
  const Dataset ds = testing::random_dataset(rng, 400, 4, 3, 2.5);
  testing::write_text(dir / "data.csv", testing::to_csv(ds));
  const DataSplit split = make_split(ds, 0.2, 0);
  ObjectiveFunction of = trainable_function(rng, ds, split, 6, 40);
  of.id = "determinism";
  of.n_samples = 60;
  testing::write_text(dir / "fn.json", serialize_objective_function(of));
  std::ostringstream out, err;
  const int a = cli::run_train({dir / "fn.json", dir / "data.csv", dir / "a", 11, {}, 1}, out, err);
  const int b = cli::run_train({dir / "fn.json", dir / "data.csv", dir / "b", 11, {}, 0}, out, err);
  check.expect(a == 0 && b == 0, "train failed: " + err.str());
  for (const char* name : {"selection.json", "model_card.json", "function.json"}) {
    const std::string first = testing::read_text(dir / "a" / name);
    check.expect(!first.empty() && first == testing::read_text(dir / "b" / name), std::string(name) + " differs");
  }
  return "two runs, 3 artifacts compared byte for byte";
}

std::string ignore_exclusion(Check& check) {
  std::mt19937_64 rng(1008);
  std::size_t learner_calls = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = testing::random_dataset(rng, 100 + rng() % 100, 3, 3, 3.0);
    const DataSplit split = make_split(ds, 0.2, rng());
    ObjectiveFunction of;
    do {
      of = trainable_function(rng, ds, split, 8, 40);
    } while (std::none_of(of.objectives.begin(), of.objectives.end(),
                          [](const auto& o) { return o.kind == K::Ignore; }));
    of.n_samples = 8;
    IdSet ignored;
    for (const auto& o : of.objectives) {
      if (o.kind == K::Ignore) ignored.insert(o.ids.begin(), o.ids.end());
    }
    std::mutex mutex;
    std::size_t calls = 0, leaked = 0;
    SolverOptions options;
    options.threads = 2;
    options.observer = [&](const ModelConfig&, std::span<const std::size_t> rows) {
      std::lock_guard lock(mutex);
      ++calls;
      for (std::size_t r : rows) leaked += ignored.contains(ds.row(r).id) ? 1 : 0;
    };
    select_model(of, ds, split, options);
    check.expect(calls == of.n_samples, "not every learner was observed");
    check.expect(leaked == 0, "ignored rows reached a learner in trial " + std::to_string(trial));
    learner_calls += calls;
  }
  return "50 functions, " + std::to_string(learner_calls) + " learner fits observed";
}

// 3000 rows, 5 classes. A tight pocket of class-0 rows sits inside the class-3
// cloud; the user marks the pocket Critical and, by mistake, Ignore as well.
std::string case_study(Check& check) {
  const auto start = Clock::now();
  std::mt19937_64 rng(1009);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::vector<std::vector<double>> centres = {
      {0, 0, 0, 0}, {4, 0, 0, 1}, {0, 4, 1, 0}, {4, 4, 0, 0}, {2, 2, 4, 2}};
  const std::vector<double> pocket = {4.6, 4.6, -0.6, 0.0};
  std::vector<DataRow> rows;
  std::vector<std::size_t> pocket_rows;
  for (std::size_t i = 0; i < 3000; ++i) {
    DataRow r{testing::row_id(i), std::vector<double>(4), ""};
    const bool in_pocket = i % 40 == 0;  // 75 rows
    const std::size_t label = in_pocket ? 0 : i % 5;
    for (std::size_t j = 0; j < 4; ++j) {
      r.features[j] = in_pocket ? pocket[j] + 0.08 * noise(rng) : centres[label][j] + 0.9 * noise(rng);
    }
    r.label = "class" + std::to_string(label);
    if (in_pocket) pocket_rows.push_back(i);
    rows.push_back(std::move(r));
  }
  const Dataset ds("case-study", {"a", "b", "c", "d"}, std::move(rows));
  const DataSplit split = make_split(ds, 0.2, 2024);

  IdSet pocket_train, ordinary, noisy;
  for (std::size_t r : pocket_rows) {
    if (split.train_ids.contains(ds.row(r).id)) pocket_train.insert(ds.row(r).id);
  }
  for (const auto& id : split.train_ids) {
    if (pocket_train.contains(id)) continue;
    const std::size_t n = std::stoul(id.substr(1));
    if (n % 23 == 1 && ordinary.size() < 120) {
      ordinary.insert(id);
    } else if (n % 29 == 2 && noisy.size() < 60) {
      noisy.insert(id);
    }
  }
  IdSet critical = ordinary;
  critical.insert(pocket_train.begin(), pocket_train.end());
  IdSet ignore = noisy;
  ignore.insert(pocket_train.begin(), pocket_train.end());

  ObjectiveFunction of;
  of.id = "case-study";
  of.dataset_ref = ds.name();
  of.n_samples = 200;
  of.seed = 7;
  of.objectives.push_back({K::Critical, critical, std::nullopt, 0.6});
  of.objectives.push_back({K::Ignore, ignore, std::nullopt, 0.2});
  of.objectives.push_back({K::ValidationAccuracy, {}, std::nullopt, 0.4});
  check.expect(validate_function(of, ds, split).ok(), "case-study function invalid");

  SolverOptions options;
  const auto before = select_model(of, ds, split, options);
  const double critical_before = before.best().per_objective[0].score;

  const auto report = detect_conflicts(of);
  check.expect(report.conflicts.size() == 1, "expected exactly one conflict");
  check.expect(!report.empty() && report.conflicts[0].conflicted_ids == pocket_train, "conflict is not the pocket");
  if (report.empty()) return "no conflict detected";
  const auto resolved = resolve_conflict(of, report.conflicts[0], Resolution::remove_from_both());
  check.expect(detect_conflicts(resolved).empty(), "conflict survived resolution");

  const auto after = select_model(resolved, ds, split, options);
  const auto critical_index = resolved.find("critical");
  check.expect(critical_index.has_value(), "critical objective vanished");
  const double critical_after = after.best().per_objective[critical_index.value_or(0)].score;

  // Same comparison on the originally declared Critical rows.
  const auto refit_before = train(before.best().config, ds, effective_train_ids(of, split));
  const auto refit_after = train(after.best().config, ds, effective_train_ids(resolved, split));
  const ObjectiveSpec original{K::Critical, critical, std::nullopt, 1.0};
  const double original_before = score_objective(refit_before, original, 0, ds, split, {}).score;
  const double original_after = score_objective(refit_after, original, 0, ds, split, {}).score;

  const double elapsed = seconds_since(start);
  check.expect(critical_after > critical_before, "critical score did not increase");
  check.expect(original_after > original_before, "score on original critical rows did not increase");
  check.expect(elapsed < 60.0, "workflow took " + std::to_string(elapsed) + " s");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "critical %.2f -> %.2f (original rows %.2f -> %.2f), validation %.2f -> %.2f, %.1f s",
                display_percent(critical_before), display_percent(critical_after), display_percent(original_before),
                display_percent(original_after), display_percent(before.best().validation_accuracy),
                display_percent(after.best().validation_accuracy), elapsed);
  return buf;
}

std::string statistics_oracles(Check& check) {
  std::mt19937_64 rng(1010);
  for (int trial = 0; trial < 60; ++trial) {
    const Dataset ds = testing::random_dataset(rng, 150 + rng() % 100, 3 + rng() % 4, 3, 2.0);
    const DataSplit split = make_split(ds, 0.2, rng());
    const StandardizedView view(ds, split);
    const auto ids = train_universe(split);

    const IdSet subset = testing::random_subset(rng, ids, 50);
    const auto ranking = top_variant_attributes(view, subset, ds.feature_count());
    const auto order = oracle::variance_order(ds, split, subset);
    for (std::size_t k = 0; k < ranking.size(); ++k) {
      check.expect(ranking[k].index == order[k], "variance ranking order");
      check.near(ranking[k].variance, oracle::variance(oracle::z_values(ds, split, order[k], subset)), 1e-12,
                 "ranking variance");
    }

    const std::size_t attribute = rng() % ds.feature_count();
    const auto summary = distribution_summary(view, subset, ds.feature_names()[attribute]);
    std::vector<double> raw;
    for (const auto& id : subset) raw.push_back(ds.row(ds.index_of(id)).features[attribute]);
    check.near(summary.whisker.min, *std::min_element(raw.begin(), raw.end()), 1e-12, "min");
    check.near(summary.whisker.q1, oracle::quantile(raw, 0.25), 1e-12, "q1");
    check.near(summary.whisker.median, oracle::quantile(raw, 0.5), 1e-12, "median");
    check.near(summary.whisker.q3, oracle::quantile(raw, 0.75), 1e-12, "q3");
    check.near(summary.whisker.max, *std::max_element(raw.begin(), raw.end()), 1e-12, "max");

    ObjectiveFunction of;
    of.objectives.push_back({K::Critical, testing::random_subset(rng, ids, 40), std::nullopt, 1.0});
    of.objectives.push_back({K::Ignore, testing::random_subset(rng, ids, 40), std::nullopt, 1.0});
    of.objectives[1].ids.insert(*of.objectives[0].ids.begin());
    const auto c = detect_conflicts(of).conflicts.at(0);
    const auto bars = variance_bars(view, of, c);
    IdSet both = of.objectives[0].ids;
    both.insert(of.objectives[1].ids.begin(), of.objectives[1].ids.end());
    const auto bar_order = oracle::variance_order(ds, split, both);
    check.expect(bars.bars.size() == 3, "three variance bars");
    for (std::size_t k = 0; k < bars.bars.size(); ++k) {
      const std::size_t j = bar_order[k];
      check.expect(bars.bars[k].attribute == ds.feature_names()[j], "bar attribute");
      check.near(bars.bars[k].left, oracle::variance(oracle::z_values(ds, split, j, of.objectives[0].ids)), 1e-12, "left bar");
      check.near(bars.bars[k].right, oracle::variance(oracle::z_values(ds, split, j, of.objectives[1].ids)), 1e-12, "right bar");
      check.near(bars.bars[k].conflicted, oracle::variance(oracle::z_values(ds, split, j, c.conflicted_ids)), 1e-12,
                 "conflicted bar");
    }
  }

  std::normal_distribution<double> noise(0.0, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + rng() % 200);
    for (auto& x : v) x = rng() % 4 == 0 ? std::round(noise(rng)) : noise(rng);
    std::sort(v.begin(), v.end());
    double previous = -INFINITY;
    for (int step = 0; step <= 100; ++step) {
      const double q = quantile_inclusive(v, step / 100.0);
      check.expect(q >= previous, "quantile decreased");
      previous = q;
    }
    const auto s = five_number_summary(v);
    check.expect(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max, "summary order");
  }
  return "60 random instances, 1000 quantile inputs";
}

std::string recommender(Check& check) {
  ObjectiveFunction of;
  of.objectives.push_back({K::Critical, {"a"}, std::nullopt, 0.5});
  of.objectives.push_back({K::Candidate, {"b"}, "x", 0.5});
  of.objectives.push_back({K::F1Macro, {}, std::nullopt, 0.5});

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (std::size_t h = 0; h < 2; ++h) {
      const std::vector<IterationRecord> history(h);
      const auto a = recommend_weights(history, of, seed);
      const auto b = recommend_weights(history, of, seed);
      for (std::size_t i = 0; i < a.weights.size(); ++i) {
        check.expect(a.weights[i].value == b.weights[i].value, "warmup not deterministic");
        check.expect(a.weights[i].value >= 0.0 && a.weights[i].value <= 1.0, "warmup out of range");
      }
    }
  }

  std::mt19937_64 rng(1011);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<IterationRecord> history;
    for (std::size_t h = 0; h < 2 + rng() % 8; ++h) {
      IterationRecord r;
      r.iteration = h;
      r.overall_accuracy = unit(rng);
      for (const auto& o : of.objectives) {
        if (unit(rng) < 0.25) continue;
        r.weights[objective_key(o)] = unit(rng);
        r.scores[objective_key(o)] = unit(rng);
      }
      history.push_back(std::move(r));
    }
    RecommenderOptions options;
    options.alpha = unit(rng);
    options.beta = 30.0 * unit(rng);
    for (const auto& w : recommend_weights(history, of, rng(), options).weights) {
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& r : history) {
        if (!r.weights.contains(w.key)) continue;
        lo = std::min(lo, r.weights.at(w.key));
        hi = std::max(hi, r.weights.at(w.key));
      }
      if (std::isinf(lo)) continue;
      check.expect(w.source == RecommendationSource::HistoryDerived, "post-warmup value not history-derived");
      check.expect(w.value >= lo && w.value <= hi, "recommendation outside convex hull");
    }
  }

  std::vector<IterationRecord> dominant(2);
  for (const auto& o : of.objectives) {
    dominant[0].weights[objective_key(o)] = 0.85;
    dominant[0].scores[objective_key(o)] = 1.0;
    dominant[1].weights[objective_key(o)] = 0.15;
    dominant[1].scores[objective_key(o)] = 0.0;
  }
  dominant[0].overall_accuracy = 1.0;
  dominant[1].overall_accuracy = 0.0;
  RecommenderOptions sharp;
  sharp.beta = 40.0;
  // Utilities 1 and 0: mass on the dominant record is 1 / (1 + e^-beta).
  const double mass = 1.0 / (1.0 + std::exp(-sharp.beta));
  const double expected = mass * 0.85 + (1.0 - mass) * 0.15;
  for (const auto& w : recommend_weights(dominant, of, 0, sharp).weights) {
    check.near(w.value, expected, 1e-3, "dominant limit");
    check.near(w.value, 0.85, 1e-3, "dominant record weight");
  }
  return "20 seeds warmup, 1000 hull instances, dominant limit beta=40";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string(Check&)>>> criteria = {
      {"conflict parser matches brute-force oracle", conflict_oracle},
      {"resolution soundness", resolution_soundness},
      {"conflict matrix symmetry and table conformance", eligibility_table},
      {"scoring oracles", scoring_oracles},
      {"argmax weight-scale invariance", argmax_invariance},
      {"logistic regression gradient check", gradient_check},
      {"cli train determinism", train_determinism},
      {"ignore exclusion", ignore_exclusion},
      {"critical/ignore case study", case_study},
      {"statistics oracles", statistics_oracles},
      {"weight recommender", recommender},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check check;
    std::string detail;
    try {
      detail = run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = check.ok();
    failed += ok ? 0 : 1;
    std::printf("%s  %-48s %s (%zu checks)%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(), check.checks(),
                check.notes().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
