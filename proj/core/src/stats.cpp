#include "cactus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cactus/error.hpp"

namespace cactus {

StandardizedView::StandardizedView(const Dataset& ds, const DataSplit& split)
    : feature_names_(ds.feature_names()) {
  const std::size_t n = ds.size();
  const std::size_t d = ds.feature_count();
  ids_.reserve(n);
  labels_.reserve(n);
  raw_.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const DataRow& r = ds.row(i);
    ids_.push_back(r.id);
    labels_.push_back(r.label);
    raw_.insert(raw_.end(), r.features.begin(), r.features.end());
    index_.emplace(r.id, i);
  }
  train_rows_ = ds.indices_of(split.train_ids);
  std::sort(train_rows_.begin(), train_rows_.end());

  means_.assign(d, 0.0);
  stddevs_.assign(d, 0.0);
  std::vector<bool> constant(d, true);
  std::vector<double> column(train_rows_.size());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < train_rows_.size(); ++k) column[k] = raw(train_rows_[k], j);
    if (column.empty()) continue;
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    constant[j] = *lo == *hi;
    means_[j] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
    stddevs_[j] = constant[j] ? 0.0 : std::sqrt(population_variance(column));
  }
  z_.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      z_[i * d + j] = constant[j] ? 0.0 : (raw(i, j) - means_[j]) / stddevs_[j];
    }
  }
}

std::size_t StandardizedView::attribute_index(std::string_view name) const {
  auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end()) {
    throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + std::string(name) + "'",
                std::string(name));
  }
  return static_cast<std::size_t>(it - feature_names_.begin());
}

std::vector<std::size_t> StandardizedView::rows_of(const IdSet& ids) const {
  if (ids.empty()) throw Error(ErrorCode::EmptyIdSet, "id set is empty");
  std::vector<std::size_t> rows;
  rows.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownId, "unknown row id '" + id + "'", id);
    rows.push_back(it->second);
  }
  return rows;
}

double population_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / n;
}

namespace {

std::vector<double> z_column(const StandardizedView& view, std::span<const std::size_t> rows,
                             std::size_t attribute) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(view.z(r, attribute));
  return out;
}

std::vector<double> raw_column(const StandardizedView& view, std::span<const std::size_t> rows,
                               std::size_t attribute) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(view.raw(r, attribute));
  return out;
}

VarianceRanking rank_rows(const StandardizedView& view, std::span<const std::size_t> rows,
                          std::size_t k) {
  VarianceRanking ranking;
  ranking.reserve(view.feature_count());
  for (std::size_t j = 0; j < view.feature_count(); ++j) {
    ranking.push_back({view.feature_names()[j], j, population_variance(z_column(view, rows, j))});
  }
  std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    return a.variance > b.variance;
  });
  ranking.resize(std::min(k, ranking.size()));
  return ranking;
}

IdSet set_union(const IdSet& a, const IdSet& b) {
  IdSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

}  // namespace

VarianceRanking top_variant_attributes(const StandardizedView& view, const IdSet& ids, std::size_t k) {
  if (k == 0 || k > view.feature_count()) {
    throw Error(ErrorCode::InvalidArgument,
                "k must lie in [1, " + std::to_string(view.feature_count()) + "]", std::to_string(k));
  }
  const auto rows = view.rows_of(ids);
  return rank_rows(view, rows, k);
}

double quantile_inclusive(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyIdSet, "quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

FiveNumberSummary five_number_summary(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyIdSet, "summary of an empty sample");
  std::sort(values.begin(), values.end());
  FiveNumberSummary s;
  s.min = values.front();
  s.q1 = quantile_inclusive(values, 0.25);
  s.median = quantile_inclusive(values, 0.5);
  s.q3 = quantile_inclusive(values, 0.75);
  s.max = values.back();
  // Interpolation may round a hair outside its neighbours; keep the order.
  s.q1 = std::clamp(s.q1, s.min, s.max);
  s.median = std::clamp(s.median, s.q1, s.max);
  s.q3 = std::clamp(s.q3, s.median, s.max);
  return s;
}

Histogram normalized_histogram(std::span<const double> values, std::size_t bins) {
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "histogram needs at least two bins");
  if (values.empty()) throw Error(ErrorCode::EmptyIdSet, "histogram of an empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  h.edges.back() = hi;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
    b = std::min(b, bins - 1);
    // Resolve floating disagreement with the published edges.
    while (b > 0 && v < h.edges[b]) --b;
    while (b + 1 < bins && v >= h.edges[b + 1]) ++b;
    ++counts[b];
  }
  h.density.resize(bins);
  const double total = static_cast<double>(values.size());
  for (std::size_t b = 0; b < bins; ++b) h.density[b] = static_cast<double>(counts[b]) / total;
  return h;
}

DistributionSummary distribution_summary(const StandardizedView& view, const IdSet& ids,
                                         std::string_view attribute, std::size_t bins) {
  const std::size_t j = view.attribute_index(attribute);
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "violin needs at least two bins");
  const auto rows = view.rows_of(ids);
  DistributionSummary out;
  out.attribute = std::string(attribute);
  out.whisker = five_number_summary(raw_column(view, rows, j));
  out.violin = normalized_histogram(raw_column(view, view.train_rows(), j), bins);
  return out;
}

VarianceBars variance_bars(const StandardizedView& view, const ObjectiveFunction& of,
                           const Conflict& conflict, std::size_t k) {
  require_current(of, conflict);
  const IdSet& left = of.objectives[conflict.left].ids;
  const IdSet& right = of.objectives[conflict.right].ids;
  const auto union_rows = view.rows_of(set_union(left, right));
  const auto left_rows = view.rows_of(left);
  const auto right_rows = view.rows_of(right);
  const auto conflict_rows = view.rows_of(conflict.conflicted_ids);

  VarianceBars out;
  for (const auto& ranked : rank_rows(view, union_rows, k)) {
    out.bars.push_back({ranked.attribute,
                        population_variance(z_column(view, left_rows, ranked.index)),
                        population_variance(z_column(view, right_rows, ranked.index)),
                        population_variance(z_column(view, conflict_rows, ranked.index))});
  }
  return out;
}

ConflictBox conflict_box(const StandardizedView& view, const ObjectiveFunction& of,
                         const Conflict& conflict, std::size_t box_attributes,
                         std::size_t bar_attributes, std::size_t bins) {
  ConflictBox box;
  box.variance = variance_bars(view, of, conflict, bar_attributes);
  const IdSet& left = of.objectives[conflict.left].ids;
  const IdSet& right = of.objectives[conflict.right].ids;
  const auto left_rows = view.rows_of(left);
  const auto right_rows = view.rows_of(right);
  const auto conflict_rows = view.rows_of(conflict.conflicted_ids);
  for (const auto& ranked : rank_rows(view, view.rows_of(set_union(left, right)), box_attributes)) {
    box.attributes.push_back({ranked.attribute,
                              normalized_histogram(raw_column(view, view.train_rows(), ranked.index), bins),
                              five_number_summary(raw_column(view, left_rows, ranked.index)),
                              five_number_summary(raw_column(view, right_rows, ranked.index)),
                              five_number_summary(raw_column(view, conflict_rows, ranked.index))});
  }
  return box;
}

std::vector<FeaturePlot> feature_plots(const StandardizedView& view, const IdSet& ids, std::size_t k) {
  // An empty highlight set still yields the background series.
  const auto rows = ids.empty() ? std::vector<std::size_t>{} : view.rows_of(ids);
  std::vector<FeaturePlot> plots;
  for (const auto& ranked : rank_rows(view, rows, k)) {
    FeaturePlot plot{ranked.attribute, {}};
    plot.points.reserve(view.train_rows().size());
    for (std::size_t r : view.train_rows()) {
      plot.points.push_back({view.id(r), view.raw(r, ranked.index), view.label(r),
                             ids.contains(view.id(r))});
    }
    plots.push_back(std::move(plot));
  }
  return plots;
}

nlohmann::json to_json(const FiveNumberSummary& s) {
  return {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

nlohmann::json to_json(const Histogram& h) { return {{"edges", h.edges}, {"density", h.density}}; }

nlohmann::json to_json(const DistributionSummary& d) {
  return {{"attribute", d.attribute}, {"whisker", to_json(d.whisker)}, {"violin", to_json(d.violin)}};
}

nlohmann::json to_json(const VarianceRanking& r) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : r) out.push_back({{"attribute", a.attribute}, {"variance", a.variance}});
  return out;
}

nlohmann::json to_json(const VarianceBars& bars) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : bars.bars) {
    out.push_back({{"attribute", b.attribute},
                   {"left", b.left},
                   {"right", b.right},
                   {"conflicted", b.conflicted}});
  }
  return out;
}

nlohmann::json to_json(const ConflictBox& box) {
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : box.attributes) {
    attrs.push_back({{"attribute", a.attribute},
                     {"violin", to_json(a.violin)},
                     {"whisker_left", to_json(a.left)},
                     {"whisker_right", to_json(a.right)},
                     {"whisker_conflicted", to_json(a.conflicted)}});
  }
  return {{"attributes", attrs}, {"variance_bars", to_json(box.variance)}};
}

nlohmann::json to_json(const std::vector<FeaturePlot>& plots) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : plots) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& pt : p.points) {
      points.push_back({{"id", pt.id}, {"x", pt.x}, {"label", pt.label}, {"highlighted", pt.highlighted}});
    }
    out.push_back({{"attribute", p.attribute}, {"points", std::move(points)}});
  }
  return out;
}

}  // namespace cactus
