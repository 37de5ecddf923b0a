#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cactus/conflict.hpp"
#include "cactus/dataset.hpp"
#include "cactus/objective.hpp"

namespace cactus {

/// Dataset features z-scored with train-split mean and population standard
/// deviation. Attributes that are constant on the train split map to zero.
/// Keeps the raw values for display statistics.
class StandardizedView {
 public:
  StandardizedView(const Dataset& ds, const DataSplit& split);

  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }
  std::size_t row_count() const noexcept { return ids_.size(); }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& stddevs() const noexcept { return stddevs_; }

  double z(std::size_t row, std::size_t attribute) const { return z_[row * feature_count() + attribute]; }
  double raw(std::size_t row, std::size_t attribute) const {
    return raw_[row * feature_count() + attribute];
  }
  const std::string& id(std::size_t row) const { return ids_[row]; }
  const std::string& label(std::size_t row) const { return labels_[row]; }
  const std::vector<std::size_t>& train_rows() const noexcept { return train_rows_; }

  /// Throws UnknownAttribute.
  std::size_t attribute_index(std::string_view name) const;
  /// Throws EmptyIdSet or UnknownId.
  std::vector<std::size_t> rows_of(const IdSet& ids) const;

 private:
  std::vector<std::string> feature_names_;
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::vector<double> raw_;
  std::vector<double> z_;
  std::vector<double> means_;
  std::vector<double> stddevs_;
  std::vector<std::size_t> train_rows_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

inline StandardizedView standardize(const Dataset& ds, const DataSplit& split) {
  return StandardizedView(ds, split);
}

/// Population variance (two-pass). Zero for fewer than two values.
double population_variance(std::span<const double> values);

struct AttributeVariance {
  std::string attribute;
  std::size_t index = 0;
  double variance = 0.0;
};
using VarianceRanking = std::vector<AttributeVariance>;

/// Attributes ordered by variance of their z-scores over `ids`, descending,
/// ties by attribute index; truncated to k. Throws EmptyIdSet, UnknownId,
/// InvalidArgument (k out of range).
VarianceRanking top_variant_attributes(const StandardizedView& view, const IdSet& ids, std::size_t k);

struct FiveNumberSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Linear-interpolation quantile on sorted data: position p * (n - 1).
double quantile_inclusive(std::span<const double> sorted, double p);
FiveNumberSummary five_number_summary(std::vector<double> values);

/// Equal-width histogram; bins are closed-open except the last, which is
/// closed. `density` sums to 1.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> density;
};
Histogram normalized_histogram(std::span<const double> values, std::size_t bins);

struct DistributionSummary {
  std::string attribute;
  FiveNumberSummary whisker;  // raw values of the id set
  Histogram violin;           // raw values of the whole train split
};

inline constexpr std::size_t kDefaultViolinBins = 20;

/// Throws UnknownAttribute, EmptyIdSet, UnknownId, InvalidArgument (bins < 2).
DistributionSummary distribution_summary(const StandardizedView& view, const IdSet& ids,
                                         std::string_view attribute,
                                         std::size_t bins = kDefaultViolinBins);

struct VarianceBar {
  std::string attribute;
  double left = 0.0;        // variance over the left objective's ids
  double right = 0.0;       // variance over the right objective's ids
  double conflicted = 0.0;  // variance over the conflicted ids
};

struct VarianceBars {
  std::vector<VarianceBar> bars;
};

/// Attributes are the top-k by z-score variance over the union of both
/// objectives' ids; each bar reports z-score variances. Throws StaleConflict.
VarianceBars variance_bars(const StandardizedView& view, const ObjectiveFunction& of,
                           const Conflict& conflict, std::size_t k = 3);

/// Data behind one conflict row: violin + whiskers for the most variant
/// attributes, plus variance bars.
struct ConflictBox {
  struct Attribute {
    std::string attribute;
    Histogram violin;
    FiveNumberSummary left;
    FiveNumberSummary right;
    FiveNumberSummary conflicted;
  };
  std::vector<Attribute> attributes;
  VarianceBars variance;
};

ConflictBox conflict_box(const StandardizedView& view, const ObjectiveFunction& of,
                         const Conflict& conflict, std::size_t box_attributes = 4,
                         std::size_t bar_attributes = 3, std::size_t bins = kDefaultViolinBins);

/// Scatter series of raw attribute value against class label over the train
/// split, for the k attributes most variant on `ids`; rows in `ids` are
/// flagged.
struct FeaturePlot {
  struct Point {
    std::string id;
    double x = 0.0;
    std::string label;
    bool highlighted = false;
  };
  std::string attribute;
  std::vector<Point> points;
};

std::vector<FeaturePlot> feature_plots(const StandardizedView& view, const IdSet& ids, std::size_t k = 4);

nlohmann::json to_json(const FiveNumberSummary& s);
nlohmann::json to_json(const Histogram& h);
nlohmann::json to_json(const DistributionSummary& d);
nlohmann::json to_json(const VarianceRanking& r);
nlohmann::json to_json(const VarianceBars& bars);
nlohmann::json to_json(const ConflictBox& box);
nlohmann::json to_json(const std::vector<FeaturePlot>& plots);

}  // namespace cactus
