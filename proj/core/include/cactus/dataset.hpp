#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cactus {

using RowId = std::string;
/// Ordered set of row identifiers. Ordering is lexicographic, which is also
/// the canonical order used in serialized documents and export files.
using IdSet = std::set<RowId, std::less<>>;

struct DataRow {
  RowId id;
  std::vector<double> features;
  std::string label;

  bool operator==(const DataRow&) const = default;
};

/// Tabular training/validation universe. Immutable once constructed; the
/// constructor enforces unique ids, consistent arity and finite features.
class Dataset {
 public:
  Dataset(std::string name, std::vector<std::string> feature_names, std::vector<DataRow> rows,
          std::string label_name = "label");

  const std::string& name() const noexcept { return name_; }
  const std::string& label_name() const noexcept { return label_name_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  /// Distinct labels, sorted ascending. This order is the class order used by
  /// every learner and by argmax tie-breaking.
  const std::vector<std::string>& label_domain() const noexcept { return label_domain_; }

  std::span<const DataRow> rows() const noexcept { return rows_; }
  const DataRow& row(std::size_t index) const { return rows_.at(index); }
  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws UnknownId when absent.
  std::size_t index_of(std::string_view id) const;
  std::optional<std::size_t> feature_index(std::string_view feature) const;
  std::optional<std::size_t> label_index(std::string_view label) const;
  /// Class index (into label_domain) of the row at `row_index`.
  std::size_t label_code(std::size_t row_index) const { return label_codes_.at(row_index); }

  /// Row indices for a set of ids, in id order. Throws UnknownId.
  std::vector<std::size_t> indices_of(const IdSet& ids) const;

 private:
  std::string name_;
  std::string label_name_;
  std::vector<std::string> feature_names_;
  std::vector<DataRow> rows_;
  std::vector<std::string> label_domain_;
  std::vector<std::size_t> label_codes_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parses a UTF-8 CSV document with an `id` column, a `label` column and at
/// least one numeric feature column. Quoted fields (RFC 4180) are accepted.
Dataset load_dataset(std::istream& csv, std::string name);
Dataset load_dataset(std::string_view csv, std::string name);
Dataset load_dataset_file(const std::filesystem::path& path);

struct DataSplit {
  IdSet train_ids;
  IdSet validation_ids;
  std::uint64_t seed = 0;

  bool operator==(const DataSplit&) const = default;
};

/// Stratified random split. The validation set has round(fraction * N) rows
/// (at least one), allocated across labels by largest remainder while keeping
/// at least one training row per label.
DataSplit make_split(const Dataset& ds, double validation_fraction, std::uint64_t seed);

}  // namespace cactus
