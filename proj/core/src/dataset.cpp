#include "cactus/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cactus/error.hpp"
#include "cactus/random.hpp"

namespace cactus {

Dataset::Dataset(std::string name, std::vector<std::string> feature_names,
                 std::vector<DataRow> rows, std::string label_name)
    : name_(std::move(name)),
      label_name_(std::move(label_name)),
      feature_names_(std::move(feature_names)),
      rows_(std::move(rows)) {
  if (rows_.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no rows", name_);
  if (feature_names_.empty()) {
    throw Error(ErrorCode::MissingColumn, "dataset needs at least one feature", "feature");
  }
  std::set<std::string, std::less<>> labels;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const DataRow& r = rows_[i];
    if (r.features.size() != feature_names_.size()) {
      throw Error(ErrorCode::MalformedRow,
                  "row '" + r.id + "' has " + std::to_string(r.features.size()) +
                      " features, expected " + std::to_string(feature_names_.size()),
                  r.id);
    }
    for (std::size_t j = 0; j < r.features.size(); ++j) {
      if (!std::isfinite(r.features[j])) {
        throw Error(ErrorCode::NonNumericFeature,
                    "row '" + r.id + "' has a non-finite value in '" + feature_names_[j] + "'",
                    r.id + "," + feature_names_[j]);
      }
    }
    if (!index_.emplace(r.id, i).second) {
      throw Error(ErrorCode::DuplicateId, "row id '" + r.id + "' appears more than once", r.id);
    }
    labels.insert(r.label);
  }
  label_domain_.assign(labels.begin(), labels.end());
  label_codes_.reserve(rows_.size());
  for (const DataRow& r : rows_) label_codes_.push_back(*label_index(r.label));
}

std::optional<std::size_t> Dataset::find(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Dataset::index_of(std::string_view id) const {
  auto found = find(id);
  if (!found) {
    throw Error(ErrorCode::UnknownId, "row id '" + std::string(id) + "' is not in the dataset",
                std::string(id));
  }
  return *found;
}

std::optional<std::size_t> Dataset::feature_index(std::string_view feature) const {
  auto it = std::find(feature_names_.begin(), feature_names_.end(), feature);
  if (it == feature_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - feature_names_.begin());
}

std::optional<std::size_t> Dataset::label_index(std::string_view label) const {
  auto it = std::lower_bound(label_domain_.begin(), label_domain_.end(), label);
  if (it == label_domain_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - label_domain_.begin());
}

std::vector<std::size_t> Dataset::indices_of(const IdSet& ids) const {
  std::vector<std::size_t> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(index_of(id));
  return out;
}

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Splits a CSV document into records. Handles quoted fields containing
// separators, doubled quotes and line breaks; accepts LF and CRLF endings.
std::vector<std::vector<Field>> split_records(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<Field>> records;
  std::vector<Field> record;
  Field field;
  bool in_quotes = false;
  bool any = false;
  auto end_field = [&] {
    if (!field.quoted) field.text = std::string(trim(field.text));
    record.push_back(std::move(field));
    field = Field{};
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record[0].text.empty() && !record[0].quoted;
    if (!blank) records.push_back(std::move(record));
    record.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.text.push_back(c);
      }
      continue;
    }
    any = true;
    if (c == '"' && trim(field.text).empty()) {
      field.text.clear();
      field.quoted = true;
      in_quotes = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      // dropped; the following '\n' terminates the record
    } else {
      field.text.push_back(c);
    }
  }
  if (in_quotes) throw Error(ErrorCode::MalformedRow, "unterminated quoted field", "eof");
  if (any || !record.empty() || !field.text.empty()) end_record();
  return records;
}

bool parse_number(std::string_view text, double& out) {
  if (text.starts_with('+')) text.remove_prefix(1);
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset load_dataset(std::string_view csv, std::string name) {
  auto records = split_records(csv);
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "CSV has no header", name);

  const auto& header = records.front();
  std::optional<std::size_t> id_col;
  std::optional<std::size_t> label_col;
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  std::set<std::string, std::less<>> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& h = header[c].text;
    if (!seen.insert(h).second) {
      throw Error(ErrorCode::MalformedRow, "duplicate header column '" + h + "'", "header");
    }
    if (h == "id") {
      id_col = c;
    } else if (h == "label") {
      label_col = c;
    } else {
      feature_cols.push_back(c);
      feature_names.push_back(h);
    }
  }
  if (!id_col) throw Error(ErrorCode::MissingColumn, "CSV header lacks an 'id' column", "id");
  if (!label_col) {
    throw Error(ErrorCode::MissingColumn, "CSV header lacks a 'label' column", "label");
  }
  if (feature_cols.empty()) {
    throw Error(ErrorCode::MissingColumn, "CSV header has no feature columns", "feature");
  }
  if (records.size() == 1) throw Error(ErrorCode::EmptyDataset, "CSV has no data rows", name);

  std::vector<DataRow> rows;
  rows.reserve(records.size() - 1);
  std::set<std::string, std::less<>> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string row_tag = rec.size() > *id_col && !rec[*id_col].text.empty()
                                    ? rec[*id_col].text
                                    : "#" + std::to_string(r);
    if (rec.size() > header.size()) {
      throw Error(ErrorCode::MalformedRow,
                  "row " + row_tag + " has more fields than the header", row_tag);
    }
    auto cell = [&](std::size_t col) -> const std::string* {
      if (col >= rec.size() || rec[col].text.empty()) return nullptr;
      return &rec[col].text;
    };
    const std::string* id = cell(*id_col);
    if (id == nullptr) throw Error(ErrorCode::MissingValue, "row has no id", row_tag + ",id");
    if (!ids.insert(*id).second) {
      throw Error(ErrorCode::DuplicateId, "row id '" + *id + "' appears more than once", *id);
    }
    const std::string* label = cell(*label_col);
    if (label == nullptr) {
      throw Error(ErrorCode::MissingValue, "row '" + *id + "' has no label", *id + ",label");
    }
    DataRow row{*id, {}, *label};
    row.features.reserve(feature_cols.size());
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const std::string* text = cell(feature_cols[f]);
      if (text == nullptr) {
        throw Error(ErrorCode::MissingValue,
                    "row '" + *id + "' has no value for '" + feature_names[f] + "'",
                    *id + "," + feature_names[f]);
      }
      double value = 0.0;
      if (!parse_number(*text, value)) {
        throw Error(ErrorCode::NonNumericFeature,
                    "row '" + *id + "' has non-numeric value '" + *text + "' for '" +
                        feature_names[f] + "'",
                    *id + "," + feature_names[f]);
      }
      row.features.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  return Dataset(std::move(name), std::move(feature_names), std::move(rows));
}

Dataset load_dataset(std::istream& csv, std::string name) {
  std::ostringstream buffer;
  buffer << csv.rdbuf();
  return load_dataset(std::string_view(buffer.str()), std::move(name));
}

Dataset load_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dataset file", path.string());
  return load_dataset(in, path.stem().string());
}

DataSplit make_split(const Dataset& ds, double validation_fraction, std::uint64_t seed) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw Error(ErrorCode::FractionOutOfRange, "validation fraction must lie in (0, 1)",
                std::to_string(validation_fraction));
  }
  const std::size_t n = ds.size();
  if (n < 2) throw Error(ErrorCode::TooFewRows, "need at least two rows to split");

  const std::size_t n_labels = ds.label_domain().size();
  std::vector<std::vector<std::size_t>> by_label(n_labels);
  for (std::size_t i = 0; i < n; ++i) by_label[ds.label_code(i)].push_back(i);

  const std::size_t capacity = n - n_labels;
  if (capacity == 0) {
    throw Error(ErrorCode::TooFewRows, "every label has a single row; nothing can be held out");
  }
  auto target = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(n)));
  target = std::clamp<std::size_t>(target, 1, capacity);

  // Largest-remainder allocation of the validation budget across labels.
  std::vector<std::size_t> take(n_labels);
  std::vector<double> remainder(n_labels);
  std::size_t allocated = 0;
  for (std::size_t l = 0; l < n_labels; ++l) {
    const double quota = validation_fraction * static_cast<double>(by_label[l].size());
    const auto floor_quota = static_cast<std::size_t>(std::floor(quota));
    take[l] = std::min(floor_quota, by_label[l].size() - 1);
    remainder[l] = quota - std::floor(quota);
    allocated += take[l];
  }
  std::vector<std::size_t> order(n_labels);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  while (allocated < target) {
    bool progressed = false;
    for (std::size_t l : order) {
      if (allocated == target) break;
      if (take[l] + 1 < by_label[l].size()) {
        ++take[l];
        ++allocated;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  while (allocated > target) {
    // Only reachable when rounding put the target below the floor sum.
    for (auto it = order.rbegin(); it != order.rend() && allocated > target; ++it) {
      if (take[*it] > 0) {
        --take[*it];
        --allocated;
      }
    }
  }

  DataSplit split;
  split.seed = seed;
  Rng rng(mix_seed(seed));
  for (std::size_t l = 0; l < n_labels; ++l) {
    auto& members = by_label[l];
    rng.shuffle(members.begin(), members.end());
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto& id = ds.row(members[k]).id;
      if (k < take[l]) {
        split.validation_ids.insert(id);
      } else {
        split.train_ids.insert(id);
      }
    }
  }
  return split;
}

}  // namespace cactus
