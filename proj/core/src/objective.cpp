#include "cactus/objective.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "cactus/error.hpp"

namespace cactus {

using nlohmann::json;

std::string_view to_string(ObjectiveKind kind) noexcept {
  switch (kind) {
    case ObjectiveKind::Candidate: return "candidate";
    case ObjectiveKind::Similarity: return "similarity";
    case ObjectiveKind::Ignore: return "ignore";
    case ObjectiveKind::Critical: return "critical";
    case ObjectiveKind::TrainAccuracy: return "train_accuracy";
    case ObjectiveKind::ValidationAccuracy: return "validation_accuracy";
    case ObjectiveKind::F1Macro: return "f1_macro";
    case ObjectiveKind::PrecisionMacro: return "precision_macro";
  }
  return "unknown";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  for (ObjectiveKind kind : kAllObjectiveKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::UnknownKind, "unknown objective kind '" + std::string(name) + "'",
              std::string(name));
}

std::string objective_key(ObjectiveKind kind, const std::optional<std::string>& label) {
  std::string key(to_string(kind));
  if (label) key += ":" + *label;
  return key;
}

std::string objective_key(const ObjectiveSpec& spec) { return objective_key(spec.kind, spec.label); }

double ObjectiveFunction::total_weight() const noexcept {
  double total = 0.0;
  for (const auto& o : objectives) total += o.weight;
  return total;
}

std::optional<std::size_t> ObjectiveFunction::find(std::string_view key) const {
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (objective_key(objectives[i]) == key) return i;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what, path);
}

std::uint64_t read_unsigned(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  schema_error(path, "expected a non-negative integer");
}

ObjectiveSpec read_objective(const json& node, const std::string& path) {
  if (!node.is_object()) schema_error(path, "expected an object");

  ObjectiveSpec spec;
  auto kind_it = node.find("kind");
  if (kind_it == node.end() || !kind_it->is_string()) schema_error(path + ".kind", "expected a string");
  spec.kind = parse_objective_kind(kind_it->get<std::string>());

  auto weight_it = node.find("weight");
  if (weight_it == node.end() || !weight_it->is_number()) {
    schema_error(path + ".weight", "expected a number");
  }
  spec.weight = weight_it->get<double>();
  if (!(spec.weight >= 0.0 && spec.weight <= 1.0)) {
    throw Error(ErrorCode::WeightOutOfRange, path + ".weight must lie in [0, 1]", path + ".weight");
  }

  if (auto it = node.find("label"); it != node.end() && !it->is_null()) {
    if (!it->is_string()) schema_error(path + ".label", "expected a string or null");
    spec.label = it->get<std::string>();
  }

  if (auto it = node.find("ids"); it != node.end() && !it->is_null()) {
    if (!it->is_array()) schema_error(path + ".ids", "expected an array of strings");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& id = (*it)[k];
      if (!id.is_string()) schema_error(path + ".ids[" + std::to_string(k) + "]", "expected a string");
      spec.ids.insert(id.get<std::string>());
    }
  }

  const std::string kind_name(to_string(spec.kind));
  switch (spec.kind) {
    case ObjectiveKind::Candidate:
      if (!spec.label) {
        throw Error(ErrorCode::LabelRequired, path + ": candidate objectives need a label", kind_name);
      }
      [[fallthrough]];
    case ObjectiveKind::Similarity:
      if (spec.ids.empty()) schema_error(path + ".ids", kind_name + " needs at least one id");
      break;
    case ObjectiveKind::Ignore:
    case ObjectiveKind::Critical:
      if (spec.ids.empty()) schema_error(path + ".ids", kind_name + " needs at least one id");
      if (spec.label) schema_error(path + ".label", kind_name + " does not take a label");
      break;
    default:
      if (!spec.ids.empty()) schema_error(path + ".ids", kind_name + " does not take ids");
      if (spec.label) schema_error(path + ".label", kind_name + " does not take a label");
      break;
  }
  return spec;
}

}  // namespace

ObjectiveFunction objective_function_from_json(const json& doc) {
  if (!doc.is_object()) schema_error("$", "expected an object");
  ObjectiveFunction of;
  if (auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string()) schema_error("$.id", "expected a string");
    of.id = it->get<std::string>();
  }
  if (auto it = doc.find("dataset"); it != doc.end()) {
    if (!it->is_string()) schema_error("$.dataset", "expected a string");
    of.dataset_ref = it->get<std::string>();
  }
  if (auto it = doc.find("seed"); it != doc.end()) of.seed = read_unsigned(*it, "$.seed");
  if (auto it = doc.find("n_samples"); it != doc.end()) {
    const auto n = read_unsigned(*it, "$.n_samples");
    if (n == 0 || n > 1'000'000) schema_error("$.n_samples", "expected an integer in [1, 1000000]");
    of.n_samples = static_cast<std::uint32_t>(n);
  }
  auto objectives = doc.find("objectives");
  if (objectives == doc.end() || !objectives->is_array()) {
    schema_error("$.objectives", "expected an array");
  }
  of.objectives.reserve(objectives->size());
  for (std::size_t i = 0; i < objectives->size(); ++i) {
    of.objectives.push_back(
        read_objective((*objectives)[i], "$.objectives[" + std::to_string(i) + "]"));
  }
  return of;
}

ObjectiveFunction parse_objective_function(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    schema_error("$", std::string("malformed JSON: ") + e.what());
  }
  return objective_function_from_json(doc);
}

json to_json(const ObjectiveFunction& of) {
  json objectives = json::array();
  for (const auto& o : of.objectives) {
    json entry = json::object();
    entry["kind"] = std::string(to_string(o.kind));
    entry["label"] = o.label ? json(*o.label) : json(nullptr);
    entry["ids"] = json(std::vector<std::string>(o.ids.begin(), o.ids.end()));
    entry["weight"] = o.weight;
    objectives.push_back(std::move(entry));
  }
  json doc = json::object();
  doc["id"] = of.id;
  doc["dataset"] = of.dataset_ref;
  doc["seed"] = of.seed;
  doc["n_samples"] = of.n_samples;
  doc["objectives"] = std::move(objectives);
  return doc;
}

std::string serialize_objective_function(const ObjectiveFunction& of) {
  // ordered_json keeps the canonical key order of the schema.
  nlohmann::ordered_json doc;
  doc["id"] = of.id;
  doc["dataset"] = of.dataset_ref;
  doc["seed"] = of.seed;
  doc["n_samples"] = of.n_samples;
  doc["objectives"] = nlohmann::ordered_json::array();
  for (const auto& o : of.objectives) {
    nlohmann::ordered_json entry;
    entry["kind"] = std::string(to_string(o.kind));
    entry["label"] = o.label ? nlohmann::ordered_json(*o.label) : nlohmann::ordered_json(nullptr);
    entry["ids"] = std::vector<std::string>(o.ids.begin(), o.ids.end());
    entry["weight"] = o.weight;
    doc["objectives"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

bool ValidationReport::has_error(std::string_view code) const {
  return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.code == code; });
}

bool ValidationReport::has_warning(std::string_view code) const {
  return std::any_of(warnings.begin(), warnings.end(), [&](const auto& w) { return w.code == code; });
}

json to_json(const ValidationReport& report) {
  auto issues = [](const std::vector<ValidationIssue>& list) {
    json out = json::array();
    for (const auto& i : list) {
      out.push_back({{"code", i.code}, {"message", i.message}, {"context", i.context}});
    }
    return out;
  };
  return {{"errors", issues(report.errors)}, {"warnings", issues(report.warnings)}};
}

namespace {

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 10) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i > 0) out += ",";
    out += ids[i];
  }
  if (ids.size() > limit) out += ",...";
  return out;
}

}  // namespace

ValidationReport validate_function(const ObjectiveFunction& of, const Dataset& ds,
                                   const DataSplit& split) {
  ValidationReport report;
  std::map<std::string, std::size_t> first_by_key;

  for (std::size_t i = 0; i < of.objectives.size(); ++i) {
    const ObjectiveSpec& o = of.objectives[i];
    const std::string where = "objectives[" + std::to_string(i) + "] " + objective_key(o);

    if (auto [it, inserted] = first_by_key.emplace(objective_key(o), i); !inserted) {
      report.errors.push_back({"DuplicateObjective",
                               where + " repeats objectives[" + std::to_string(it->second) + "]",
                               where});
    }

    std::vector<std::string> unknown;
    std::vector<std::string> outside_train;
    for (const auto& id : o.ids) {
      if (!ds.find(id)) {
        unknown.push_back(id);
      } else if (!split.train_ids.contains(id)) {
        outside_train.push_back(id);
      }
    }
    if (!unknown.empty()) {
      report.errors.push_back({"UnknownId",
                               where + " references " + std::to_string(unknown.size()) +
                                   " id(s) absent from the dataset",
                               join_ids(unknown)});
    }
    if (!outside_train.empty()) {
      report.errors.push_back({"IdNotInTrainSplit",
                               where + " references " + std::to_string(outside_train.size()) +
                                   " id(s) outside the train split",
                               join_ids(outside_train)});
    }

    const bool labelled = o.kind == ObjectiveKind::Candidate || o.kind == ObjectiveKind::Similarity;
    if (labelled && o.label && !ds.label_index(*o.label)) {
      report.errors.push_back(
          {"LabelNotInDomain", where + " label '" + *o.label + "' is not a dataset label", where});
    }

    if (o.kind == ObjectiveKind::Candidate && o.label) {
      std::vector<std::string> contradicting;
      for (const auto& id : o.ids) {
        if (auto row = ds.find(id); row && ds.row(*row).label != *o.label) {
          contradicting.push_back(id);
        }
      }
      if (!contradicting.empty()) {
        report.warnings.push_back({"LabelContradiction",
                                   where + ": " + std::to_string(contradicting.size()) +
                                       " row(s) have a ground-truth label other than '" +
                                       *o.label + "'",
                                   join_ids(contradicting)});
      }
    }
  }

  if (of.total_weight() <= 0.0) {
    report.warnings.push_back(
        {"AllZeroWeights", "all objective weights are zero; training will be refused", of.id});
  }
  if (!of.dataset_ref.empty() && of.dataset_ref != ds.name()) {
    report.warnings.push_back({"DatasetMismatch",
                               "function refers to dataset '" + of.dataset_ref +
                                   "' but was validated against '" + ds.name() + "'",
                               of.dataset_ref});
  }
  return report;
}

void require_valid(const ValidationReport& report) {
  if (report.ok()) return;
  const auto& first = report.errors.front();
  throw Error(ErrorCode::ValidationFailed, first.code + ": " + first.message, first.context);
}

}  // namespace cactus
