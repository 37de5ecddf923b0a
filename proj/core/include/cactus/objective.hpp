#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cactus/dataset.hpp"

namespace cactus {

enum class ObjectiveKind {
  Candidate,
  Similarity,
  Ignore,
  Critical,
  TrainAccuracy,
  ValidationAccuracy,
  F1Macro,
  PrecisionMacro,
};

inline constexpr ObjectiveKind kAllObjectiveKinds[] = {
    ObjectiveKind::Candidate,     ObjectiveKind::Similarity,         ObjectiveKind::Ignore,
    ObjectiveKind::Critical,      ObjectiveKind::TrainAccuracy,      ObjectiveKind::ValidationAccuracy,
    ObjectiveKind::F1Macro,       ObjectiveKind::PrecisionMacro,
};

/// Candidate, Similarity, Ignore and Critical carry row ids; the metric kinds
/// do not.
constexpr bool is_instance_set(ObjectiveKind kind) noexcept {
  return kind == ObjectiveKind::Candidate || kind == ObjectiveKind::Similarity ||
         kind == ObjectiveKind::Ignore || kind == ObjectiveKind::Critical;
}
constexpr bool is_metric(ObjectiveKind kind) noexcept { return !is_instance_set(kind); }

std::string_view to_string(ObjectiveKind kind) noexcept;
/// Throws UnknownKind.
ObjectiveKind parse_objective_kind(std::string_view name);

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::ValidationAccuracy;
  IdSet ids;
  std::optional<std::string> label;
  double weight = 0.0;

  bool operator==(const ObjectiveSpec&) const = default;
};

/// `kind` or `kind:label`; unique within a valid function and stable across
/// versions, so it is used to match objectives between iterations.
std::string objective_key(const ObjectiveSpec& spec);
std::string objective_key(ObjectiveKind kind, const std::optional<std::string>& label);

struct ObjectiveFunction {
  static constexpr std::uint32_t kDefaultSamples = 200;

  std::string id;
  std::string dataset_ref;
  std::vector<ObjectiveSpec> objectives;
  std::uint32_t n_samples = kDefaultSamples;
  std::uint64_t seed = 0;

  bool operator==(const ObjectiveFunction&) const = default;

  double total_weight() const noexcept;
  /// Index of the objective with the given key, if any.
  std::optional<std::size_t> find(std::string_view key) const;
};

/// Throws SchemaError, UnknownKind, WeightOutOfRange or LabelRequired.
ObjectiveFunction parse_objective_function(std::string_view json_text);
ObjectiveFunction objective_function_from_json(const nlohmann::json& doc);

/// Canonical document: fixed key order, ids sorted, two-space indentation and
/// a trailing newline. parse(serialize(f)) == f.
std::string serialize_objective_function(const ObjectiveFunction& of);
nlohmann::json to_json(const ObjectiveFunction& of);

struct ValidationIssue {
  std::string code;
  std::string message;
  std::string context;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const noexcept { return errors.empty(); }
  bool has_error(std::string_view code) const;
  bool has_warning(std::string_view code) const;
};

nlohmann::json to_json(const ValidationReport& report);

/// Structural checks against a dataset and split. Never throws for content
/// problems; they are reported.
ValidationReport validate_function(const ObjectiveFunction& of, const Dataset& ds,
                                   const DataSplit& split);

/// Throws ValidationFailed carrying the first error when the report has any.
void require_valid(const ValidationReport& report);

}  // namespace cactus
