#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cactus/objective.hpp"

namespace cactus {

/// Conflict matrix. Two objectives can conflict when their assertions about
/// the same rows contradict each other:
///
///   candidate  x candidate   labels differ
///   candidate  x similarity  similarity has an expected label and it differs
///   similarity x similarity  both have expected labels and they differ
///   ignore     x candidate | similarity | critical
///
/// Every other pairing, including anything against a metric objective and
/// critical against candidate or similarity, is never a conflict. Symmetric.
bool conflict_eligible(ObjectiveKind kind_a, const std::optional<std::string>& label_a,
                       ObjectiveKind kind_b, const std::optional<std::string>& label_b);
bool conflict_eligible(const ObjectiveSpec& a, const ObjectiveSpec& b);

struct Conflict {
  std::size_t left = 0;   // objective index, left < right
  std::size_t right = 0;
  IdSet conflicted_ids;   // ids(left) ∩ ids(right), nonempty
  std::size_t severity = 0;

  bool operator==(const Conflict&) const = default;
};

using ObjectivePair = std::pair<std::size_t, std::size_t>;

struct ConflictReport {
  std::string function_id;
  /// Descending severity, ties by (left, right).
  std::vector<Conflict> conflicts;
  /// Objective pair -> position in `conflicts`.
  std::map<ObjectivePair, std::size_t> pair_index;

  const Conflict* find(std::size_t left, std::size_t right) const;
  bool empty() const noexcept { return conflicts.empty(); }
};

ConflictReport detect_conflicts(const ObjectiveFunction& of);

/// Stable descending-severity order with (left, right) tie-break.
std::vector<Conflict> rank_conflicts(const ConflictReport& report);

enum class ResolutionAction { MoveToLeft, MoveToRight, RemoveFromBoth, Export };

std::string_view to_string(ResolutionAction action) noexcept;
/// Accepts move_to_left, move_to_right, remove_from_both, export.
ResolutionAction parse_resolution_action(std::string_view name);

struct Resolution {
  ResolutionAction action = ResolutionAction::RemoveFromBoth;
  std::filesystem::path destination;  // Export only

  static Resolution move_to_left() { return {ResolutionAction::MoveToLeft, {}}; }
  static Resolution move_to_right() { return {ResolutionAction::MoveToRight, {}}; }
  static Resolution remove_from_both() { return {ResolutionAction::RemoveFromBoth, {}}; }
  static Resolution export_to(std::filesystem::path path) {
    return {ResolutionAction::Export, std::move(path)};
  }
};

/// Throws StaleConflict unless `conflict` is exactly what detection would
/// report for its pair on `of` today.
void require_current(const ObjectiveFunction& of, const Conflict& conflict);

/// Returns a new function version. MoveToLeft keeps the conflicted rows in the
/// left objective and removes them from the right one; MoveToRight mirrors
/// it; RemoveFromBoth strips them from both. Instance-set objectives left with
/// no ids are dropped. Export writes the id file and returns `of` unchanged.
/// Throws StaleConflict, IoError.
ObjectiveFunction resolve_conflict(const ObjectiveFunction& of, const Conflict& conflict,
                                   const Resolution& resolution);

/// Export file body: a `# conflict <left> x <right>` header line followed by
/// the sorted conflicted ids, one per line.
std::string format_conflict_export(const ObjectiveFunction& of, const Conflict& conflict);

/// Content address of a conflict: FNV-1a over the pair, both objective keys
/// and the sorted ids, as 16 lowercase hex digits.
std::string conflict_hash(const ObjectiveFunction& of, const Conflict& conflict);

nlohmann::json to_json(const ObjectiveFunction& of, const Conflict& conflict);

}  // namespace cactus
