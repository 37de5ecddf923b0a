#include "cactus/conflict.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "cactus/error.hpp"
#include "cactus/random.hpp"

namespace cactus {

namespace {

bool labels_differ(const std::optional<std::string>& a, const std::optional<std::string>& b) {
  return a && b && *a != *b;
}

bool eligible_ordered(ObjectiveKind a, const std::optional<std::string>& la, ObjectiveKind b,
                      const std::optional<std::string>& lb) {
  using K = ObjectiveKind;
  switch (a) {
    case K::Candidate:
      if (b == K::Candidate || b == K::Similarity) return labels_differ(la, lb);
      return false;
    case K::Similarity:
      if (b == K::Similarity) return labels_differ(la, lb);
      return false;
    case K::Ignore:
      return b == K::Candidate || b == K::Similarity || b == K::Critical;
    default:
      return false;
  }
}

IdSet intersect(const IdSet& a, const IdSet& b) {
  IdSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()),
                        std::less<>{});
  return out;
}

bool severity_order(const Conflict& a, const Conflict& b) {
  if (a.severity != b.severity) return a.severity > b.severity;
  return std::tie(a.left, a.right) < std::tie(b.left, b.right);
}

}  // namespace

bool conflict_eligible(ObjectiveKind kind_a, const std::optional<std::string>& label_a,
                       ObjectiveKind kind_b, const std::optional<std::string>& label_b) {
  return eligible_ordered(kind_a, label_a, kind_b, label_b) ||
         eligible_ordered(kind_b, label_b, kind_a, label_a);
}

bool conflict_eligible(const ObjectiveSpec& a, const ObjectiveSpec& b) {
  return conflict_eligible(a.kind, a.label, b.kind, b.label);
}

const Conflict* ConflictReport::find(std::size_t left, std::size_t right) const {
  auto it = pair_index.find({left, right});
  return it == pair_index.end() ? nullptr : &conflicts[it->second];
}

ConflictReport detect_conflicts(const ObjectiveFunction& of) {
  ConflictReport report;
  report.function_id = of.id;
  const auto& objs = of.objectives;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    for (std::size_t j = i + 1; j < objs.size(); ++j) {
      if (!conflict_eligible(objs[i], objs[j])) continue;
      IdSet shared = intersect(objs[i].ids, objs[j].ids);
      if (shared.empty()) continue;
      const std::size_t severity = shared.size();
      report.conflicts.push_back({i, j, std::move(shared), severity});
    }
  }
  std::stable_sort(report.conflicts.begin(), report.conflicts.end(), severity_order);
  for (std::size_t k = 0; k < report.conflicts.size(); ++k) {
    report.pair_index.emplace(ObjectivePair{report.conflicts[k].left, report.conflicts[k].right}, k);
  }
  return report;
}

std::vector<Conflict> rank_conflicts(const ConflictReport& report) {
  std::vector<Conflict> ranked = report.conflicts;
  std::stable_sort(ranked.begin(), ranked.end(), severity_order);
  return ranked;
}

std::string_view to_string(ResolutionAction action) noexcept {
  switch (action) {
    case ResolutionAction::MoveToLeft: return "move_to_left";
    case ResolutionAction::MoveToRight: return "move_to_right";
    case ResolutionAction::RemoveFromBoth: return "remove_from_both";
    case ResolutionAction::Export: return "export";
  }
  return "unknown";
}

ResolutionAction parse_resolution_action(std::string_view name) {
  for (auto action : {ResolutionAction::MoveToLeft, ResolutionAction::MoveToRight,
                      ResolutionAction::RemoveFromBoth, ResolutionAction::Export}) {
    if (to_string(action) == name) return action;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown resolution action '" + std::string(name) + "'",
              std::string(name));
}

void require_current(const ObjectiveFunction& of, const Conflict& conflict) {
  const auto& objs = of.objectives;
  const bool in_range = conflict.left < conflict.right && conflict.right < objs.size();
  if (!in_range || !conflict_eligible(objs[conflict.left], objs[conflict.right]) ||
      conflict.conflicted_ids.empty() ||
      intersect(objs[conflict.left].ids, objs[conflict.right].ids) != conflict.conflicted_ids) {
    throw Error(ErrorCode::StaleConflict,
                "conflict no longer matches the objective function; re-run detection",
                "(" + std::to_string(conflict.left) + "," + std::to_string(conflict.right) + ")");
  }
}

std::string format_conflict_export(const ObjectiveFunction& of, const Conflict& conflict) {
  require_current(of, conflict);
  std::string body = "# conflict " + objective_key(of.objectives[conflict.left]) + " x " +
                     objective_key(of.objectives[conflict.right]) + "\n";
  for (const auto& id : conflict.conflicted_ids) body += id + "\n";
  return body;
}

ObjectiveFunction resolve_conflict(const ObjectiveFunction& of, const Conflict& conflict,
                                   const Resolution& resolution) {
  require_current(of, conflict);

  if (resolution.action == ResolutionAction::Export) {
    const std::string body = format_conflict_export(of, conflict);
    std::ofstream out(resolution.destination, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::IoError, "cannot open export destination",
                  resolution.destination.string());
    }
    out << body;
    if (!out.flush()) {
      throw Error(ErrorCode::IoError, "failed writing export file", resolution.destination.string());
    }
    return of;
  }

  ObjectiveFunction next = of;
  auto strip = [&](std::size_t index) {
    IdSet& ids = next.objectives[index].ids;
    for (const auto& id : conflict.conflicted_ids) ids.erase(id);
  };
  switch (resolution.action) {
    case ResolutionAction::MoveToLeft: strip(conflict.right); break;
    case ResolutionAction::MoveToRight: strip(conflict.left); break;
    case ResolutionAction::RemoveFromBoth:
      strip(conflict.left);
      strip(conflict.right);
      break;
    case ResolutionAction::Export: break;
  }
  // Drop emptied instance-set objectives, higher index first.
  for (std::size_t index : {conflict.right, conflict.left}) {
    const auto& o = next.objectives[index];
    if (is_instance_set(o.kind) && o.ids.empty()) {
      next.objectives.erase(next.objectives.begin() + static_cast<std::ptrdiff_t>(index));
    }
  }
  return next;
}

std::string conflict_hash(const ObjectiveFunction& of, const Conflict& conflict) {
  std::string material = std::to_string(conflict.left) + "|" + std::to_string(conflict.right);
  if (conflict.right < of.objectives.size()) {
    material += "|" + objective_key(of.objectives[conflict.left]) + "|" +
                objective_key(of.objectives[conflict.right]);
  }
  std::uint64_t h = fnv1a(material);
  for (const auto& id : conflict.conflicted_ids) {
    h = fnv1a("\n", h);
    h = fnv1a(id, h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json to_json(const ObjectiveFunction& of, const Conflict& conflict) {
  nlohmann::json j;
  j["hash"] = conflict_hash(of, conflict);
  j["left"] = conflict.left;
  j["right"] = conflict.right;
  if (conflict.right < of.objectives.size()) {
    j["left_key"] = objective_key(of.objectives[conflict.left]);
    j["right_key"] = objective_key(of.objectives[conflict.right]);
  }
  j["severity"] = conflict.severity;
  j["conflicted_ids"] =
      std::vector<std::string>(conflict.conflicted_ids.begin(), conflict.conflicted_ids.end());
  return j;
}

}  // namespace cactus
