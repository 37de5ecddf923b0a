#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cactus/dataset.hpp"
#include "cactus/model_zoo.hpp"
#include "cactus/objective.hpp"
#include "cactus/recommender.hpp"
#include "cactus/scorer.hpp"

namespace cactus {

struct SelectionSummary {
  ModelConfig best_config;
  double aggregate = 0.0;
  double validation_accuracy = 0.0;
  std::vector<ObjectiveScore> per_objective;

  bool operator==(const SelectionSummary&) const = default;
};

SelectionSummary summarize(const SelectionResult& result);

struct GalleryEntry {
  std::size_t iteration = 0;
  ObjectiveFunction function;
  SelectionSummary summary;
  std::int64_t timestamp_ms = 0;
  /// Validation accuracy strictly above the previous entry's.
  bool improved = false;

  bool operator==(const GalleryEntry&) const = default;
};

inline constexpr int kSessionFileVersion = 1;

/// Iteration history of one analysis. The gallery only ever grows; revert
/// copies a snapshot back into the current function without truncating.
class Session {
 public:
  Session() = default;
  Session(std::string id, std::string dataset_ref, DataSplit split, double validation_fraction,
          std::uint64_t recommender_seed);

  const std::string& id() const noexcept { return id_; }
  const std::string& dataset_ref() const noexcept { return dataset_ref_; }
  const DataSplit& split() const noexcept { return split_; }
  double validation_fraction() const noexcept { return validation_fraction_; }
  std::uint64_t recommender_seed() const noexcept { return recommender_seed_; }
  const std::vector<GalleryEntry>& gallery() const noexcept { return gallery_; }
  const ObjectiveFunction& current() const noexcept { return current_; }

  void set_current(ObjectiveFunction of) { current_ = std::move(of); }

  /// Appends a deep copy of `of` with the selection summary.
  const GalleryEntry& snapshot(const ObjectiveFunction& of, const SelectionResult& result);
  const GalleryEntry& snapshot(const ObjectiveFunction& of, const SelectionResult& result,
                               std::int64_t timestamp_ms);
  /// Throws IndexOutOfRange.
  const ObjectiveFunction& revert(std::size_t index);

  /// Gallery entries as recommender history.
  std::vector<IterationRecord> iteration_records() const;

  bool operator==(const Session&) const = default;

 private:
  friend Session session_from_json(const nlohmann::json& doc);

  std::string id_;
  std::string dataset_ref_;
  DataSplit split_;
  double validation_fraction_ = 0.2;
  std::uint64_t recommender_seed_ = 0;
  std::vector<GalleryEntry> gallery_;
  ObjectiveFunction current_;
};

inline GalleryEntry snapshot(Session& session, const ObjectiveFunction& of, const SelectionResult& result) {
  return session.snapshot(of, result);
}
inline ObjectiveFunction revert(Session& session, std::size_t index) { return session.revert(index); }

nlohmann::json to_json(const GalleryEntry& entry);
nlohmann::json to_json(const Session& session);
/// Throws CorruptSession on missing fields or an unsupported version.
Session session_from_json(const nlohmann::json& doc);

/// Single JSON document with a top-level "version". Throws IoError.
void persist_session(const Session& session, const std::filesystem::path& path);
/// Throws IoError, CorruptSession.
Session load_session(const std::filesystem::path& path);

}  // namespace cactus
