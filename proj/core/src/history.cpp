#include "cactus/history.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cactus/error.hpp"

namespace cactus {

using nlohmann::json;

SelectionSummary summarize(const SelectionResult& result) {
  const ModelEvaluation& best = result.best();
  return {best.config, best.aggregate, best.validation_accuracy, best.per_objective};
}

Session::Session(std::string id, std::string dataset_ref, DataSplit split, double validation_fraction,
                 std::uint64_t recommender_seed)
    : id_(std::move(id)),
      dataset_ref_(std::move(dataset_ref)),
      split_(std::move(split)),
      validation_fraction_(validation_fraction),
      recommender_seed_(recommender_seed) {}

const GalleryEntry& Session::snapshot(const ObjectiveFunction& of, const SelectionResult& result) {
  const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now().time_since_epoch());
  return snapshot(of, result, now.count());
}

const GalleryEntry& Session::snapshot(const ObjectiveFunction& of, const SelectionResult& result,
                                      std::int64_t timestamp_ms) {
  GalleryEntry entry;
  entry.iteration = gallery_.size();
  entry.function = of;
  entry.summary = summarize(result);
  entry.timestamp_ms = timestamp_ms;
  entry.improved =
      !gallery_.empty() && entry.summary.validation_accuracy > gallery_.back().summary.validation_accuracy;
  gallery_.push_back(std::move(entry));
  return gallery_.back();
}

const ObjectiveFunction& Session::revert(std::size_t index) {
  if (index >= gallery_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "gallery has " + std::to_string(gallery_.size()) + " entries",
                std::to_string(index));
  }
  current_ = gallery_[index].function;
  return current_;
}

std::vector<IterationRecord> Session::iteration_records() const {
  std::vector<IterationRecord> records;
  records.reserve(gallery_.size());
  for (const auto& entry : gallery_) {
    IterationRecord r;
    r.iteration = entry.iteration;
    r.overall_accuracy = entry.summary.validation_accuracy;
    for (const auto& o : entry.function.objectives) r.weights[objective_key(o)] = o.weight;
    for (const auto& s : entry.summary.per_objective) {
      if (s.objective < entry.function.objectives.size()) {
        r.scores[objective_key(entry.function.objectives[s.objective])] = s.score;
      }
    }
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

json scores_json(const std::vector<ObjectiveScore>& scores) {
  json out = json::array();
  for (const auto& s : scores) {
    out.push_back({{"objective", s.objective}, {"score", s.score}, {"support", s.support}});
  }
  return out;
}

std::vector<ObjectiveScore> scores_from_json(const json& doc) {
  std::vector<ObjectiveScore> out;
  for (const auto& s : doc) {
    out.push_back({s.at("objective").get<std::size_t>(), s.at("score").get<double>(),
                   s.at("support").get<std::size_t>()});
  }
  return out;
}

json split_json(const DataSplit& split) {
  return {{"seed", split.seed},
          {"train_ids", std::vector<std::string>(split.train_ids.begin(), split.train_ids.end())},
          {"validation_ids",
           std::vector<std::string>(split.validation_ids.begin(), split.validation_ids.end())}};
}

DataSplit split_from_json(const json& doc) {
  DataSplit split;
  split.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& id : doc.at("train_ids")) split.train_ids.insert(id.get<std::string>());
  for (const auto& id : doc.at("validation_ids")) split.validation_ids.insert(id.get<std::string>());
  return split;
}

}  // namespace

json to_json(const GalleryEntry& entry) {
  return {{"iteration", entry.iteration},
          {"function", to_json(entry.function)},
          {"summary",
           {{"best_config", to_json(entry.summary.best_config)},
            {"aggregate", entry.summary.aggregate},
            {"validation_accuracy", entry.summary.validation_accuracy},
            {"validation_accuracy_display", display_percent(entry.summary.validation_accuracy)},
            {"per_objective", scores_json(entry.summary.per_objective)}}},
          {"timestamp_ms", entry.timestamp_ms},
          {"improved", entry.improved}};
}

json to_json(const Session& session) {
  json gallery = json::array();
  for (const auto& e : session.gallery()) gallery.push_back(to_json(e));
  return {{"version", kSessionFileVersion},
          {"id", session.id()},
          {"dataset", session.dataset_ref()},
          {"validation_fraction", session.validation_fraction()},
          {"split", split_json(session.split())},
          {"recommender_seed", session.recommender_seed()},
          {"current", to_json(session.current())},
          {"gallery", std::move(gallery)}};
}

Session session_from_json(const json& doc) {
  try {
    if (!doc.is_object() || !doc.contains("version")) {
      throw Error(ErrorCode::CorruptSession, "session document has no version field");
    }
    const auto version = doc.at("version");
    if (!version.is_number_integer() || version.get<int>() != kSessionFileVersion) {
      throw Error(ErrorCode::CorruptSession, "unsupported session version " + version.dump(),
                  version.dump());
    }
    Session s(doc.at("id").get<std::string>(), doc.at("dataset").get<std::string>(),
              split_from_json(doc.at("split")), doc.at("validation_fraction").get<double>(),
              doc.at("recommender_seed").get<std::uint64_t>());
    s.current_ = objective_function_from_json(doc.at("current"));
    for (const auto& e : doc.at("gallery")) {
      GalleryEntry entry;
      entry.iteration = e.at("iteration").get<std::size_t>();
      entry.function = objective_function_from_json(e.at("function"));
      const auto& summary = e.at("summary");
      entry.summary.best_config = model_config_from_json(summary.at("best_config"));
      entry.summary.aggregate = summary.at("aggregate").get<double>();
      entry.summary.validation_accuracy = summary.at("validation_accuracy").get<double>();
      entry.summary.per_objective = scores_from_json(summary.at("per_objective"));
      entry.timestamp_ms = e.at("timestamp_ms").get<std::int64_t>();
      entry.improved = e.at("improved").get<bool>();
      if (entry.iteration != s.gallery_.size()) {
        throw Error(ErrorCode::CorruptSession, "gallery indices are not contiguous");
      }
      s.gallery_.push_back(std::move(entry));
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptSession, std::string("malformed session document: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptSession) throw;
    throw Error(ErrorCode::CorruptSession, e.what(), e.context());
  }
}

void persist_session(const Session& session, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open session file for writing", path.string());
  out << to_json(session).dump(2) << "\n";
  if (!out.flush()) throw Error(ErrorCode::IoError, "failed writing session file", path.string());
}

Session load_session(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open session file", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::CorruptSession, std::string("session file is not JSON: ") + e.what(),
                path.string());
  }
  return session_from_json(doc);
}

}  // namespace cactus
