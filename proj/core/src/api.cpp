#include "cactus/api.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "cactus/conflict.hpp"
#include "cactus/dataset.hpp"
#include "cactus/history.hpp"
#include "cactus/objective.hpp"
#include "cactus/recommender.hpp"
#include "cactus/stats.hpp"
#include "cactus/workflow.hpp"

namespace cactus {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SchemaError: return 400;
    case ErrorCode::NotFound:
    case ErrorCode::IndexOutOfRange: return 404;
    case ErrorCode::StaleConflict: return 409;
    case ErrorCode::IoError:
    case ErrorCode::CorruptSession:
    case ErrorCode::BindError: return 500;
    case ErrorCode::DuplicateId:
    case ErrorCode::MissingColumn:
    case ErrorCode::NonNumericFeature:
    case ErrorCode::MissingValue:
    case ErrorCode::MalformedRow:
    case ErrorCode::EmptyDataset:
    case ErrorCode::FractionOutOfRange:
    case ErrorCode::TooFewRows:
    case ErrorCode::UnknownKind:
    case ErrorCode::WeightOutOfRange:
    case ErrorCode::LabelRequired:
    case ErrorCode::ValidationFailed:
    case ErrorCode::UnknownObjectiveKey:
    case ErrorCode::EmptyIdSet:
    case ErrorCode::UnknownAttribute:
    case ErrorCode::UnknownId:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ArityMismatch:
    case ErrorCode::EmptyEffectiveTrainSet:
    case ErrorCode::EmptyObjectiveSet:
    case ErrorCode::AllZeroWeights: return 422;
  }
  return 500;
}

ApiError to_api_error(const Error& error) {
  return {http_status(error.code()), std::string(error.code_name()), error.what(), error.context()};
}

struct Api::SessionState {
  std::shared_mutex mutex;
  Session session;
  std::shared_ptr<const Dataset> dataset;
  std::optional<StandardizedView> view;
};

namespace {

ApiResponse json_response(const json& body, int status = 200) {
  return {status, "application/json", body.dump()};
}

ApiResponse error_response(int status, std::string_view code, const std::string& message,
                           const std::string& context = {}, const json& extra = nullptr) {
  json body = {{"error", {{"status", status}, {"code", code}, {"message", message}, {"context", context}}}};
  if (!extra.is_null()) body.update(extra);
  return json_response(body, status);
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("request body is not JSON: ") + e.what(), "$");
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

IdSet parse_id_list(const std::string& text) {
  IdSet ids;
  std::stringstream ss(text);
  std::string id;
  while (std::getline(ss, id, ',')) {
    if (!id.empty()) ids.insert(id);
  }
  return ids;
}

// Dataset names are plain file names below the data directory.
std::filesystem::path resolve_dataset(const std::filesystem::path& data_dir, const std::string& name) {
  const std::filesystem::path rel(name);
  if (name.empty() || rel.is_absolute() || rel.has_root_path()) {
    throw Error(ErrorCode::InvalidArgument, "dataset must be a relative file name", name);
  }
  for (const auto& part : rel) {
    if (part == "..") throw Error(ErrorCode::InvalidArgument, "dataset path may not contain '..'", name);
  }
  return data_dir / rel;
}

json conflict_entries(const ObjectiveFunction& of, const ConflictReport& report,
                      const StandardizedView* view) {
  json out = json::array();
  for (const auto& c : rank_conflicts(report)) {
    json entry = to_json(of, c);
    if (view != nullptr) entry["conflict_box"] = to_json(conflict_box(*view, of, c));
    out.push_back(std::move(entry));
  }
  return out;
}

const Conflict* find_by_hash(const ObjectiveFunction& of, const ConflictReport& report,
                             const std::string& hash) {
  for (const auto& c : report.conflicts) {
    if (conflict_hash(of, c) == hash) return &c;
  }
  return nullptr;
}

}  // namespace

Api::Api(ServiceOptions options) : options_(std::move(options)) {}
Api::~Api() = default;

std::shared_ptr<Api::SessionState> Api::session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "no session '" + id + "'", id);
  return it->second;
}

ApiResponse Api::handle(const ApiRequest& request) {
  try {
    return dispatch(request);
  } catch (const Error& e) {
    const ApiError err = to_api_error(e);
    return error_response(err.status, err.code, err.message, err.context);
  } catch (const json::exception& e) {
    return error_response(400, to_string(ErrorCode::SchemaError), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

ApiResponse Api::create_session(const ApiRequest& request) {
  const json body = parse_body(request.body);
  if (!body.is_object()) throw Error(ErrorCode::SchemaError, "expected an object", "$");
  const double fraction = body.value("validation_fraction", 0.2);
  const auto split_seed = body.value<std::uint64_t>("split_seed", 0);
  const auto recommender_seed = body.value<std::uint64_t>("recommender_seed", 0);

  std::shared_ptr<const Dataset> dataset;
  std::string dataset_ref;
  if (body.contains("csv")) {
    dataset_ref = body.value("name", std::string("inline"));
    dataset = std::make_shared<const Dataset>(load_dataset(body.at("csv").get<std::string>(), dataset_ref));
  } else if (body.contains("dataset")) {
    dataset_ref = body.at("dataset").get<std::string>();
    auto ds = load_dataset_file(resolve_dataset(options_.data_dir, dataset_ref));
    dataset = std::make_shared<const Dataset>(std::move(ds));
  } else {
    throw Error(ErrorCode::SchemaError, "session needs a 'dataset' file name or inline 'csv'", "$");
  }
  DataSplit split = make_split(*dataset, fraction, split_seed);

  auto state = std::make_shared<SessionState>();
  std::string id;
  {
    std::lock_guard lock(sessions_mutex_);
    id = "s" + std::to_string(next_session_++);
  }
  state->session = Session(id, dataset_ref, split, fraction, recommender_seed);
  ObjectiveFunction empty;
  empty.id = id + "-function";
  empty.dataset_ref = dataset_ref;
  state->session.set_current(std::move(empty));
  state->dataset = dataset;
  state->view.emplace(*dataset, split);
  {
    std::lock_guard lock(sessions_mutex_);
    sessions_.emplace(id, state);
  }
  return json_response(
      {{"session_id", id},
       {"dataset",
        {{"name", dataset_ref},
         {"rows", dataset->size()},
         {"features", dataset->feature_names()},
         {"labels", dataset->label_domain()}}},
       {"split",
        {{"seed", split.seed},
         {"train_ids", std::vector<std::string>(split.train_ids.begin(), split.train_ids.end())},
         {"validation_ids",
          std::vector<std::string>(split.validation_ids.begin(), split.validation_ids.end())}}}},
      201);
}

ApiResponse Api::dispatch(const ApiRequest& request) {
  const auto parts = split_path(request.path);
  const std::string& method = request.method;
  auto not_found = [&] {
    return error_response(404, to_string(ErrorCode::NotFound), "no route for " + method + " " + request.path);
  };
  if (parts.size() < 2 || parts[0] != "api") return not_found();

  if (parts.size() == 2 && parts[1] == "health") {
    if (method != "GET") return error_response(405, "MethodNotAllowed", "use GET");
    return json_response({{"status", "ok"}});
  }
  if (parts[1] != "sessions") return not_found();
  if (parts.size() == 2) {
    if (method != "POST") return error_response(405, "MethodNotAllowed", "use POST");
    return create_session(request);
  }

  auto state = session(parts[2]);
  const std::vector<std::string> rest(parts.begin() + 3, parts.end());
  const std::string head = rest.empty() ? std::string() : rest[0];

  // --- reads ---------------------------------------------------------------
  if (method == "GET") {
    std::shared_lock lock(state->mutex);
    const Session& s = state->session;
    const ObjectiveFunction& of = s.current();
    if (rest.empty()) {
      return json_response({{"session_id", s.id()},
                            {"dataset", s.dataset_ref()},
                            {"function", to_json(of)},
                            {"gallery_size", s.gallery().size()}});
    }
    if (rest.size() == 1 && head == "function") return json_response(to_json(of));
    if (rest.size() == 1 && head == "conflicts") {
      const LintResult result = lint(of, *state->dataset, s.split());
      if (!result.validation.ok()) {
        return error_response(422, to_string(ErrorCode::ValidationFailed),
                              "current function does not validate", of.id,
                              {{"validation", to_json(result.validation)}});
      }
      return json_response({{"function_id", of.id},
                            {"validation", to_json(result.validation)},
                            {"conflicts", conflict_entries(of, result.conflicts, &*state->view)}});
    }
    if (rest.size() == 1 && head == "recommendations") {
      const auto rec = recommend_weights(s.iteration_records(), of, s.recommender_seed());
      return json_response({{"function_id", of.id}, {"recommendations", to_json(rec)}});
    }
    if (rest.size() == 1 && head == "gallery") {
      json entries = json::array();
      for (const auto& e : s.gallery()) entries.push_back(to_json(e));
      return json_response({{"entries", std::move(entries)}});
    }
    if (rest.size() == 2 && head == "export" && rest[1] == "function") {
      return {200, "application/json", serialize_objective_function(of)};
    }
    if (rest.size() == 3 && head == "export" && rest[1] == "conflicts") {
      const ConflictReport report = detect_conflicts(of);
      const Conflict* c = find_by_hash(of, report, rest[2]);
      if (c == nullptr) throw Error(ErrorCode::StaleConflict, "no current conflict has this hash", rest[2]);
      return {200, "text/plain; charset=utf-8", format_conflict_export(of, *c)};
    }
    if (rest.size() == 1 && head == "featureplots") {
      auto ids_it = request.query.find("ids");
      const IdSet ids = ids_it == request.query.end() ? IdSet{} : parse_id_list(ids_it->second);
      std::size_t k = std::min<std::size_t>(4, state->view->feature_count());
      if (auto k_it = request.query.find("k"); k_it != request.query.end()) {
        try {
          k = static_cast<std::size_t>(std::stoul(k_it->second));
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidArgument, "k must be a positive integer", k_it->second);
        }
      }
      if (k == 0 || k > state->view->feature_count()) {
        throw Error(ErrorCode::InvalidArgument, "k out of range", std::to_string(k));
      }
      return json_response({{"plots", to_json(feature_plots(*state->view, ids, k))}});
    }
    return not_found();
  }

  // --- mutations -------------------------------------------------------------
  std::unique_lock lock(state->mutex);
  Session& s = state->session;
  const Dataset& ds = *state->dataset;

  if (rest.size() == 1 && head == "function" && (method == "POST" || method == "PUT")) {
    ObjectiveFunction of = parse_objective_function(request.body);
    const ValidationReport report = validate_function(of, ds, s.split());
    if (!report.ok()) {
      return error_response(422, to_string(ErrorCode::ValidationFailed),
                            report.errors.front().code + ": " + report.errors.front().message,
                            report.errors.front().context, {{"validation", to_json(report)}});
    }
    s.set_current(std::move(of));
    return json_response({{"function", to_json(s.current())}, {"validation", to_json(report)}});
  }

  if (rest.size() == 3 && head == "conflicts" && rest[2] == "resolve" && method == "POST") {
    const json body = parse_body(request.body);
    const ResolutionAction action = parse_resolution_action(body.value("action", std::string()));
    const ObjectiveFunction& of = s.current();
    const ConflictReport report = detect_conflicts(of);
    const Conflict* c = find_by_hash(of, report, rest[1]);
    if (c == nullptr) {
      throw Error(ErrorCode::StaleConflict, "conflict changed or was resolved; refresh the report", rest[1]);
    }
    if (action == ResolutionAction::Export) {
      const auto dir = options_.data_dir / "exports";
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      const auto path = dir / (s.id() + "-" + rest[1] + ".txt");
      resolve_conflict(of, *c, Resolution::export_to(path));
      return json_response({{"function", to_json(of)},
                            {"export_path", path.string()},
                            {"content", format_conflict_export(of, *c)}});
    }
    ObjectiveFunction next = resolve_conflict(of, *c, Resolution{action, {}});
    s.set_current(std::move(next));
    const ConflictReport fresh = detect_conflicts(s.current());
    return json_response({{"function", to_json(s.current())},
                          {"conflicts", conflict_entries(s.current(), fresh, nullptr)}});
  }

  if (rest.size() == 1 && head == "weights" && (method == "PUT" || method == "POST")) {
    const json body = parse_body(request.body);
    if (!body.is_object()) throw Error(ErrorCode::SchemaError, "expected an object of key -> weight", "$");
    ObjectiveFunction next = s.current();
    for (const auto& [key, value] : body.items()) {
      auto index = next.find(key);
      if (!index) throw Error(ErrorCode::UnknownObjectiveKey, "no objective '" + key + "'", key);
      if (!value.is_number()) throw Error(ErrorCode::SchemaError, "weight must be a number", "$." + key);
      const double w = value.get<double>();
      if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorCode::WeightOutOfRange, key + " must lie in [0, 1]", key);
      next.objectives[*index].weight = w;
    }
    s.set_current(std::move(next));
    return json_response({{"function", to_json(s.current())}});
  }

  if (rest.size() == 1 && head == "train" && method == "POST") {
    const ObjectiveFunction of = s.current();
    SolverOptions solver;
    solver.max_samples = options_.max_samples;
    solver.threads = options_.threads;
    const TrainResult result = train_function(of, ds, s.split(), solver);
    const GalleryEntry& entry = s.snapshot(of, result.selection);
    return json_response({{"evaluation", to_json(result.selection.best(), of)},
                          {"gallery_entry", to_json(entry)},
                          {"model_card", result.model_card}});
  }

  if (rest.size() == 1 && head == "revert" && method == "POST") {
    const json body = parse_body(request.body);
    if (!body.contains("index") || !body.at("index").is_number_integer()) {
      throw Error(ErrorCode::SchemaError, "revert needs an integer 'index'", "$.index");
    }
    const auto index = body.at("index").get<std::int64_t>();
    if (index < 0) throw Error(ErrorCode::IndexOutOfRange, "index must be non-negative", std::to_string(index));
    return json_response({{"function", to_json(s.revert(static_cast<std::size_t>(index)))}});
  }

  return not_found();
}

}  // namespace cactus
