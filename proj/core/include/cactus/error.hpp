#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cactus {

/// Engine error codes. The string form of each code is part of the public
/// surface: it appears in CLI output and in HTTP error bodies.
enum class ErrorCode {
  // dataset ingestion
  DuplicateId,
  MissingColumn,
  NonNumericFeature,
  MissingValue,
  MalformedRow,
  EmptyDataset,
  // splitting
  FractionOutOfRange,
  TooFewRows,
  // objective-function documents
  SchemaError,
  UnknownKind,
  WeightOutOfRange,
  LabelRequired,
  ValidationFailed,
  UnknownObjectiveKey,
  // conflicts
  StaleConflict,
  IoError,
  // statistics
  EmptyIdSet,
  UnknownAttribute,
  UnknownId,
  InvalidArgument,
  // learners and scoring
  ArityMismatch,
  EmptyEffectiveTrainSet,
  EmptyObjectiveSet,
  AllZeroWeights,
  // session state
  IndexOutOfRange,
  CorruptSession,
  NotFound,
  BindError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string context = {});

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return to_string(code_); }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace cactus
