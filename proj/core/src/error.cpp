#include "cactus/error.hpp"

namespace cactus {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericFeature: return "NonNumericFeature";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::FractionOutOfRange: return "FractionOutOfRange";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::LabelRequired: return "LabelRequired";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::UnknownObjectiveKey: return "UnknownObjectiveKey";
    case ErrorCode::StaleConflict: return "StaleConflict";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyIdSet: return "EmptyIdSet";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::EmptyEffectiveTrainSet: return "EmptyEffectiveTrainSet";
    case ErrorCode::EmptyObjectiveSet: return "EmptyObjectiveSet";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::CorruptSession: return "CorruptSession";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::BindError: return "BindError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string context)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      context_(std::move(context)) {}

}  // namespace cactus
