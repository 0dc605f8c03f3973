#include "tabletop/error.hpp"

namespace tabletop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::MalformedMesh: return "MalformedMesh";
    case ErrorCode::NonWatertight: return "NonWatertight";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::NoStablePose: return "NoStablePose";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::MissingMeshFile: return "MissingMeshFile";
    case ErrorCode::UnknownObjectId: return "UnknownObjectId";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::NoPairedRecords: return "NoPairedRecords";
    case ErrorCode::UndefinedMetric: return "UndefinedMetric";
    case ErrorCode::EmptyScene: return "EmptyScene";
    case ErrorCode::UnknownMarkerId: return "UnknownMarkerId";
    case ErrorCode::BoardOverflow: return "BoardOverflow";
    case ErrorCode::PageTooSmall: return "PageTooSmall";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tabletop
