#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tabletop {

enum class ErrorCode {
  InvalidArgument,
  FileNotFound,
  UnsupportedFormat,
  MalformedMesh,
  NonWatertight,
  DegenerateInput,
  EmptyMesh,
  NoStablePose,
  SchemaViolation,
  MissingMeshFile,
  UnknownObjectId,
  IndexOutOfRange,
  UnknownInstance,
  NoPairedRecords,
  UndefinedMetric,
  EmptyScene,
  UnknownMarkerId,
  BoardOverflow,
  PageTooSmall,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All domain failures raised by the toolkit carry one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tabletop
