#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace visionflow {

/// Every failure the library reports carries one of these kinds. The names
/// returned by kind_name() are stable: they appear in HTTP error bodies and
/// in persisted run records.
enum class ErrorKind {
  EmptyLabel,
  DimensionMismatch,
  InvalidScene,
  ImageFormat,
  ParseFailed,
  EmptyInput,
  BackendUnavailable,
  BackendMalformed,
  UnplannableRequest,
  NoCandidates,
  InvalidProposalSet,
  DuplicateModelId,
  InvalidDescriptor,
  NoCapableModel,
  CapabilityMismatch,
  RemoteUnavailable,
  RemoteMalformed,
  VerifierUnavailable,
  PlanningFailed,
  StorageFailure,
  RunNotFound,
  CompositingFailure,
  InvalidConfig,
  InvalidRequest,
};

std::string_view kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace visionflow
