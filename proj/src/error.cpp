#include "visionflow/error.hpp"

namespace visionflow {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyLabel: return "EmptyLabel";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidScene: return "InvalidScene";
    case ErrorKind::ImageFormat: return "ImageFormat";
    case ErrorKind::ParseFailed: return "ParseFailed";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::BackendUnavailable: return "BackendUnavailable";
    case ErrorKind::BackendMalformed: return "BackendMalformed";
    case ErrorKind::UnplannableRequest: return "UnplannableRequest";
    case ErrorKind::NoCandidates: return "NoCandidates";
    case ErrorKind::InvalidProposalSet: return "InvalidProposalSet";
    case ErrorKind::DuplicateModelId: return "DuplicateModelId";
    case ErrorKind::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorKind::NoCapableModel: return "NoCapableModel";
    case ErrorKind::CapabilityMismatch: return "CapabilityMismatch";
    case ErrorKind::RemoteUnavailable: return "RemoteUnavailable";
    case ErrorKind::RemoteMalformed: return "RemoteMalformed";
    case ErrorKind::VerifierUnavailable: return "VerifierUnavailable";
    case ErrorKind::PlanningFailed: return "PlanningFailed";
    case ErrorKind::StorageFailure: return "StorageFailure";
    case ErrorKind::RunNotFound: return "RunNotFound";
    case ErrorKind::CompositingFailure: return "CompositingFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidRequest: return "InvalidRequest";
  }
  return "Unknown";
}

}  // namespace visionflow
