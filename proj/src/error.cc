#include "emu/error.h"

namespace emu {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDuplicateLayer: return "DuplicateLayer";
    case ErrorCode::kAlreadyRendered: return "AlreadyRendered";
    case ErrorCode::kDuplicateBinding: return "DuplicateBinding";
    case ErrorCode::kUnboundVirtualNode: return "UnboundVirtualNode";
    case ErrorCode::kNoMatchingCandidate: return "NoMatchingCandidate";
    case ErrorCode::kCyclicLayerDependency: return "CyclicLayerDependency";
    case ErrorCode::kBindCollision: return "BindCollision";
    case ErrorCode::kUnknownLayer: return "UnknownLayer";
    case ErrorCode::kNotExportable: return "NotExportable";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kMalformedComponent: return "MalformedComponent";
    case ErrorCode::kNotRendered: return "NotRendered";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kPrefixOverlap: return "PrefixOverlap";
    case ErrorCode::kExplicitPrefixRequired: return "ExplicitPrefixRequired";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kUnknownNetwork: return "UnknownNetwork";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kUnknownAs: return "UnknownAs";
    case ErrorCode::kUnknownExchange: return "UnknownExchange";
    case ErrorCode::kAddressInUse: return "AddressInUse";
    case ErrorCode::kAddressOutOfPrefix: return "AddressOutOfPrefix";
    case ErrorCode::kExplicitAddressRequired: return "ExplicitAddressRequired";
    case ErrorCode::kEmptyPrefixSource: return "EmptyPrefixSource";
    case ErrorCode::kPortInUse: return "PortInUse";
    case ErrorCode::kIxNetworkNotAllowed: return "IxNetworkNotAllowed";
    case ErrorCode::kRelativePath: return "RelativePath";
    case ErrorCode::kNotAtExchange: return "NotAtExchange";
    case ErrorCode::kDuplicateSession: return "DuplicateSession";
    case ErrorCode::kMalformedFqdn: return "MalformedFqdn";
    case ErrorCode::kSecondMaster: return "SecondMaster";
    case ErrorCode::kUnparseableRecord: return "UnparseableRecord";
    case ErrorCode::kOrphanZone: return "OrphanZone";
    case ErrorCode::kUnboundNameserver: return "UnboundNameserver";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNameCollision: return "NameCollision";
    case ErrorCode::kMissingLabels: return "MissingLabels";
    case ErrorCode::kSourceUnavailable: return "SourceUnavailable";
    case ErrorCode::kFilterRejected: return "FilterRejected";
    case ErrorCode::kUnknownRecording: return "UnknownRecording";
    case ErrorCode::kNodeNotRunning: return "NodeNotRunning";
    case ErrorCode::kOfflineMode: return "OfflineMode";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(errorCodeName(code)) + ": " + detail),
      code_(code) {}

}  // namespace emu
