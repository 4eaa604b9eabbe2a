#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emu {

enum class ErrorCode {
  kInvalidArgument,
  // core
  kDuplicateLayer,
  kAlreadyRendered,
  kDuplicateBinding,
  kUnboundVirtualNode,
  kNoMatchingCandidate,
  kCyclicLayerDependency,
  kBindCollision,
  kUnknownLayer,
  kNotExportable,
  kVersionMismatch,
  kMalformedComponent,
  kNotRendered,
  kDuplicateKey,
  // base
  kDuplicateId,
  kPrefixOverlap,
  kExplicitPrefixRequired,
  kDuplicateName,
  kUnknownNetwork,
  kUnknownNode,
  kUnknownAs,
  kUnknownExchange,
  kAddressInUse,
  kAddressOutOfPrefix,
  kExplicitAddressRequired,
  kEmptyPrefixSource,
  kPortInUse,
  kIxNetworkNotAllowed,
  kRelativePath,
  // routing
  kNotAtExchange,
  kDuplicateSession,
  // dns
  kMalformedFqdn,
  kSecondMaster,
  kUnparseableRecord,
  kOrphanZone,
  kUnboundNameserver,
  // compile
  kIoError,
  kNameCollision,
  // mapd
  kMissingLabels,
  kSourceUnavailable,
  kFilterRejected,
  kUnknownRecording,
  kNodeNotRunning,
  kOfflineMode,
};

std::string_view errorCodeName(ErrorCode code);

/// The single exception type thrown by the toolkit. `code()` identifies the
/// failure class; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace emu
