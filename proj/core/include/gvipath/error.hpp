#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gvipath {

enum class Errc {
  MalformedDocument,
  DanglingEndpoint,
  SelfLoop,
  CoordinateOutOfRange,
  CoincidentNodes,
  InvalidRaster,
  EmptyObservationSet,
  MixedNodeIds,
  DuplicateHeading,
  OutOfRange,
  EmptyInput,
  DimensionMismatch,
  NoClassesPresent,
  MissingNodeGvi,
  NoObservations,
  IndexOutOfBounds,
  DuplicateEdgeConflict,
  GraphTooLarge,
  NoPath,
  SameNode,
  TooLargeForBruteForce,
  UnknownNode,
  IoFailure,
  ChecksumMismatch,
  VersionUnsupported,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// front ends (CLI exit codes, HTTP statuses) can map it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gvipath
