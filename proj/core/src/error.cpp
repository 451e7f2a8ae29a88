#include "gvipath/error.hpp"

namespace gvipath {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedDocument: return "malformed_document";
    case Errc::DanglingEndpoint: return "dangling_endpoint";
    case Errc::SelfLoop: return "self_loop";
    case Errc::CoordinateOutOfRange: return "coordinate_out_of_range";
    case Errc::CoincidentNodes: return "coincident_nodes";
    case Errc::InvalidRaster: return "invalid_raster";
    case Errc::EmptyObservationSet: return "empty_observation_set";
    case Errc::MixedNodeIds: return "mixed_node_ids";
    case Errc::DuplicateHeading: return "duplicate_heading";
    case Errc::OutOfRange: return "out_of_range";
    case Errc::EmptyInput: return "empty_input";
    case Errc::DimensionMismatch: return "dimension_mismatch";
    case Errc::NoClassesPresent: return "no_classes_present";
    case Errc::MissingNodeGvi: return "missing_node_gvi";
    case Errc::NoObservations: return "no_observations";
    case Errc::IndexOutOfBounds: return "index_out_of_bounds";
    case Errc::DuplicateEdgeConflict: return "duplicate_edge_conflict";
    case Errc::GraphTooLarge: return "graph_too_large";
    case Errc::NoPath: return "no_path";
    case Errc::SameNode: return "same_node";
    case Errc::TooLargeForBruteForce: return "too_large_for_brute_force";
    case Errc::UnknownNode: return "unknown_node";
    case Errc::IoFailure: return "io_failure";
    case Errc::ChecksumMismatch: return "checksum_mismatch";
    case Errc::VersionUnsupported: return "version_unsupported";
  }
  return "unknown";
}

}  // namespace gvipath
