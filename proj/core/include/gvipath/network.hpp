#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gvipath {

/// Dense node index, 0..N-1 after ingestion.
using NodeId = std::uint32_t;

struct GeoNode {
  NodeId id = 0;
  std::string external_id;
  double lat = 0.0;
  double lon = 0.0;
  // false for intersections whose imagery was discarded; such nodes never
  // take part in graph construction.
  bool valid = true;
};

struct StreetEdge {
  NodeId u = 0;
  NodeId v = 0;
  std::optional<double> length_m;
};

/// Immutable, validated street network. Construction enforces: node ids are
/// exactly 0..N-1 in order, external ids are unique, coordinates are in
/// range, edges have distinct existing endpoints and no unordered pair
/// repeats.
class StreetNetwork {
 public:
  StreetNetwork() = default;
  StreetNetwork(std::vector<GeoNode> nodes, std::vector<StreetEdge> edges);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const GeoNode> nodes() const noexcept { return nodes_; }
  std::span<const StreetEdge> edges() const noexcept { return edges_; }
  const GeoNode& node(NodeId id) const { return nodes_.at(id); }

  std::optional<NodeId> find(std::string_view external_id) const;

  friend bool operator==(const StreetNetwork& a, const StreetNetwork& b);

 private:
  std::vector<GeoNode> nodes_;
  std::vector<StreetEdge> edges_;
  std::unordered_map<std::string, NodeId> by_external_id_;
};

struct IngestionReport {
  std::size_t duplicate_edges = 0;
  std::size_t invalid_nodes = 0;
  // edges removed because an endpoint is flagged invalid
  std::size_t dropped_edges = 0;
  std::vector<std::string> warnings;
};

struct ParsedNetwork {
  StreetNetwork network;
  IngestionReport report;
};

/// Parses a network document:
///   {"nodes": [{"id", "lat", "lon", "valid"?}], "edges": [{"u", "v", "length_m"?}]}
/// Ids may be strings or integers; they are kept as external ids and the
/// nodes re-indexed densely in input order. Duplicate undirected edges
/// collapse to the first occurrence.
ParsedNetwork parse_network(std::string_view document);

/// Writes the network back as a network document that parse_network
/// reproduces exactly.
std::string serialize_network(const StreetNetwork& network);

/// Compass bearing of the great-circle course from `from` to `to`, degrees
/// in [0, 360) with 0 = north, clockwise. Spherical forward azimuth.
double edge_bearing(const GeoNode& from, const GeoNode& to);

/// Smallest absolute difference between two compass angles, in [0, 180].
double angular_distance(double a_deg, double b_deg) noexcept;

}  // namespace gvipath
