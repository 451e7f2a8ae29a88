#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gvipath/gvi.hpp"
#include "gvipath/matrix.hpp"
#include "gvipath/network.hpp"

namespace gvipath {

/// Largest node count accepted for dense n x n builds unless overridden.
inline constexpr std::size_t kDefaultMaxNodes = 20'000;
inline constexpr double kDefaultHeadingToleranceDeg = 30.0;
inline constexpr int kWeightGridBits = 30;

enum class AssignmentMode { UndirectedAverage, DirectionalHeading };

struct EdgeGviAssignment {
  AssignmentMode mode = AssignmentMode::UndirectedAverage;
  double heading_tolerance_deg = kDefaultHeadingToleranceDeg;

  /// Throws OutOfRange unless the tolerance is in (0, 90].
  void validate() const;
};

struct EdgeGvi {
  NodeId u = 0;
  NodeId v = 0;
  double gvi = 0.0;
};

/// Directed edge whose origin had no heading within tolerance of the edge
/// bearing; its GVI is the origin's average instead.
struct HeadingFallback {
  NodeId u = 0;
  NodeId v = 0;
  double bearing_deg = 0.0;
};

struct EdgeGviTable {
  bool directed = false;
  std::vector<EdgeGvi> entries;
  // network edges left out for lack of endpoint GVI data
  std::vector<StreetEdge> dropped;
  std::vector<HeadingFallback> fallbacks;
};

/// Edge cost of the greenest-route objective: 100 - GVI.
double transform_weight(double gvi_percent);

/// Each street edge gets the mean of its endpoints' average GVI.
EdgeGviTable assign_edge_gvi_undirected(const StreetNetwork& network,
                                        const std::map<NodeId, NodeGvi>& node_gvis);

/// Each direction u->v gets u's view facing the edge bearing. The nearest
/// heading within `tolerance_deg` wins (lower heading on ties); with none in
/// range the edge falls back to u's average GVI and is listed in `fallbacks`.
EdgeGviTable assign_edge_gvi_directional(
    const StreetNetwork& network,
    const std::map<NodeId, std::vector<ViewObservation>>& observations,
    double tolerance_deg = kDefaultHeadingToleranceDeg);

/// Dense adjacency matrices. `weight` holds 100 - GVI for present edges, 0 on
/// the diagonal and +inf elsewhere; `gvi` holds the edge GVI and NaN where no
/// edge exists.
///
/// Weights are rounded to multiples of 2^-kWeightGridBits, so every path
/// weight in a graph of up to 40,000 nodes is an exact double and the solvers
/// agree bit for bit whatever order they add edges in. `gvi` stores
/// 100 - weight, which differs from the input by at most 5e-10.
struct WeightedGraph {
  std::size_t n = 0;
  bool directed = false;
  Matrix<double> weight;
  Matrix<double> gvi;

  bool has_edge(std::size_t i, std::size_t j) const {
    return i != j && std::isfinite(weight(i, j));
  }
};

WeightedGraph build_adjacency_matrix(std::size_t n, std::span<const EdgeGvi> edges,
                                     bool directed,
                                     std::size_t max_nodes = kDefaultMaxNodes);

/// Finite off-diagonal cells as (u, v, gvi); u < v only for undirected graphs.
std::vector<EdgeGvi> edge_list(const WeightedGraph& graph);

/// CSV `u,v,gvi_percent` with a header row; u and v are dense node indices.
std::vector<EdgeGvi> parse_adjacency_table(std::string_view document);
std::string write_adjacency_table(std::span<const EdgeGvi> edges);

}  // namespace gvipath
