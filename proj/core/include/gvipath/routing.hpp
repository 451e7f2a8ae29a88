#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gvipath/graph.hpp"
#include "gvipath/gvi.hpp"
#include "gvipath/matrix.hpp"
#include "gvipath/network.hpp"

namespace gvipath {

/// Sentinel in predecessor matrices: no path, or i == j.
inline constexpr std::int32_t kNoParent = -1;
inline constexpr std::size_t kDefaultBlockSize = 128;
/// Exhaustive path search is limited to graphs this small.
inline constexpr std::size_t kBruteForceLimit = 12;

/// All-pairs shortest paths over the transformed weights. parents(i, j) is the
/// node before j on the chosen best i->j path.
struct ApspResult {
  std::size_t n = 0;
  Matrix<double> dist;
  Matrix<std::int32_t> parents;
};

/// Classic triple loop, k outermost, strict-less relaxation:
///   if d[i][k] + d[k][j] < d[i][j]: d[i][j] = d[i][k] + d[k][j]; p[i][j] = p[k][j]
/// Deterministic for a given graph.
ApspResult floyd_warshall(const WeightedGraph& graph,
                          std::size_t max_nodes = kDefaultMaxNodes);

/// Tiled variant: per k-block, the diagonal tile, then the row/column panels,
/// then the remaining tiles (in parallel). Produces the same distances as
/// floyd_warshall; parents may pick a different path of equal cost. When the
/// graph has zero-weight edges (GVI 100), equal-cost candidates are ordered by
/// hop count so the predecessor rows stay acyclic.
ApspResult floyd_warshall_blocked(const WeightedGraph& graph,
                                  std::size_t block_size = kDefaultBlockSize,
                                  std::size_t max_nodes = kDefaultMaxNodes);

/// Worker threads for the parallel tile phase; 0 restores the runtime default.
void set_worker_threads(int threads);
int worker_threads();

/// Node sequence start..dest read off the predecessor matrix.
std::vector<NodeId> reconstruct_path(const ApspResult& apsp, NodeId start, NodeId dest);

struct RoutePlan {
  std::vector<NodeId> nodes;
  std::vector<double> edge_gvis;
  double total_weight = 0.0;
  double avg_gvi = 0.0;
  GviBand band = GviBand::Low;

  std::size_t node_count() const noexcept { return nodes.size(); }
};

/// Evaluates a node sequence against the graph. Throws NoPath if a
/// consecutive pair is not an edge.
RoutePlan make_route_plan(const WeightedGraph& graph, std::vector<NodeId> nodes);

/// The route minimising the sum of (100 - GVI) between start and dest.
RoutePlan greenest_path(const ApspResult& apsp, const WeightedGraph& graph, NodeId start,
                        NodeId dest);

struct SingleSourcePaths {
  std::vector<double> dist;
  std::vector<std::int32_t> parents;
};

/// Single-source shortest paths with a binary heap; cross-checks floyd_warshall rows.
SingleSourcePaths dijkstra(const WeightedGraph& graph, NodeId start,
                           std::size_t max_nodes = kDefaultMaxNodes);

struct ExhaustivePath {
  std::vector<NodeId> nodes;
  double total_weight = 0.0;
  double avg_gvi = 0.0;
};

/// Brute-force minimum of sum(100 - GVI) over all simple paths (n <= 12).
/// Ties: fewer edges, then lexicographically smaller node sequence.
ExhaustivePath enumerate_best_path(const WeightedGraph& graph, NodeId start, NodeId dest);

/// Brute-force maximum of the mean edge GVI over all simple paths (n <= 12).
/// Ties: fewer edges, then lexicographically smaller node sequence.
ExhaustivePath max_average_gvi_path(const WeightedGraph& graph, NodeId start, NodeId dest);

}  // namespace gvipath
