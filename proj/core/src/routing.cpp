#include "gvipath/routing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include <omp.h>

#include "gvipath/error.hpp"

namespace gvipath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_size(const WeightedGraph& graph, std::size_t max_nodes) {
  if (graph.n > max_nodes) {
    throw Error(Errc::GraphTooLarge, "graph has " + std::to_string(graph.n) +
                                         " nodes; all-pairs solve is capped at " +
                                         std::to_string(max_nodes));
  }
}

void check_endpoints(std::size_t n, NodeId start, NodeId dest) {
  if (start >= n || dest >= n) {
    throw Error(Errc::IndexOutOfBounds, "node index outside graph of " +
                                            std::to_string(n) + " nodes");
  }
  if (start == dest) {
    throw Error(Errc::SameNode, "start and destination are the same node");
  }
}

ApspResult init_apsp(const WeightedGraph& graph) {
  ApspResult apsp;
  apsp.n = graph.n;
  apsp.dist = graph.weight;
  apsp.parents = Matrix<std::int32_t>(graph.n, graph.n, kNoParent);
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j = 0; j < graph.n; ++j) {
      if (graph.has_edge(i, j)) apsp.parents(i, j) = static_cast<std::int32_t>(i);
    }
  }
  return apsp;
}

// Relaxes rows [i0, i1) x columns [j0, j1) through every k in [k0, k1).
// Rows with i == k cannot improve (d[k][k] == 0 and relaxation is strict), so
// they are skipped; that also guarantees the two row pointers never alias.
#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
__attribute__((target_clones("avx512f", "avx2", "default")))
#endif
void relax_tile(double* dist, std::int32_t* parents, std::size_t n, std::size_t k0,
                std::size_t k1, std::size_t i0, std::size_t i1, std::size_t j0,
                std::size_t j1) {
  for (std::size_t k = k0; k < k1; ++k) {
    const double* __restrict dk = dist + k * n;
    const std::int32_t* __restrict pk = parents + k * n;
    for (std::size_t i = i0; i < i1; ++i) {
      if (i == k) continue;
      const double dik = dist[i * n + k];
      if (dik == kInf) continue;
      double* __restrict di = dist + i * n;
      std::int32_t* __restrict pi = parents + i * n;
      for (std::size_t j = j0; j < j1; ++j) {
        const double candidate = dik + dk[j];
        const bool better = candidate < di[j];
        di[j] = better ? candidate : di[j];
        pi[j] = better ? pk[j] : pi[j];
      }
    }
  }
}

// Same sweep, ordering candidates by (distance, hop count). Zero-weight edges
// let two nodes tie on distance; the tiled schedule can then point their
// predecessors at each other unless the tie is broken by hops.
constexpr std::int32_t kNoHops = std::numeric_limits<std::int32_t>::max() / 4;

#if defined(__GNUC__) && !defined(__clang__) && defined(__x86_64__)
__attribute__((target_clones("avx512f", "avx2", "default")))
#endif
void relax_tile_hops(double* dist, std::int32_t* parents, std::int32_t* hops, std::size_t n,
                     std::size_t k0, std::size_t k1, std::size_t i0, std::size_t i1,
                     std::size_t j0, std::size_t j1) {
  for (std::size_t k = k0; k < k1; ++k) {
    const double* __restrict dk = dist + k * n;
    const std::int32_t* __restrict pk = parents + k * n;
    const std::int32_t* __restrict hk = hops + k * n;
    for (std::size_t i = i0; i < i1; ++i) {
      if (i == k) continue;
      const double dik = dist[i * n + k];
      if (dik == kInf) continue;
      const std::int32_t hik = hops[i * n + k];
      double* __restrict di = dist + i * n;
      std::int32_t* __restrict pi = parents + i * n;
      std::int32_t* __restrict hi = hops + i * n;
      for (std::size_t j = j0; j < j1; ++j) {
        const double candidate = dik + dk[j];
        const std::int32_t h = hik + hk[j];
        const bool better = candidate < di[j] || (candidate == di[j] && h < hi[j]);
        di[j] = better ? candidate : di[j];
        pi[j] = better ? pk[j] : pi[j];
        hi[j] = better ? h : hi[j];
      }
    }
  }
}

bool has_zero_weight_edge(const WeightedGraph& graph) {
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j = 0; j < graph.n; ++j) {
      if (i != j && graph.weight(i, j) == 0.0) return true;
    }
  }
  return false;
}

bool lexicographically_less(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Depth-first walk over every simple path start -> dest. `visit` sees the
// path, its weight sum and its GVI sum; `prune` returning true for a prefix
// weight cuts that branch.
template <typename Visit, typename Prune>
void for_each_simple_path(const WeightedGraph& graph, NodeId start, NodeId dest,
                          Visit&& visit, Prune&& prune) {
  std::vector<NodeId> path{start};
  std::vector<bool> on_path(graph.n, false);
  on_path[start] = true;
  std::function<void(double, double)> walk = [&](double weight, double gvi_sum) {
    const NodeId at = path.back();
    if (at == dest) {
      visit(path, weight, gvi_sum);
      return;
    }
    for (std::size_t next = 0; next < graph.n; ++next) {
      if (on_path[next] || !graph.has_edge(at, next)) continue;
      const double w = weight + graph.weight(at, next);
      if (prune(w)) continue;
      path.push_back(static_cast<NodeId>(next));
      on_path[next] = true;
      walk(w, gvi_sum + graph.gvi(at, next));
      on_path[next] = false;
      path.pop_back();
    }
  };
  walk(0.0, 0.0);
}

void check_brute_force(const WeightedGraph& graph, NodeId start, NodeId dest) {
  if (graph.n > kBruteForceLimit) {
    throw Error(Errc::TooLargeForBruteForce,
                "exhaustive search needs n <= " + std::to_string(kBruteForceLimit) +
                    ", got " + std::to_string(graph.n));
  }
  check_endpoints(graph.n, start, dest);
}

}  // namespace

void set_worker_threads(int threads) {
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int worker_threads() { return omp_get_max_threads(); }

ApspResult floyd_warshall(const WeightedGraph& graph, std::size_t max_nodes) {
  check_size(graph, max_nodes);
  ApspResult apsp = init_apsp(graph);
  const std::size_t n = graph.n;
  relax_tile(apsp.dist.data(), apsp.parents.data(), n, 0, n, 0, n, 0, n);
  return apsp;
}

ApspResult floyd_warshall_blocked(const WeightedGraph& graph, std::size_t block_size,
                                  std::size_t max_nodes) {
  check_size(graph, max_nodes);
  if (block_size == 0) throw Error(Errc::OutOfRange, "block size must be >= 1");
  ApspResult apsp = init_apsp(graph);
  const std::size_t n = graph.n;
  if (n == 0) return apsp;

  double* dist = apsp.dist.data();
  std::int32_t* parents = apsp.parents.data();
  Matrix<std::int32_t> hop_matrix;
  std::int32_t* hops = nullptr;
  if (has_zero_weight_edge(graph)) {
    hop_matrix = Matrix<std::int32_t>(n, n, kNoHops);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) hop_matrix(i, j) = 0;
        else if (graph.has_edge(i, j)) hop_matrix(i, j) = 1;
      }
    }
    hops = hop_matrix.data();
  }
  auto relax = [&](std::size_t k0, std::size_t k1, std::size_t i0, std::size_t i1,
                   std::size_t j0, std::size_t j1) {
    if (hops) {
      relax_tile_hops(dist, parents, hops, n, k0, k1, i0, i1, j0, j1);
    } else {
      relax_tile(dist, parents, n, k0, k1, i0, i1, j0, j1);
    }
  };
  const std::size_t bs = std::min(block_size, n);
  const std::size_t blocks = (n + bs - 1) / bs;
  auto lo = [bs](std::size_t b) { return b * bs; };
  auto hi = [bs, n](std::size_t b) { return std::min(n, (b + 1) * bs); };

  for (std::size_t kb = 0; kb < blocks; ++kb) {
    const std::size_t k0 = lo(kb);
    const std::size_t k1 = hi(kb);

    relax(k0, k1, k0, k1, k0, k1);

    // Row panel (kb, *) and column panel (*, kb) depend only on the diagonal tile.
    const auto panels = static_cast<std::ptrdiff_t>(2 * blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < panels; ++t) {
      const auto b = static_cast<std::size_t>(t) / 2;
      if (b == kb) continue;
      if (t % 2 == 0) {
        relax(k0, k1, k0, k1, lo(b), hi(b));
      } else {
        relax(k0, k1, lo(b), hi(b), k0, k1);
      }
    }

    const auto tiles = static_cast<std::ptrdiff_t>(blocks * blocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < tiles; ++t) {
      const auto ib = static_cast<std::size_t>(t) / blocks;
      const auto jb = static_cast<std::size_t>(t) % blocks;
      if (ib == kb || jb == kb) continue;
      relax(k0, k1, lo(ib), hi(ib), lo(jb), hi(jb));
    }
  }
  return apsp;
}

std::vector<NodeId> reconstruct_path(const ApspResult& apsp, NodeId start, NodeId dest) {
  check_endpoints(apsp.n, start, dest);
  if (apsp.dist(start, dest) == kInf) {
    throw Error(Errc::NoPath, "no path from node " + std::to_string(start) + " to node " +
                                  std::to_string(dest));
  }
  std::vector<NodeId> path{dest};
  NodeId at = dest;
  while (at != start) {
    const std::int32_t prev = apsp.parents(start, at);
    if (prev == kNoParent || path.size() > apsp.n) {
      throw Error(Errc::NoPath, "predecessor matrix does not lead back to node " +
                                    std::to_string(start));
    }
    at = static_cast<NodeId>(prev);
    path.push_back(at);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

RoutePlan make_route_plan(const WeightedGraph& graph, std::vector<NodeId> nodes) {
  if (nodes.size() < 2) {
    throw Error(Errc::NoPath, "a route needs at least two nodes");
  }
  RoutePlan plan;
  double gvi_sum = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const NodeId a = nodes[i];
    const NodeId b = nodes[i + 1];
    if (a >= graph.n || b >= graph.n || !graph.has_edge(a, b)) {
      throw Error(Errc::NoPath, "route step " + std::to_string(a) + "->" +
                                    std::to_string(b) + " is not an edge");
    }
    plan.edge_gvis.push_back(graph.gvi(a, b));
    plan.total_weight += graph.weight(a, b);
    gvi_sum += graph.gvi(a, b);
  }
  plan.avg_gvi = gvi_sum / static_cast<double>(plan.edge_gvis.size());
  plan.band = classify_band(plan.avg_gvi);
  plan.nodes = std::move(nodes);
  return plan;
}

RoutePlan greenest_path(const ApspResult& apsp, const WeightedGraph& graph, NodeId start,
                        NodeId dest) {
  if (apsp.n != graph.n) {
    throw Error(Errc::DimensionMismatch, "all-pairs result and graph differ in size");
  }
  return make_route_plan(graph, reconstruct_path(apsp, start, dest));
}

SingleSourcePaths dijkstra(const WeightedGraph& graph, NodeId start, std::size_t max_nodes) {
  check_size(graph, max_nodes);
  if (start >= graph.n) {
    throw Error(Errc::IndexOutOfBounds, "source outside graph");
  }
  SingleSourcePaths out;
  out.dist.assign(graph.n, kInf);
  out.parents.assign(graph.n, kNoParent);
  std::vector<bool> settled(graph.n, false);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  out.dist[start] = 0.0;
  queue.emplace(0.0, start);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = true;
    const auto row = graph.weight.row(u);
    for (std::size_t v = 0; v < graph.n; ++v) {
      if (v == u || settled[v] || row[v] == kInf) continue;
      const double candidate = d + row[v];
      if (candidate < out.dist[v]) {
        out.dist[v] = candidate;
        out.parents[v] = static_cast<std::int32_t>(u);
        queue.emplace(candidate, static_cast<NodeId>(v));
      }
    }
  }
  return out;
}

ExhaustivePath enumerate_best_path(const WeightedGraph& graph, NodeId start, NodeId dest) {
  check_brute_force(graph, start, dest);
  ExhaustivePath best;
  bool found = false;
  for_each_simple_path(
      graph, start, dest,
      [&](const std::vector<NodeId>& path, double weight, double gvi_sum) {
        const bool better =
            !found || weight < best.total_weight ||
            (weight == best.total_weight &&
             (path.size() < best.nodes.size() ||
              (path.size() == best.nodes.size() && lexicographically_less(path, best.nodes))));
        if (better) {
          found = true;
          best.nodes = path;
          best.total_weight = weight;
          best.avg_gvi = gvi_sum / static_cast<double>(path.size() - 1);
        }
      },
      // Weights are non-negative, so a prefix already worse than the best
      // complete path can never win.
      [&](double prefix_weight) { return found && prefix_weight > best.total_weight; });
  if (!found) {
    throw Error(Errc::NoPath, "no path from node " + std::to_string(start) + " to node " +
                                  std::to_string(dest));
  }
  return best;
}

ExhaustivePath max_average_gvi_path(const WeightedGraph& graph, NodeId start, NodeId dest) {
  check_brute_force(graph, start, dest);
  ExhaustivePath best;
  double best_sum = 0.0;
  bool found = false;
  for_each_simple_path(
      graph, start, dest,
      [&](const std::vector<NodeId>& path, double weight, double gvi_sum) {
        const auto edges = static_cast<double>(path.size() - 1);
        const auto best_edges = static_cast<double>(best.nodes.size() - 1);
        // Compare means by cross-multiplication to avoid rounding in division.
        const double lhs = gvi_sum * best_edges;
        const double rhs = best_sum * edges;
        const bool better =
            !found || lhs > rhs ||
            (lhs == rhs &&
             (path.size() < best.nodes.size() ||
              (path.size() == best.nodes.size() && lexicographically_less(path, best.nodes))));
        if (better) {
          found = true;
          best.nodes = path;
          best.total_weight = weight;
          best_sum = gvi_sum;
          best.avg_gvi = gvi_sum / edges;
        }
      },
      [](double) { return false; });
  if (!found) {
    throw Error(Errc::NoPath, "no path from node " + std::to_string(start) + " to node " +
                                  std::to_string(dest));
  }
  return best;
}

}  // namespace gvipath
