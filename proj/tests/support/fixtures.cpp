#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace gvipath::testing {

std::vector<EdgeGvi> random_edges(const RandomGraphOptions& options, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> integer_gvi(0, 100);
  auto draw_gvi = [&] {
    return options.integer_gvi ? static_cast<double>(integer_gvi(rng)) : 100.0 * unit(rng);
  };

  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<EdgeGvi> edges;
  auto add = [&](NodeId u, NodeId v) {
    if (u == v) return;
    auto key = options.directed ? std::pair{u, v} : std::pair{std::min(u, v), std::max(u, v)};
    if (!used.insert(key).second) return;
    edges.push_back({u, v, draw_gvi()});
  };

  const auto n = static_cast<NodeId>(options.n);
  if (options.connected && n > 1) {
    std::vector<NodeId> order(n);
    for (NodeId i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (NodeId i = 1; i < n; ++i) {
      std::uniform_int_distribution<NodeId> pick(0, i - 1);
      const NodeId parent = order[pick(rng)];
      add(parent, order[i]);
      if (options.directed) add(order[i], parent);
    }
  }
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = options.directed ? 0 : u + 1; v < n; ++v) {
      if (u != v && unit(rng) < options.edge_probability) add(u, v);
    }
  }
  return edges;
}

WeightedGraph random_graph(const RandomGraphOptions& options, std::mt19937_64& rng) {
  const auto edges = random_edges(options, rng);
  return build_adjacency_matrix(options.n, edges, options.directed);
}

WeightedGraph triangle_graph() {
  const std::vector<EdgeGvi> edges = {{0, 1, 80.0}, {1, 2, 80.0}, {0, 2, 30.0}};
  return build_adjacency_matrix(3, edges, false);
}

StreetNetwork grid_network(std::size_t rows, std::size_t cols, double spacing_deg) {
  constexpr double kLat0 = 34.66;
  constexpr double kLon0 = 135.49;
  const double lon_step = spacing_deg / std::cos(kLat0 * std::numbers::pi / 180.0);
  std::vector<GeoNode> nodes;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      GeoNode node;
      node.id = static_cast<NodeId>(nodes.size());
      node.external_id = "r" + std::to_string(r) + "c" + std::to_string(c);
      // row 0 is the northern edge
      node.lat = kLat0 - static_cast<double>(r) * spacing_deg;
      node.lon = kLon0 + static_cast<double>(c) * lon_step;
      nodes.push_back(std::move(node));
    }
  }
  std::vector<StreetEdge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), std::nullopt});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), std::nullopt});
    }
  }
  return StreetNetwork(std::move(nodes), std::move(edges));
}

}  // namespace gvipath::testing
