#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gvipath/graph.hpp"
#include "gvipath/network.hpp"

namespace gvipath::testing {

struct RandomGraphOptions {
  std::size_t n = 10;
  double edge_probability = 0.3;
  bool directed = false;
  bool integer_gvi = true;
  // adds a random spanning tree first so every pair is reachable
  bool connected = true;
};

std::vector<EdgeGvi> random_edges(const RandomGraphOptions& options, std::mt19937_64& rng);
WeightedGraph random_graph(const RandomGraphOptions& options, std::mt19937_64& rng);

/// Nodes A=0, B=1, C=2; GVI(A,B) = GVI(B,C) = 80, GVI(A,C) = 30.
WeightedGraph triangle_graph();

/// rows x cols lattice around Osaka; node ids "r<row>c<col>", 4-neighbour
/// edges, spacing in degrees of latitude (longitude scaled to keep squares).
StreetNetwork grid_network(std::size_t rows, std::size_t cols, double spacing_deg = 0.001);

}  // namespace gvipath::testing
