#include "gvipath/graph.hpp"

#include <cmath>
#include <limits>

#include "gvipath/error.hpp"
#include "text.hpp"

namespace gvipath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gvi(double gvi) {
  if (!(gvi >= 0.0 && gvi <= 100.0)) {
    throw Error(Errc::OutOfRange, "edge GVI must be in [0, 100], got " +
                                      text::format_double(gvi));
  }
}

}  // namespace

void EdgeGviAssignment::validate() const {
  if (!(heading_tolerance_deg > 0.0 && heading_tolerance_deg <= 90.0)) {
    throw Error(Errc::OutOfRange, "heading tolerance must be in (0, 90], got " +
                                      text::format_double(heading_tolerance_deg));
  }
}

double transform_weight(double gvi_percent) {
  check_gvi(gvi_percent);
  return 100.0 - gvi_percent;
}

EdgeGviTable assign_edge_gvi_undirected(const StreetNetwork& network,
                                        const std::map<NodeId, NodeGvi>& node_gvis) {
  EdgeGviTable table;
  table.directed = false;
  for (const StreetEdge& edge : network.edges()) {
    if (!network.node(edge.u).valid || !network.node(edge.v).valid) {
      table.dropped.push_back(edge);
      continue;
    }
    const auto u = node_gvis.find(edge.u);
    const auto v = node_gvis.find(edge.v);
    if (u == node_gvis.end() || v == node_gvis.end()) {
      table.dropped.push_back(edge);
      continue;
    }
    table.entries.push_back({edge.u, edge.v, (u->second.gvi_avg + v->second.gvi_avg) / 2.0});
  }
  return table;
}

EdgeGviTable assign_edge_gvi_directional(
    const StreetNetwork& network,
    const std::map<NodeId, std::vector<ViewObservation>>& observations,
    double tolerance_deg) {
  EdgeGviAssignment{AssignmentMode::DirectionalHeading, tolerance_deg}.validate();

  // Per-node heading tables, computed once per origin.
  std::map<NodeId, NodeGvi> summaries;
  auto summary_for = [&](NodeId node) -> const NodeGvi& {
    if (auto it = summaries.find(node); it != summaries.end()) return it->second;
    const auto obs = observations.find(node);
    if (obs == observations.end() || obs->second.empty()) {
      throw Error(Errc::NoObservations, "node " + network.node(node).external_id +
                                            " has edges but no view observations");
    }
    return summaries.emplace(node, node_gvi(obs->second)).first->second;
  };

  EdgeGviTable table;
  table.directed = true;
  for (const StreetEdge& edge : network.edges()) {
    if (!network.node(edge.u).valid || !network.node(edge.v).valid) {
      table.dropped.push_back(edge);
      continue;
    }
    for (const auto& [from, to] : {std::pair{edge.u, edge.v}, std::pair{edge.v, edge.u}}) {
      const NodeGvi& origin = summary_for(from);
      const double bearing = edge_bearing(network.node(from), network.node(to));

      const double* best = nullptr;
      double best_distance = kInf;
      // per_heading iterates in ascending heading order, so strict < keeps
      // the lower heading on ties.
      for (const auto& [heading, gvi] : origin.per_heading) {
        const double d = angular_distance(heading, bearing);
        if (d <= tolerance_deg && d < best_distance) {
          best_distance = d;
          best = &gvi;
        }
      }
      if (best) {
        table.entries.push_back({from, to, *best});
      } else {
        table.entries.push_back({from, to, origin.gvi_avg});
        table.fallbacks.push_back({from, to, bearing});
      }
    }
  }
  return table;
}

WeightedGraph build_adjacency_matrix(std::size_t n, std::span<const EdgeGvi> edges,
                                     bool directed, std::size_t max_nodes) {
  if (n > max_nodes) {
    throw Error(Errc::GraphTooLarge,
                "graph has " + std::to_string(n) + " nodes; dense build is capped at " +
                    std::to_string(max_nodes) + " (n^2 memory)");
  }
  WeightedGraph graph;
  graph.n = n;
  graph.directed = directed;
  graph.weight = Matrix<double>(n, n, kInf);
  graph.gvi = Matrix<double>(n, n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) graph.weight(i, i) = 0.0;

  auto set_cell = [&](NodeId u, NodeId v, double gvi) {
    const double weight = std::ldexp(
        std::nearbyint(std::ldexp(transform_weight(gvi), kWeightGridBits)), -kWeightGridBits);
    gvi = 100.0 - weight;
    if (std::isfinite(graph.weight(u, v))) {
      if (graph.gvi(u, v) != gvi) {
        throw Error(Errc::DuplicateEdgeConflict,
                    "edge " + std::to_string(u) + "->" + std::to_string(v) +
                        " listed with GVI " + text::format_double(graph.gvi(u, v)) +
                        " and " + text::format_double(gvi));
      }
      return;
    }
    graph.weight(u, v) = weight;
    graph.gvi(u, v) = gvi;
  };

  for (const EdgeGvi& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(Errc::IndexOutOfBounds, "edge " + std::to_string(e.u) + "->" +
                                              std::to_string(e.v) + " outside n = " +
                                              std::to_string(n));
    }
    if (e.u == e.v) {
      throw Error(Errc::SelfLoop, "self-loop at node " + std::to_string(e.u));
    }
    check_gvi(e.gvi);
    set_cell(e.u, e.v, e.gvi);
    if (!directed) set_cell(e.v, e.u, e.gvi);
  }
  return graph;
}

std::vector<EdgeGvi> edge_list(const WeightedGraph& graph) {
  std::vector<EdgeGvi> out;
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j = graph.directed ? 0 : i + 1; j < graph.n; ++j) {
      if (graph.has_edge(i, j)) {
        out.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), graph.gvi(i, j)});
      }
    }
  }
  return out;
}

std::vector<EdgeGvi> parse_adjacency_table(std::string_view document) {
  const auto all = text::lines(document);
  std::size_t i = 0;
  while (i < all.size() && text::trim(all[i]).empty()) ++i;
  if (i == all.size() || text::split(all[i], ',').size() != 3 ||
      text::trim(text::split(all[i], ',')[0]) != "u") {
    throw Error(Errc::MalformedDocument, "adjacency table needs the header u,v,gvi_percent");
  }
  std::vector<EdgeGvi> edges;
  for (++i; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    const auto fields = text::split(all[i], ',');
    const auto u = fields.size() == 3 ? text::parse_int<NodeId>(fields[0]) : std::nullopt;
    const auto v = fields.size() == 3 ? text::parse_int<NodeId>(fields[1]) : std::nullopt;
    const auto g = fields.size() == 3 ? text::parse_double(fields[2]) : std::nullopt;
    if (!u || !v || !g) {
      throw Error(Errc::MalformedDocument,
                  "adjacency table line " + std::to_string(i + 1) + ": expected u,v,gvi");
    }
    check_gvi(*g);
    edges.push_back({*u, *v, *g});
  }
  return edges;
}

std::string write_adjacency_table(std::span<const EdgeGvi> edges) {
  std::string out = "u,v,gvi_percent\n";
  for (const EdgeGvi& e : edges) {
    out += std::to_string(e.u) + ',' + std::to_string(e.v) + ',' +
           text::format_double(e.gvi) + '\n';
  }
  return out;
}

}  // namespace gvipath
