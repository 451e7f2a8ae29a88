#include "gvipath/network.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include <json.hpp>

#include "gvipath/error.hpp"

namespace gvipath {

namespace {

using nlohmann::json;

bool coordinates_in_range(double lat, double lon) {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

std::pair<NodeId, NodeId> unordered_key(NodeId a, NodeId b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

std::string id_to_string(const json& id, std::string_view what) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) {
    return id.is_number_unsigned() ? std::to_string(id.get<std::uint64_t>())
                                   : std::to_string(id.get<std::int64_t>());
  }
  throw Error(Errc::MalformedDocument,
              std::string(what) + " must be a string or an integer");
}

double require_number(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw Error(Errc::MalformedDocument,
                std::string(where) + ": field \"" + key + "\" must be a number");
  }
  return it->get<double>();
}

}  // namespace

StreetNetwork::StreetNetwork(std::vector<GeoNode> nodes, std::vector<StreetEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  by_external_id_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const GeoNode& node = nodes_[i];
    if (node.id != i) {
      throw Error(Errc::MalformedDocument,
                  "node ids must be dense 0..N-1 in order; found " +
                      std::to_string(node.id) + " at position " + std::to_string(i));
    }
    if (!coordinates_in_range(node.lat, node.lon)) {
      throw Error(Errc::CoordinateOutOfRange,
                  "node " + node.external_id + " has coordinates out of range");
    }
    if (!by_external_id_.emplace(node.external_id, node.id).second) {
      throw Error(Errc::MalformedDocument, "duplicate node id " + node.external_id);
    }
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const StreetEdge& edge : edges_) {
    if (edge.u >= nodes_.size() || edge.v >= nodes_.size()) {
      throw Error(Errc::DanglingEndpoint, "edge references an unknown node index");
    }
    if (edge.u == edge.v) {
      throw Error(Errc::SelfLoop, "self-loop at node " + nodes_[edge.u].external_id);
    }
    if (edge.length_m && !(*edge.length_m >= 0.0)) {
      throw Error(Errc::MalformedDocument, "edge length must be >= 0");
    }
    if (!seen.insert(unordered_key(edge.u, edge.v)).second) {
      throw Error(Errc::MalformedDocument, "duplicate undirected edge " +
                                               nodes_[edge.u].external_id + "-" +
                                               nodes_[edge.v].external_id);
    }
  }
}

std::optional<NodeId> StreetNetwork::find(std::string_view external_id) const {
  auto it = by_external_id_.find(std::string(external_id));
  if (it == by_external_id_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const StreetNetwork& a, const StreetNetwork& b) {
  if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const GeoNode& x = a.nodes_[i];
    const GeoNode& y = b.nodes_[i];
    if (x.id != y.id || x.external_id != y.external_id || x.lat != y.lat ||
        x.lon != y.lon || x.valid != y.valid) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const StreetEdge& x = a.edges_[i];
    const StreetEdge& y = b.edges_[i];
    if (x.u != y.u || x.v != y.v || x.length_m != y.length_m) return false;
  }
  return true;
}

ParsedNetwork parse_network(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(Errc::MalformedDocument, std::string("network document: ") + e.what());
  }
  if (!root.is_object()) {
    throw Error(Errc::MalformedDocument, "network document must be an object");
  }
  auto nodes_it = root.find("nodes");
  auto edges_it = root.find("edges");
  if (nodes_it == root.end() || !nodes_it->is_array()) {
    throw Error(Errc::MalformedDocument, "network document needs a \"nodes\" array");
  }
  if (edges_it == root.end() || !edges_it->is_array()) {
    throw Error(Errc::MalformedDocument, "network document needs an \"edges\" array");
  }

  ParsedNetwork result;
  IngestionReport& report = result.report;

  std::vector<GeoNode> nodes;
  nodes.reserve(nodes_it->size());
  std::unordered_map<std::string, NodeId> index;
  for (const json& item : *nodes_it) {
    if (!item.is_object() || !item.contains("id")) {
      throw Error(Errc::MalformedDocument, "each node needs an \"id\"");
    }
    GeoNode node;
    node.id = static_cast<NodeId>(nodes.size());
    node.external_id = id_to_string(item["id"], "node id");
    node.lat = require_number(item, "lat", "node " + node.external_id);
    node.lon = require_number(item, "lon", "node " + node.external_id);
    if (auto valid = item.find("valid"); valid != item.end()) {
      if (!valid->is_boolean()) {
        throw Error(Errc::MalformedDocument,
                    "node " + node.external_id + ": \"valid\" must be a boolean");
      }
      node.valid = valid->get<bool>();
    }
    if (!coordinates_in_range(node.lat, node.lon)) {
      throw Error(Errc::CoordinateOutOfRange,
                  "node " + node.external_id + " has coordinates out of range");
    }
    if (!index.emplace(node.external_id, node.id).second) {
      throw Error(Errc::MalformedDocument, "duplicate node id " + node.external_id);
    }
    if (!node.valid) ++report.invalid_nodes;
    nodes.push_back(std::move(node));
  }

  std::vector<StreetEdge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const json& item : *edges_it) {
    if (!item.is_object() || !item.contains("u") || !item.contains("v")) {
      throw Error(Errc::MalformedDocument, "each edge needs \"u\" and \"v\"");
    }
    const std::string u_id = id_to_string(item["u"], "edge endpoint");
    const std::string v_id = id_to_string(item["v"], "edge endpoint");
    auto u = index.find(u_id);
    auto v = index.find(v_id);
    if (u == index.end() || v == index.end()) {
      throw Error(Errc::DanglingEndpoint, "edge " + u_id + "-" + v_id +
                                              " references unknown node " +
                                              (u == index.end() ? u_id : v_id));
    }
    if (u->second == v->second) {
      throw Error(Errc::SelfLoop, "self-loop at node " + u_id);
    }
    StreetEdge edge{u->second, v->second, std::nullopt};
    if (auto len = item.find("length_m"); len != item.end() && !len->is_null()) {
      if (!len->is_number() || len->get<double>() < 0.0) {
        throw Error(Errc::MalformedDocument,
                    "edge " + u_id + "-" + v_id + ": length_m must be a number >= 0");
      }
      edge.length_m = len->get<double>();
    }
    if (!seen.insert(unordered_key(edge.u, edge.v)).second) {
      ++report.duplicate_edges;
      report.warnings.push_back("duplicate edge " + u_id + "-" + v_id + " collapsed");
      continue;
    }
    if (!nodes[edge.u].valid || !nodes[edge.v].valid) {
      ++report.dropped_edges;
      report.warnings.push_back("edge " + u_id + "-" + v_id +
                                " dropped: endpoint flagged invalid");
      continue;
    }
    edges.push_back(edge);
  }

  result.network = StreetNetwork(std::move(nodes), std::move(edges));
  return result;
}

std::string serialize_network(const StreetNetwork& network) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const GeoNode& node : network.nodes()) {
    nlohmann::ordered_json item;
    item["id"] = node.external_id;
    item["lat"] = node.lat;
    item["lon"] = node.lon;
    item["valid"] = node.valid;
    nodes.push_back(std::move(item));
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const StreetEdge& edge : network.edges()) {
    nlohmann::ordered_json item;
    item["u"] = network.node(edge.u).external_id;
    item["v"] = network.node(edge.v).external_id;
    if (edge.length_m) item["length_m"] = *edge.length_m;
    edges.push_back(std::move(item));
  }
  nlohmann::ordered_json root;
  root["nodes"] = std::move(nodes);
  root["edges"] = std::move(edges);
  return root.dump(1) + "\n";
}

double edge_bearing(const GeoNode& from, const GeoNode& to) {
  if (from.lat == to.lat && from.lon == to.lon) {
    throw Error(Errc::CoincidentNodes, "nodes " + from.external_id + " and " +
                                           to.external_id + " share coordinates");
  }
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double phi1 = from.lat * kDeg;
  const double phi2 = to.lat * kDeg;
  const double dlambda = (to.lon - from.lon) * kDeg;
  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) -
                   std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  double bearing = std::atan2(y, x) / kDeg;
  bearing = std::fmod(bearing + 360.0, 360.0);
  // fmod can return 360 - tiny rounding, which is the same direction as 0.
  return bearing >= 360.0 ? 0.0 : bearing;
}

double angular_distance(double a_deg, double b_deg) noexcept {
  double d = std::fmod(std::fabs(a_deg - b_deg), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace gvipath
