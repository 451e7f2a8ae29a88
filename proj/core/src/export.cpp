#include "gvipath/export.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <utility>

#include "geojson.hpp"
#include "gvipath/error.hpp"

namespace gvipath {

namespace geojson {

namespace {

Json position(const GeoNode& node) { return Json::array({node.lon, node.lat}); }

Json point(const GeoNode& node, Json properties) {
  Json feature;
  feature["type"] = "Feature";
  feature["geometry"] = {{"type", "Point"}, {"coordinates", position(node)}};
  feature["properties"] = std::move(properties);
  return feature;
}

Json line(Json coordinates, Json properties) {
  Json feature;
  feature["type"] = "Feature";
  feature["geometry"] = {{"type", "LineString"}, {"coordinates", std::move(coordinates)}};
  feature["properties"] = std::move(properties);
  return feature;
}

Json collection(Json features) {
  Json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc;
}

void put_gvi(Json& props, const char* key, std::optional<double> gvi) {
  if (gvi) {
    props[key] = round2(*gvi);
    props["band"] = band_name(classify_band(*gvi));
    props["color"] = band_color(classify_band(*gvi));
  } else {
    props[key] = nullptr;
    props["band"] = nullptr;
    props["color"] = nullptr;
  }
}

Json optional_number(std::optional<double> value) {
  return value ? Json(round2(*value)) : Json(nullptr);
}

const GeoNode& route_node(const StreetNetwork& network, NodeId id) {
  if (id >= network.node_count()) {
    throw Error(Errc::UnknownNode, "route node " + std::to_string(id) + " not in network");
  }
  return network.node(id);
}

}  // namespace

Json network_collection(const StreetNetwork& network,
                        std::span<const std::optional<double>> node_gvi,
                        std::span<const EdgeGvi> edge_gvis, bool directed) {
  if (node_gvi.size() != network.node_count()) {
    throw Error(Errc::DimensionMismatch, "node GVI table does not match the network");
  }
  std::map<std::pair<NodeId, NodeId>, double> by_pair;
  for (const EdgeGvi& e : edge_gvis) {
    if (e.u >= network.node_count() || e.v >= network.node_count()) {
      throw Error(Errc::UnknownNode, "edge GVI entry references an unknown node");
    }
    by_pair[{e.u, e.v}] = e.gvi;
    if (!directed) by_pair[{e.v, e.u}] = e.gvi;
  }
  auto lookup = [&](NodeId a, NodeId b) -> std::optional<double> {
    auto it = by_pair.find({a, b});
    if (it == by_pair.end()) return std::nullopt;
    return it->second;
  };

  Json features = Json::array();
  for (const GeoNode& node : network.nodes()) {
    Json props;
    props["kind"] = "node";
    props["id"] = node.external_id;
    props["valid"] = node.valid;
    put_gvi(props, "gvi_avg", node_gvi[node.id]);
    features.push_back(point(node, std::move(props)));
  }
  for (const StreetEdge& edge : network.edges()) {
    const GeoNode& u = network.node(edge.u);
    const GeoNode& v = network.node(edge.v);
    Json props;
    props["kind"] = "edge";
    props["u"] = u.external_id;
    props["v"] = v.external_id;
    const auto forward = lookup(edge.u, edge.v);
    const auto backward = lookup(edge.v, edge.u);
    std::optional<double> gvi;
    if (forward && backward) {
      gvi = directed ? (*forward + *backward) / 2.0 : *forward;
    } else {
      gvi = forward ? forward : backward;
    }
    put_gvi(props, "gvi", gvi);
    if (directed) {
      props["gvi_forward"] = optional_number(forward);
      props["gvi_backward"] = optional_number(backward);
    }
    features.push_back(line(Json::array({position(u), position(v)}), std::move(props)));
  }
  return collection(std::move(features));
}

Json route_summary(const RoutePlan& route, const StreetNetwork& network) {
  if (route.nodes.size() < 2) {
    throw Error(Errc::NoPath, "a route needs at least two nodes");
  }
  Json ids = Json::array();
  for (NodeId id : route.nodes) ids.push_back(route_node(network, id).external_id);
  Json summary;
  summary["from"] = ids.front();
  summary["to"] = ids.back();
  summary["avg_gvi"] = round2(route.avg_gvi);
  summary["band"] = band_name(route.band);
  summary["color"] = band_color(route.band);
  summary["node_count"] = route.node_count();
  summary["edge_count"] = route.edge_gvis.size();
  summary["total_weight"] = round2(route.total_weight);
  summary["nodes"] = std::move(ids);
  return summary;
}

Json route_collection(const RoutePlan& route, const StreetNetwork& network) {
  Json props = route_summary(route, network);
  props.erase("nodes");
  Json line_props;
  line_props["kind"] = "route";
  for (auto& [key, value] : props.items()) line_props[key] = value;

  Json coordinates = Json::array();
  for (NodeId id : route.nodes) coordinates.push_back(position(route_node(network, id)));

  const GeoNode& start = route_node(network, route.nodes.front());
  const GeoNode& dest = route_node(network, route.nodes.back());
  Json features = Json::array();
  features.push_back(line(std::move(coordinates), std::move(line_props)));
  features.push_back(point(start, {{"kind", "start"}, {"id", start.external_id}}));
  features.push_back(point(dest, {{"kind", "destination"}, {"id", dest.external_id}}));
  return collection(std::move(features));
}

}  // namespace geojson

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error(Errc::IoFailure, "failed writing " + path.string());
}

}  // namespace

double round2(double value) noexcept { return std::round(value * 100.0) / 100.0; }

std::string network_geojson(const StreetNetwork& network,
                            std::span<const std::optional<double>> node_gvi,
                            std::span<const EdgeGvi> edge_gvis, bool directed) {
  return geojson::network_collection(network, node_gvi, edge_gvis, directed).dump(2) + "\n";
}

void export_network_geojson(const StreetNetwork& network,
                            std::span<const std::optional<double>> node_gvi,
                            std::span<const EdgeGvi> edge_gvis, bool directed,
                            const std::filesystem::path& path) {
  write_text(path, network_geojson(network, node_gvi, edge_gvis, directed));
}

std::string route_geojson(const RoutePlan& route, const StreetNetwork& network) {
  return geojson::route_collection(route, network).dump(2) + "\n";
}

void export_route_geojson(const RoutePlan& route, const StreetNetwork& network,
                          const std::filesystem::path& path) {
  write_text(path, route_geojson(route, network));
}

}  // namespace gvipath
