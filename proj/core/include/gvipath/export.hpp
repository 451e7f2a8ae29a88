#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "gvipath/graph.hpp"
#include "gvipath/network.hpp"
#include "gvipath/routing.hpp"

namespace gvipath {

/// Rounds to two decimals, the precision used for every exported percentage.
double round2(double value) noexcept;

/// FeatureCollection with one Point per node (gvi_avg, band, color) followed
/// by one LineString per street edge (gvi, band, color). Coordinates are
/// [lon, lat]. For directed tables a line carries the mean of its two
/// directions plus gvi_forward / gvi_backward.
std::string network_geojson(const StreetNetwork& network,
                            std::span<const std::optional<double>> node_gvi,
                            std::span<const EdgeGvi> edge_gvis, bool directed);

void export_network_geojson(const StreetNetwork& network,
                            std::span<const std::optional<double>> node_gvi,
                            std::span<const EdgeGvi> edge_gvis, bool directed,
                            const std::filesystem::path& path);

/// FeatureCollection: the route LineString (avg_gvi, node_count, band, ...)
/// then Points for the start and the destination.
std::string route_geojson(const RoutePlan& route, const StreetNetwork& network);

void export_route_geojson(const RoutePlan& route, const StreetNetwork& network,
                          const std::filesystem::path& path);

}  // namespace gvipath
