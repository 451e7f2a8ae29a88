#pragma once

#include <optional>
#include <span>

#include <json.hpp>

#include "gvipath/graph.hpp"
#include "gvipath/network.hpp"
#include "gvipath/routing.hpp"

namespace gvipath::geojson {

using Json = nlohmann::ordered_json;

Json network_collection(const StreetNetwork& network,
                        std::span<const std::optional<double>> node_gvi,
                        std::span<const EdgeGvi> edge_gvis, bool directed);

Json route_collection(const RoutePlan& route, const StreetNetwork& network);

/// Summary block shared by route documents: ids, avg_gvi, band, counts.
Json route_summary(const RoutePlan& route, const StreetNetwork& network);

}  // namespace gvipath::geojson
