#include "gvipath/service.hpp"

#include <cmath>
#include <utility>

#include <httplib.h>

#include "geojson.hpp"
#include "gvipath/error.hpp"
#include "gvipath/export.hpp"

namespace gvipath {

namespace {

using geojson::Json;

constexpr const char* kJson = "application/json";
constexpr const char* kGeoJson = "application/geo+json";

HttpResponse json_response(int status, const Json& body, const char* type = kJson) {
  return {status, type, body.dump() + "\n"};
}

HttpResponse error_response(int status, std::string_view code, const std::string& message) {
  Json body;
  body["error"] = {{"code", code}, {"message", message}};
  return json_response(status, body);
}

HttpResponse not_loaded() {
  return error_response(503, "not_loaded", "no archive is loaded");
}

}  // namespace

QueryService::QueryService(std::shared_ptr<const ApspArchive> archive)
    : archive_(std::move(archive)) {
  if (archive_) edge_gvis_ = edge_list(archive_->graph);
}

HttpResponse QueryService::health() const {
  Json body;
  if (!archive_) {
    body["status"] = "empty";
    body["loaded"] = false;
    return json_response(200, body);
  }
  body["status"] = "ok";
  body["n"] = archive_->apsp.n;
  body["loaded"] = true;
  body["directed"] = archive_->graph.directed;
  body["built_at"] = archive_->built_at;
  return json_response(200, body);
}

HttpResponse QueryService::nodes() const {
  if (!archive_) return not_loaded();
  Json list = Json::array();
  for (const GeoNode& node : archive_->network.nodes()) {
    if (!node.valid) continue;
    Json item;
    item["id"] = node.external_id;
    item["lat"] = node.lat;
    item["lon"] = node.lon;
    const auto gvi = archive_->node_gvi[node.id];
    item["gvi_avg"] = gvi ? Json(round2(*gvi)) : Json(nullptr);
    item["band"] = gvi ? Json(band_name(classify_band(*gvi))) : Json(nullptr);
    list.push_back(std::move(item));
  }
  return json_response(200, list);
}

HttpResponse QueryService::route(const std::optional<std::string>& from,
                                 const std::optional<std::string>& to) const {
  if (!archive_) return not_loaded();
  if (!from || !to || from->empty() || to->empty()) {
    return error_response(400, "missing_parameter", "both from and to are required");
  }
  const auto start = archive_->network.find(*from);
  const auto dest = archive_->network.find(*to);
  if (!start || !dest) {
    return error_response(404, to_string(Errc::UnknownNode),
                          "unknown node " + (start ? *to : *from));
  }
  try {
    const RoutePlan plan = greenest_path(archive_->apsp, archive_->graph, *start, *dest);
    Json body = geojson::route_collection(plan, archive_->network);
    body["summary"] = geojson::route_summary(plan, archive_->network);
    return json_response(200, body, kGeoJson);
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::SameNode: return error_response(400, to_string(e.code()), e.what());
      case Errc::NoPath: return error_response(409, to_string(e.code()), e.what());
      default: return error_response(500, to_string(e.code()), e.what());
    }
  }
}

HttpResponse QueryService::stats() const {
  if (!archive_) return not_loaded();
  std::vector<double> values;
  for (const GeoNode& node : archive_->network.nodes()) {
    if (node.valid && archive_->node_gvi[node.id]) values.push_back(*archive_->node_gvi[node.id]);
  }
  if (values.empty()) {
    return error_response(422, to_string(Errc::EmptyInput), "archive has no node GVI values");
  }
  const BandDistribution dist = gvi_distribution(values);
  static constexpr const char* kRanges[] = {"[0,10)", "[10,18)", "[18,25)", "[25,100]"};
  Json bands = Json::array();
  for (GviBand band : kAllBands) {
    const auto b = static_cast<std::size_t>(band);
    Json item;
    item["band"] = band_name(band);
    item["range"] = kRanges[b];
    item["count"] = dist.counts[b];
    item["percent"] = round2(dist.percent[b]);
    item["color"] = band_color(band);
    bands.push_back(std::move(item));
  }
  Json body;
  body["total"] = dist.total;
  body["bands"] = std::move(bands);
  return json_response(200, body);
}

HttpResponse QueryService::network_geojson() const {
  if (!archive_) return not_loaded();
  return {200, kGeoJson,
          gvipath::network_geojson(archive_->network, archive_->node_gvi, edge_gvis_,
                                   archive_->graph.directed)};
}

struct HttpServer::Impl {
  std::shared_ptr<const QueryService> service;
  ServerOptions options;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const QueryService> service, ServerOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  impl_->options = std::move(options);

  auto& server = impl_->server;
  const bool cors = impl_->options.cors;
  auto send = [cors](httplib::Response& res, const HttpResponse& out) {
    res.status = out.status;
    res.set_content(out.body, out.content_type);
    if (cors) res.set_header("Access-Control-Allow-Origin", "*");
  };
  auto param = [](const httplib::Request& req, const char* key) -> std::optional<std::string> {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
  };
  const QueryService* svc = impl_->service.get();

  server.Get("/health", [=](const httplib::Request&, httplib::Response& res) {
    send(res, svc->health());
  });
  server.Get("/nodes", [=](const httplib::Request&, httplib::Response& res) {
    send(res, svc->nodes());
  });
  server.Get("/route", [=](const httplib::Request& req, httplib::Response& res) {
    send(res, svc->route(param(req, "from"), param(req, "to")));
  });
  server.Get("/stats", [=](const httplib::Request&, httplib::Response& res) {
    send(res, svc->stats());
  });
  server.Get("/network.geojson", [=](const httplib::Request&, httplib::Response& res) {
    send(res, svc->network_geojson());
  });
  if (cors) {
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& opts = impl_->options;
  int port = opts.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(opts.host);
  } else if (!impl_->server.bind_to_port(opts.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(Errc::IoFailure, "cannot listen on " + opts.host + ":" +
                                     std::to_string(opts.port));
  }
  return port;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace gvipath
