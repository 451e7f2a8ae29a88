#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gvipath/export.hpp"
#include "gvipath/graph.hpp"
#include "gvipath/routing.hpp"
#include "gvipath/service.hpp"
#include "gvipath/store.hpp"
#include "workspace.hpp"

namespace gvipath::cli {

namespace fs = std::filesystem;

namespace {

std::int64_t ingestion_time() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    return std::strtoll(epoch, nullptr, 10);
  }
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void apply_thread_env() {
  if (const char* threads = std::getenv("GVIPATH_THREADS"); threads && *threads) {
    set_worker_threads(std::atoi(threads));
  }
}

// Raster files are named <node_id>_<heading>.txt.
std::optional<std::pair<std::string, double>> raster_key(const fs::path& file) {
  if (file.extension() != ".txt") return std::nullopt;
  const std::string stem = file.stem().string();
  const auto split = stem.rfind('_');
  if (split == std::string::npos || split == 0) return std::nullopt;
  try {
    std::size_t used = 0;
    const double heading = std::stod(stem.substr(split + 1), &used);
    if (used != stem.size() - split - 1) return std::nullopt;
    return std::pair{stem.substr(0, split), heading};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct IngestOptions {
  std::string network;
  std::string observations;
  std::string rasters;
  std::string classes;
  std::string workspace = "gvi_workspace";
};

int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err) {
  const ParsedNetwork parsed = parse_network(read_file(opts.network));
  for (const auto& warning : parsed.report.warnings) err << "warning: " << warning << '\n';

  Workspace ws;
  ws.network = parsed.network;
  std::size_t skipped = 0;
  auto accept = [&](ObservationRow row, const std::string& source) {
    if (!ws.network.find(row.node_id)) {
      ++skipped;
      err << "warning: " << source << ": unknown node " << row.node_id << ", skipped\n";
      return;
    }
    ws.observations.push_back(std::move(row));
  };

  if (!opts.observations.empty()) {
    for (auto& row : parse_observation_table(read_file(opts.observations))) {
      const std::string where = opts.observations + ":" + std::to_string(row.line);
      accept(std::move(row), where);
    }
  }
  if (!opts.rasters.empty()) {
    if (!fs::is_directory(opts.rasters)) {
      throw Error(Errc::IoFailure, "raster directory " + opts.rasters + " does not exist");
    }
    const ClassTable table = opts.classes.empty() ? cityscapes_class_table()
                                                  : parse_class_table(read_file(opts.classes));
    const GreeneryClassSet greenery = GreeneryClassSet::from_table(table);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opts.rasters)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      const auto key = raster_key(file);
      if (!key) {
        err << "warning: " << file.string() << ": not named <node>_<heading>.txt, ignored\n";
        continue;
      }
      const ClassRaster raster = parse_raster(read_file(file));
      ObservationRow row;
      row.node_id = key->first;
      row.heading_deg = key->second;
      row.measurement = ViewObservation::from_pixels(0, key->second,
                                                     count_greenery_pixels(raster, greenery),
                                                     raster.pixel_count())
                            .measurement;
      accept(std::move(row), file.string());
    }
  }

  // Reject per-node problems (duplicate headings, bad ranges) now, not at build.
  node_gvis(resolve_observations(ws));

  WorkspaceManifest& m = ws.manifest;
  m.created_at = ingestion_time();
  m.nodes = ws.network.node_count();
  m.edges = ws.network.edges().size();
  m.invalid_nodes = parsed.report.invalid_nodes;
  m.duplicate_edges = parsed.report.duplicate_edges;
  m.dropped_edges = parsed.report.dropped_edges;
  m.observations = ws.observations.size();
  m.skipped_observations = skipped;
  save_workspace(ws, opts.workspace);

  fmt::print(out, "nodes: {}, edges: {}, dropped: {}\n", m.nodes, m.edges, m.dropped_edges);
  fmt::print(out, "invalid nodes: {}\nduplicate edges: {}\n", m.invalid_nodes,
             m.duplicate_edges);
  fmt::print(out, "observations: {}, skipped: {}\n", m.observations, m.skipped_observations);
  fmt::print(out, "workspace: {}\n", opts.workspace);
  return kExitOk;
}

struct BuildOptions {
  std::string workspace = "gvi_workspace";
  std::string mode = "undirected";
  double tolerance = kDefaultHeadingToleranceDeg;
  std::string out;
  std::size_t block_size = kDefaultBlockSize;
  std::size_t max_nodes = kDefaultMaxNodes;
};

int cmd_build(const BuildOptions& opts, std::ostream& out, std::ostream& err) {
  apply_thread_env();
  const Workspace ws = load_workspace(opts.workspace);
  const auto observations = resolve_observations(ws);
  const auto gvis = node_gvis(observations);
  const std::size_t n = ws.network.node_count();
  if (n > opts.max_nodes) {
    throw Error(Errc::GraphTooLarge, fmt::format("network has {} nodes; limit is {}", n,
                                                 opts.max_nodes));
  }

  const bool directed = opts.mode == "directional";
  const EdgeGviTable table = directed
                                 ? assign_edge_gvi_directional(ws.network, observations,
                                                               opts.tolerance)
                                 : assign_edge_gvi_undirected(ws.network, gvis);
  if (!table.dropped.empty()) {
    fmt::print(err, "warning: missing_node_gvi: {} edge(s) dropped for lack of GVI data\n",
               table.dropped.size());
    for (const StreetEdge& e : table.dropped) {
      fmt::print(err, "  dropped {}-{}\n", ws.network.node(e.u).external_id,
                 ws.network.node(e.v).external_id);
    }
  }
  if (!table.fallbacks.empty()) {
    fmt::print(err, "warning: {} directed edge(s) had no heading within {} deg; used node "
                    "average\n",
               table.fallbacks.size(), opts.tolerance);
  }

  const WeightedGraph graph = build_adjacency_matrix(n, table.entries, directed, opts.max_nodes);
  const auto started = std::chrono::steady_clock::now();
  const ApspResult apsp = floyd_warshall_blocked(graph, opts.block_size, opts.max_nodes);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

  save_apsp(apsp, graph, ws.network, node_gvi_column(n, gvis), ws.manifest.created_at,
            opts.out);
  fmt::print(out, "archive: {}\nn: {}\nmode: {}\nedges: {}\nthreads: {}\nsolve: {:.3f} s\n",
             opts.out, n, opts.mode, table.entries.size(), worker_threads(), elapsed.count());
  return kExitOk;
}

struct RouteOptions {
  std::string archive;
  std::string from;
  std::string to;
  std::string format = "text";
  std::string out;
};

int cmd_route(const RouteOptions& opts, std::ostream& out, std::ostream&) {
  const ApspArchive archive = load_apsp(opts.archive);
  const auto start = archive.network.find(opts.from);
  if (!start) throw Error(Errc::UnknownNode, "unknown node " + opts.from);
  const auto dest = archive.network.find(opts.to);
  if (!dest) throw Error(Errc::UnknownNode, "unknown node " + opts.to);

  const RoutePlan plan = greenest_path(archive.apsp, archive.graph, *start, *dest);
  if (opts.format == "geojson") {
    const std::string doc = route_geojson(plan, archive.network);
    if (opts.out.empty()) {
      out << doc;
    } else {
      write_file(opts.out, doc);
    }
    return kExitOk;
  }
  std::string ids;
  for (NodeId id : plan.nodes) {
    if (!ids.empty()) ids += ' ';
    ids += archive.network.node(id).external_id;
  }
  fmt::print(out, "{}, avg {:.2f}%, nodes {}, band {}\n", ids, plan.avg_gvi, plan.node_count(),
             band_name(plan.band));
  return kExitOk;
}

struct StatsOptions {
  std::string archive;
  std::string workspace;
};

int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream&) {
  std::vector<double> values;
  if (!opts.archive.empty()) {
    const ApspArchive archive = load_apsp(opts.archive);
    for (const GeoNode& node : archive.network.nodes()) {
      if (node.valid && archive.node_gvi[node.id]) values.push_back(*archive.node_gvi[node.id]);
    }
  } else {
    const Workspace ws = load_workspace(opts.workspace);
    for (const auto& [id, gvi] : node_gvis(resolve_observations(ws))) {
      values.push_back(gvi.gvi_avg);
    }
  }
  const BandDistribution dist = gvi_distribution(values);
  for (GviBand band : kAllBands) {
    const auto b = static_cast<std::size_t>(band);
    fmt::print(out, "{} {} ({:.2f}%)\n", band_name(band), dist.counts[b], dist.percent[b]);
  }
  fmt::print(out, "total {}\n", dist.total);
  return kExitOk;
}

struct ExportOptions {
  std::string archive;
  std::string out;
};

int cmd_export(const ExportOptions& opts, std::ostream& out, std::ostream&) {
  const ApspArchive archive = load_apsp(opts.archive);
  const std::string doc = network_geojson(archive.network, archive.node_gvi,
                                          edge_list(archive.graph), archive.graph.directed);
  if (opts.out.empty()) {
    out << doc;
  } else {
    write_file(opts.out, doc);
  }
  return kExitOk;
}

struct ServeOptions {
  std::string archive;
  ServerOptions server;
};

int cmd_serve(const ServeOptions& opts, std::ostream& out, std::ostream&) {
  std::shared_ptr<const ApspArchive> archive;
  if (!opts.archive.empty()) archive = std::make_shared<ApspArchive>(load_apsp(opts.archive));
  auto service = std::make_shared<QueryService>(archive);
  HttpServer server(service, opts.server);
  const int port = server.bind();
  fmt::print(out, "listening on http://{}:{}\n", opts.server.host, port);
  out.flush();
  server.serve();
  return kExitOk;
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::NoPath: return kExitNoPath;
    case Errc::GraphTooLarge:
    case Errc::TooLargeForBruteForce: return kExitResource;
    case Errc::SameNode: return kExitUsage;
    default: return kExitData;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greenest-route engine: street-level GVI, all-pairs routing, map export",
               "gvipath"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate inputs into a workspace");
  ingest_cmd->add_option("--network", ingest.network, "Network document (JSON)")->required();
  ingest_cmd->add_option("--obs", ingest.observations, "Observation table (CSV)");
  ingest_cmd->add_option("--rasters", ingest.rasters,
                         "Directory of <node>_<heading>.txt class rasters");
  ingest_cmd->add_option("--classes", ingest.classes, "Class table (CSV index,name)");
  ingest_cmd->add_option("--workspace", ingest.workspace, "Workspace directory to write")
      ->capture_default_str();

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Assign edge GVI, solve all pairs, archive");
  build_cmd->add_option("--workspace", build.workspace, "Ingested workspace")
      ->capture_default_str();
  build_cmd->add_option("--mode", build.mode, "Edge GVI assignment")
      ->check(CLI::IsMember({"undirected", "directional"}))
      ->capture_default_str();
  build_cmd->add_option("--tolerance", build.tolerance, "Heading match tolerance, degrees")
      ->check(CLI::Range(0.0, 90.0))
      ->capture_default_str();
  build_cmd->add_option("--out", build.out, "Archive to write (.gvip)")->required();
  build_cmd->add_option("--block-size", build.block_size, "Tile size of the solver")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build_cmd->add_option("--max-nodes", build.max_nodes, "Refuse larger networks")
      ->capture_default_str();

  RouteOptions route;
  auto* route_cmd = app.add_subcommand("route", "Greenest route between two nodes");
  route_cmd->add_option("--archive", route.archive, "Archive (.gvip)")->required();
  route_cmd->add_option("--from", route.from, "Start node id")->required();
  route_cmd->add_option("--to", route.to, "Destination node id")->required();
  route_cmd->add_option("--format", route.format, "Output format")
      ->check(CLI::IsMember({"text", "geojson"}))
      ->capture_default_str();
  route_cmd->add_option("--out", route.out, "Write GeoJSON here instead of stdout");

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand("stats", "Node GVI distribution over the four bands");
  auto* stats_archive = stats_cmd->add_option("--archive", stats.archive, "Archive (.gvip)");
  auto* stats_ws = stats_cmd->add_option("--workspace", stats.workspace, "Ingested workspace");
  stats_archive->excludes(stats_ws);
  stats_cmd->require_option(1);

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export", "Network GeoJSON from an archive");
  export_cmd->add_option("--archive", exp.archive, "Archive (.gvip)")->required();
  export_cmd->add_option("--out", exp.out, "Output file (default stdout)");

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP query service over an archive");
  serve_cmd->add_option("--archive", serve.archive, "Archive loaded at startup");
  serve_cmd->add_option("--host", serve.server.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", serve.server.port, "Listen port (0 = any)")
      ->capture_default_str();
  serve_cmd->add_flag("--cors", serve.server.cors, "Send permissive CORS headers");

  std::vector<const char*> argv{"gvipath"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out, err);
    if (*build_cmd) return cmd_build(build, out, err);
    if (*route_cmd) return cmd_route(route, out, err);
    if (*stats_cmd) return cmd_stats(stats, out, err);
    if (*export_cmd) return cmd_export(exp, out, err);
    if (*serve_cmd) return cmd_serve(serve, out, err);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitResource;
  }
  return kExitUsage;
}

}  // namespace gvipath::cli
