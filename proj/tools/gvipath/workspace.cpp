#include "workspace.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gvipath/error.hpp"

namespace gvipath::cli {

namespace {

constexpr const char* kNetworkFile = "network.json";
constexpr const char* kObservationsFile = "observations.csv";
constexpr const char* kManifestFile = "manifest.json";

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw Error(Errc::IoFailure, "failed writing " + path.string());
}

void save_workspace(const Workspace& workspace, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create workspace " + dir.string());

  const WorkspaceManifest& m = workspace.manifest;
  nlohmann::ordered_json manifest;
  manifest["format"] = m.format;
  manifest["created_at"] = m.created_at;
  manifest["nodes"] = m.nodes;
  manifest["edges"] = m.edges;
  manifest["invalid_nodes"] = m.invalid_nodes;
  manifest["duplicate_edges"] = m.duplicate_edges;
  manifest["dropped_edges"] = m.dropped_edges;
  manifest["observations"] = m.observations;
  manifest["skipped_observations"] = m.skipped_observations;

  write_file(dir / kNetworkFile, serialize_network(workspace.network));
  write_file(dir / kObservationsFile, write_observation_table(workspace.observations));
  write_file(dir / kManifestFile, manifest.dump(2) + "\n");
}

Workspace load_workspace(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::IoFailure, "workspace " + dir.string() + " does not exist; run ingest");
  }
  Workspace ws;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(dir / kManifestFile));
    ws.manifest.format = manifest.at("format").get<int>();
    ws.manifest.created_at = manifest.at("created_at").get<std::int64_t>();
    ws.manifest.nodes = manifest.at("nodes").get<std::size_t>();
    ws.manifest.edges = manifest.at("edges").get<std::size_t>();
    ws.manifest.invalid_nodes = manifest.value("invalid_nodes", std::size_t{0});
    ws.manifest.duplicate_edges = manifest.value("duplicate_edges", std::size_t{0});
    ws.manifest.dropped_edges = manifest.value("dropped_edges", std::size_t{0});
    ws.manifest.observations = manifest.value("observations", std::size_t{0});
    ws.manifest.skipped_observations = manifest.value("skipped_observations", std::size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument,
                "workspace manifest " + (dir / kManifestFile).string() + ": " + e.what());
  }
  if (ws.manifest.format != kWorkspaceFormat) {
    throw Error(Errc::VersionUnsupported,
                "workspace format " + std::to_string(ws.manifest.format) + " not supported");
  }
  ws.network = parse_network(read_file(dir / kNetworkFile)).network;
  ws.observations = parse_observation_table(read_file(dir / kObservationsFile));
  return ws;
}

std::map<NodeId, std::vector<ViewObservation>> resolve_observations(const Workspace& workspace) {
  std::map<NodeId, std::vector<ViewObservation>> grouped;
  for (const ObservationRow& row : workspace.observations) {
    const auto id = workspace.network.find(row.node_id);
    if (!id) {
      throw Error(Errc::UnknownNode, "workspace observation references unknown node " +
                                         row.node_id);
    }
    if (!workspace.network.node(*id).valid) continue;
    grouped[*id].push_back({*id, row.heading_deg, row.measurement});
  }
  return grouped;
}

std::map<NodeId, NodeGvi> node_gvis(const std::map<NodeId, std::vector<ViewObservation>>& obs) {
  std::map<NodeId, NodeGvi> out;
  for (const auto& [id, views] : obs) out.emplace(id, node_gvi(views));
  return out;
}

std::vector<std::optional<double>> node_gvi_column(std::size_t n,
                                                   const std::map<NodeId, NodeGvi>& gvis) {
  std::vector<std::optional<double>> column(n);
  for (const auto& [id, gvi] : gvis) column.at(id) = gvi.gvi_avg;
  return column;
}

}  // namespace gvipath::cli
