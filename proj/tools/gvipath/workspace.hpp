#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "gvipath/gvi.hpp"
#include "gvipath/network.hpp"

namespace gvipath::cli {

// An ingested workspace is a directory holding:
//   network.json      normalised network document (serialize_network output)
//   observations.csv  observation table, rows resolved against the network
//   manifest.json     format version, ingestion time and counts
// Builds read only these files, so they can be repeated without the raw inputs.

inline constexpr int kWorkspaceFormat = 1;

struct WorkspaceManifest {
  int format = kWorkspaceFormat;
  std::int64_t created_at = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t invalid_nodes = 0;
  std::size_t duplicate_edges = 0;
  std::size_t dropped_edges = 0;
  std::size_t observations = 0;
  std::size_t skipped_observations = 0;
};

struct Workspace {
  StreetNetwork network;
  std::vector<ObservationRow> observations;
  WorkspaceManifest manifest;
};

void save_workspace(const Workspace& workspace, const std::filesystem::path& dir);
Workspace load_workspace(const std::filesystem::path& dir);

/// Observations grouped by resolved node; rows for invalid nodes are left out.
std::map<NodeId, std::vector<ViewObservation>> resolve_observations(const Workspace& workspace);

/// Node GVI for every valid node that has observations.
std::map<NodeId, NodeGvi> node_gvis(const std::map<NodeId, std::vector<ViewObservation>>& obs);

std::vector<std::optional<double>> node_gvi_column(std::size_t n,
                                                   const std::map<NodeId, NodeGvi>& gvis);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace gvipath::cli
