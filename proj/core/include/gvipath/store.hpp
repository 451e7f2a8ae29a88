#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "gvipath/graph.hpp"
#include "gvipath/network.hpp"
#include "gvipath/routing.hpp"

namespace gvipath {

// Archive layout (.gvip), all integers little-endian:
//
//   offset  size  field
//   0       8     magic "GVIPAPSP"
//   8       4     u32 format version
//   12      4     u32 flags (bit 0: directed)
//   16      8     u64 n
//   24      8     i64 build timestamp, unix seconds
//   32      8     u64 payload byte count
//   40      8     u64 FNV-1a 64 checksum of the payload
//   48            payload:
//                   dist     n*n f64, row-major, +inf for unreachable
//                   parents  n*n i32, row-major, -1 = none
//                   nodes    n x {f64 lat, f64 lon, f64 gvi_avg (NaN = none),
//                                 u8 valid, u32 id_len, id_len bytes}
//                   u64 street edge count, then {u32 u, u32 v, f64 length (NaN = none)}
//                   u64 edge GVI count, then {u32 u, u32 v, f64 gvi}

inline constexpr std::array<char, 8> kArchiveMagic = {'G', 'V', 'I', 'P', 'A', 'P', 'S', 'P'};
inline constexpr std::uint32_t kArchiveVersion = 1;
inline constexpr std::size_t kArchiveHeaderSize = 48;

/// Everything a route query needs, reloaded from one archive.
struct ApspArchive {
  ApspResult apsp;
  WeightedGraph graph;
  StreetNetwork network;
  std::vector<std::optional<double>> node_gvi;
  std::int64_t built_at = 0;
};

std::uint64_t fnv1a64(std::span<const std::byte> bytes) noexcept;

std::vector<std::byte> encode_archive(const ApspResult& apsp, const WeightedGraph& graph,
                                      const StreetNetwork& network,
                                      std::span<const std::optional<double>> node_gvi,
                                      std::int64_t built_at);

ApspArchive decode_archive(std::span<const std::byte> bytes);

/// Writes the archive; identical inputs produce identical bytes.
void save_apsp(const ApspResult& apsp, const WeightedGraph& graph,
               const StreetNetwork& network, std::span<const std::optional<double>> node_gvi,
               std::int64_t built_at, const std::filesystem::path& path);

ApspArchive load_apsp(const std::filesystem::path& path);

}  // namespace gvipath
