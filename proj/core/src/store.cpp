#include "gvipath/store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "gvipath/error.hpp"

namespace gvipath {

namespace {

constexpr std::uint32_t kDirectedFlag = 1u;

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { bytes_.reserve(reserve); }

  void u8(std::uint8_t v) { bytes_.push_back(static_cast<std::byte>(v)); }
  void u32(std::uint32_t v) { put_le(v); }
  void i32(std::int32_t v) { put_le(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) { put_le(v); }
  void i64(std::int64_t v) { put_le(static_cast<std::uint64_t>(v)); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }
  void raw(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::byte*>(data);
    bytes_.insert(bytes_.end(), p, p + size);
  }

  std::vector<std::byte>& bytes() { return bytes_; }

 private:
  template <typename U>
  void put_le(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      bytes_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
    }
  }

  std::vector<std::byte> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return get_le<std::uint32_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(get_le<std::uint32_t>()); }
  std::uint64_t u64() { return get_le<std::uint64_t>(); }
  std::int64_t i64() { return static_cast<std::int64_t>(get_le<std::uint64_t>()); }
  double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
  std::span<const std::byte> take(std::size_t size) {
    if (size > remaining()) {
      throw Error(Errc::MalformedDocument, "archive payload ends early; n does not match");
    }
    auto out = bytes_.subspan(pos_, size);
    pos_ += size;
    return out;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  template <typename U>
  U get_le() {
    const auto b = take(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<std::uint8_t>(b[i])) << (8 * i);
    }
    return v;
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(std::span<const std::byte> bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (std::byte b : bytes) {
    hash ^= static_cast<std::uint8_t>(b);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::vector<std::byte> encode_archive(const ApspResult& apsp, const WeightedGraph& graph,
                                      const StreetNetwork& network,
                                      std::span<const std::optional<double>> node_gvi,
                                      std::int64_t built_at) {
  const std::size_t n = apsp.n;
  if (graph.n != n || network.node_count() != n || node_gvi.size() != n ||
      apsp.dist.rows() != n || apsp.parents.rows() != n) {
    throw Error(Errc::DimensionMismatch,
                "archive inputs disagree on the node count (apsp " + std::to_string(n) +
                    ", graph " + std::to_string(graph.n) + ", network " +
                    std::to_string(network.node_count()) + ")");
  }
  const auto gvi_edges = edge_list(graph);

  ByteWriter out(kArchiveHeaderSize + n * n * 12 + n * 40 + gvi_edges.size() * 16);
  out.raw(kArchiveMagic.data(), kArchiveMagic.size());
  out.u32(kArchiveVersion);
  out.u32(graph.directed ? kDirectedFlag : 0u);
  out.u64(n);
  out.i64(built_at);
  out.u64(0);  // payload size, patched below
  out.u64(0);  // checksum, patched below

  for (double d : apsp.dist.values()) out.f64(d);
  for (std::int32_t p : apsp.parents.values()) out.i32(p);
  for (const GeoNode& node : network.nodes()) {
    out.f64(node.lat);
    out.f64(node.lon);
    const auto gvi = node_gvi[node.id];
    out.f64(gvi ? *gvi : std::numeric_limits<double>::quiet_NaN());
    out.u8(node.valid ? 1 : 0);
    out.u32(static_cast<std::uint32_t>(node.external_id.size()));
    out.raw(node.external_id.data(), node.external_id.size());
  }
  out.u64(network.edges().size());
  for (const StreetEdge& edge : network.edges()) {
    out.u32(edge.u);
    out.u32(edge.v);
    out.f64(edge.length_m ? *edge.length_m : std::numeric_limits<double>::quiet_NaN());
  }
  out.u64(gvi_edges.size());
  for (const EdgeGvi& e : gvi_edges) {
    out.u32(e.u);
    out.u32(e.v);
    out.f64(e.gvi);
  }

  auto& bytes = out.bytes();
  const std::span<const std::byte> payload(bytes.data() + kArchiveHeaderSize,
                                           bytes.size() - kArchiveHeaderSize);
  ByteWriter trailer(16);
  trailer.u64(payload.size());
  trailer.u64(fnv1a64(payload));
  std::copy(trailer.bytes().begin(), trailer.bytes().end(), bytes.begin() + 32);
  return std::move(bytes);
}

ApspArchive decode_archive(std::span<const std::byte> bytes) {
  if (bytes.size() < kArchiveMagic.size() ||
      std::memcmp(bytes.data(), kArchiveMagic.data(), kArchiveMagic.size()) != 0) {
    throw Error(Errc::VersionUnsupported, "not a GVI path archive (bad magic)");
  }
  if (bytes.size() < kArchiveHeaderSize) {
    throw Error(Errc::ChecksumMismatch, "archive header is truncated");
  }
  ByteReader header(bytes.subspan(kArchiveMagic.size(), kArchiveHeaderSize - 8));
  const std::uint32_t version = header.u32();
  if (version != kArchiveVersion) {
    throw Error(Errc::VersionUnsupported,
                "archive format version " + std::to_string(version) + " is not supported");
  }
  const std::uint32_t flags = header.u32();
  const std::uint64_t n = header.u64();
  const std::int64_t built_at = header.i64();
  const std::uint64_t payload_size = header.u64();
  const std::uint64_t checksum = header.u64();

  const auto payload = bytes.subspan(kArchiveHeaderSize);
  if (payload.size() != payload_size) {
    throw Error(Errc::ChecksumMismatch,
                "archive payload is " + std::to_string(payload.size()) +
                    " bytes, header says " + std::to_string(payload_size));
  }
  if (fnv1a64(payload) != checksum) {
    throw Error(Errc::ChecksumMismatch, "archive checksum does not match its payload");
  }
  // Guard the n*n allocations against a header that lies about n.
  if (n > std::numeric_limits<std::uint32_t>::max() || n * n > payload_size / 12) {
    throw Error(Errc::MalformedDocument, "archive n does not fit its payload");
  }

  ByteReader in(payload);
  ApspArchive archive;
  archive.built_at = built_at;
  archive.apsp.n = n;
  archive.apsp.dist = Matrix<double>(n, n, 0.0);
  archive.apsp.parents = Matrix<std::int32_t>(n, n, kNoParent);
  for (std::size_t i = 0; i < n * n; ++i) archive.apsp.dist.data()[i] = in.f64();
  for (std::size_t i = 0; i < n * n; ++i) {
    const std::int32_t p = in.i32();
    if (p < kNoParent || p >= static_cast<std::int64_t>(n)) {
      throw Error(Errc::MalformedDocument, "archive parent index out of range");
    }
    archive.apsp.parents.data()[i] = p;
  }

  std::vector<GeoNode> nodes(n);
  archive.node_gvi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    GeoNode& node = nodes[i];
    node.id = static_cast<NodeId>(i);
    node.lat = in.f64();
    node.lon = in.f64();
    const double gvi = in.f64();
    if (!std::isnan(gvi)) archive.node_gvi[i] = gvi;
    node.valid = in.u8() != 0;
    const std::uint32_t id_len = in.u32();
    const auto id = in.take(id_len);
    node.external_id.assign(reinterpret_cast<const char*>(id.data()), id.size());
  }
  const std::uint64_t edge_count = in.u64();
  if (edge_count > in.remaining() / 16) {
    throw Error(Errc::MalformedDocument, "archive street edge count exceeds payload");
  }
  std::vector<StreetEdge> edges(edge_count);
  for (StreetEdge& edge : edges) {
    edge.u = in.u32();
    edge.v = in.u32();
    const double length = in.f64();
    if (!std::isnan(length)) edge.length_m = length;
  }
  archive.network = StreetNetwork(std::move(nodes), std::move(edges));

  const std::uint64_t gvi_count = in.u64();
  if (gvi_count > in.remaining() / 16) {
    throw Error(Errc::MalformedDocument, "archive edge GVI count exceeds payload");
  }
  std::vector<EdgeGvi> gvi_edges(gvi_count);
  for (EdgeGvi& e : gvi_edges) {
    e.u = in.u32();
    e.v = in.u32();
    e.gvi = in.f64();
  }
  if (in.remaining() != 0) {
    throw Error(Errc::MalformedDocument, "archive has trailing bytes after the edge table");
  }
  archive.graph = build_adjacency_matrix(n, gvi_edges, (flags & kDirectedFlag) != 0,
                                         std::max<std::size_t>(n, kDefaultMaxNodes));
  return archive;
}

void save_apsp(const ApspResult& apsp, const WeightedGraph& graph,
               const StreetNetwork& network, std::span<const std::optional<double>> node_gvi,
               std::int64_t built_at, const std::filesystem::path& path) {
  const auto bytes = encode_archive(apsp, graph, network, node_gvi, built_at);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(Errc::IoFailure, "failed writing " + path.string());
}

ApspArchive load_apsp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open archive " + path.string());
  std::vector<std::byte> bytes;
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw Error(Errc::IoFailure, "cannot size archive " + path.string());
  in.seekg(0, std::ios::beg);
  bytes.resize(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in && !bytes.empty()) throw Error(Errc::IoFailure, "failed reading " + path.string());
  return decode_archive(bytes);
}

}  // namespace gvipath
