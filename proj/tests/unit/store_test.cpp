#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gvipath/error.hpp"
#include "gvipath/store.hpp"

namespace gvipath {
namespace {

namespace fs = std::filesystem;

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::MalformedDocument;
}

struct Build {
  StreetNetwork network;
  WeightedGraph graph;
  ApspResult apsp;
  std::vector<std::optional<double>> node_gvi;
};

Build grid_build(std::size_t side, std::uint64_t seed, bool directed = false) {
  Build b{testing::grid_network(side, side), {}, {}, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  std::vector<EdgeGvi> edges;
  for (const StreetEdge& e : b.network.edges()) {
    edges.push_back({e.u, e.v, pct(rng)});
    if (directed) edges.push_back({e.v, e.u, pct(rng)});
  }
  b.graph = build_adjacency_matrix(b.network.node_count(), edges, directed);
  b.apsp = floyd_warshall_blocked(b.graph, 16);
  for (std::size_t i = 0; i < b.network.node_count(); ++i) {
    b.node_gvi.push_back(i % 7 == 3 ? std::nullopt : std::optional<double>(pct(rng)));
  }
  return b;
}

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gvipath_store_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::vector<char> bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

TEST_F(StoreTest, RoundTripIsExact) {
  for (bool directed : {false, true}) {
    const Build b = grid_build(6, 61, directed);
    const fs::path path = dir_ / "grid.gvip";
    save_apsp(b.apsp, b.graph, b.network, b.node_gvi, 1700000000, path);
    const ApspArchive loaded = load_apsp(path);
    EXPECT_EQ(loaded.apsp.n, b.apsp.n);
    EXPECT_TRUE(loaded.apsp.dist == b.apsp.dist);
    EXPECT_TRUE(loaded.apsp.parents == b.apsp.parents);
    EXPECT_TRUE(loaded.graph.weight == b.graph.weight);
    EXPECT_EQ(loaded.graph.directed, directed);
    EXPECT_TRUE(loaded.network == b.network);
    EXPECT_EQ(loaded.node_gvi, b.node_gvi);
    EXPECT_EQ(loaded.built_at, 1700000000);
  }
}

TEST_F(StoreTest, UnreachableCellsSurvive) {
  const StreetNetwork net({{0, "a", 1, 1, true}, {1, "b", 1, 2, true}, {2, "c", 1, 3, false}},
                          {{0, 1, 12.5}});
  const std::vector<EdgeGvi> edges = {{0, 1, 33.0}};
  const WeightedGraph g = build_adjacency_matrix(3, edges, false);
  const ApspResult apsp = floyd_warshall(g);
  const std::vector<std::optional<double>> gvi = {10.0, 56.0, std::nullopt};
  const ApspArchive loaded = decode_archive(encode_archive(apsp, g, net, gvi, 0));
  EXPECT_TRUE(std::isinf(loaded.apsp.dist(0, 2)));
  EXPECT_EQ(loaded.apsp.parents(0, 2), kNoParent);
  EXPECT_FALSE(loaded.network.node(2).valid);
  EXPECT_EQ(loaded.network.edges()[0].length_m, 12.5);
}

TEST_F(StoreTest, RepeatedSavesAreByteIdentical) {
  const Build b = grid_build(5, 67);
  save_apsp(b.apsp, b.graph, b.network, b.node_gvi, 42, dir_ / "a.gvip");
  save_apsp(b.apsp, b.graph, b.network, b.node_gvi, 42, dir_ / "b.gvip");
  const auto a = bytes(dir_ / "a.gvip");
  EXPECT_EQ(a, bytes(dir_ / "b.gvip"));
  EXPECT_EQ(std::string(a.begin(), a.begin() + 8), "GVIPAPSP");
}

TEST_F(StoreTest, HeaderLayout) {
  const Build b = grid_build(3, 71, true);
  const auto raw = encode_archive(b.apsp, b.graph, b.network, b.node_gvi, 1234);
  auto u64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | std::to_integer<std::uint64_t>(raw[off + i]);
    return v;
  };
  EXPECT_EQ(u64(8) & 0xffffffffu, kArchiveVersion);
  EXPECT_EQ(u64(8) >> 32, 1u);  // directed flag
  EXPECT_EQ(u64(16), 9u);
  EXPECT_EQ(u64(24), 1234u);
  EXPECT_EQ(u64(32), raw.size() - kArchiveHeaderSize);
  EXPECT_EQ(u64(40), fnv1a64(std::span(raw).subspan(kArchiveHeaderSize)));
}

TEST_F(StoreTest, Fnv1aKnownVectors) {
  EXPECT_EQ(fnv1a64({}), 0xcbf29ce484222325ull);
  const std::byte a[] = {std::byte{'a'}};
  EXPECT_EQ(fnv1a64(a), 0xaf63dc4c8601ec8cull);
}

TEST_F(StoreTest, CorruptionIsDetected) {
  const Build b = grid_build(4, 73);
  const fs::path path = dir_ / "x.gvip";
  save_apsp(b.apsp, b.graph, b.network, b.node_gvi, 0, path);
  const auto good = bytes(path);

  auto write = [&](const std::vector<char>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
  };

  write(std::vector<char>(good.begin(), good.end() - 10));
  EXPECT_EQ(error_of([&] { load_apsp(path); }), Errc::ChecksumMismatch);

  write(std::vector<char>(good.begin(), good.begin() + 20));
  EXPECT_EQ(error_of([&] { load_apsp(path); }), Errc::ChecksumMismatch);

  auto flipped = good;
  flipped[kArchiveHeaderSize + 5] ^= 0x01;
  write(flipped);
  EXPECT_EQ(error_of([&] { load_apsp(path); }), Errc::ChecksumMismatch);

  auto magic = good;
  magic[0] = 'X';
  write(magic);
  EXPECT_EQ(error_of([&] { load_apsp(path); }), Errc::VersionUnsupported);

  auto version = good;
  version[8] = 9;
  write(version);
  EXPECT_EQ(error_of([&] { load_apsp(path); }), Errc::VersionUnsupported);

  write({});
  const Errc empty = error_of([&] { load_apsp(path); });
  EXPECT_TRUE(empty == Errc::ChecksumMismatch || empty == Errc::VersionUnsupported);

  EXPECT_EQ(error_of([&] { load_apsp(dir_ / "missing.gvip"); }), Errc::IoFailure);
}

TEST_F(StoreTest, HeaderNodeCountMustMatchPayload) {
  const Build b = grid_build(3, 79);
  auto raw = encode_archive(b.apsp, b.graph, b.network, b.node_gvi, 0);
  raw[16] = std::byte{10};  // n = 10 against a 9-node payload
  EXPECT_EQ(error_of([&] { decode_archive(raw); }), Errc::MalformedDocument);
}

TEST_F(StoreTest, MismatchedInputsRejected) {
  const Build b = grid_build(3, 83);
  const Build other = grid_build(4, 83);
  EXPECT_EQ(error_of([&] { encode_archive(b.apsp, other.graph, b.network, b.node_gvi, 0); }),
            Errc::DimensionMismatch);
}

}  // namespace
}  // namespace gvipath
