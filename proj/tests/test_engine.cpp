#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "scan2d/engine.hpp"
#include "scan2d/memsim.hpp"
#include "test_util.hpp"

using namespace scan2d;
using namespace scan2d::testutil;

TEST_CASE("single tile covering the grid matches the sequential oracle") {
  auto inst = random_instance<double>(11, 7, 4, 42);
  auto oracle = sequential_oracle_y(inst);
  TileConfig tiles(11, 7, 64);
  auto res = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  CHECK(rel_error(res.y.data, oracle.data) <= 1e-12);
}

TEST_CASE("T = 1 (pure carry chaining) matches the sequential oracle") {
  auto inst = random_instance<double>(6, 9, 3, 43);
  auto oracle = sequential_oracle_y(inst);
  TileConfig tiles(6, 9, 1);
  auto res = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  CHECK(rel_error(res.y.data, oracle.data) <= 1e-12);
}

TEST_CASE("zero input with b_bar_x = 0 stays zero everywhere") {
  auto inst = random_instance<double>(8, 8, 2, 44);
  for (auto& v : inst.x.data) v = 0.0;  // b_bar_x = delta*B*0 = 0
  TileConfig tiles(8, 8, 3);
  auto res = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  for (double v : res.y.data) CHECK(v == 0.0);
}

TEST_CASE("tile invariance: y is independent of T") {
  auto inst = random_instance<double>(13, 10, 5, 45);
  auto oracle = sequential_oracle_y(inst);
  for (int t : {1, 2, 3, 8, 13}) {
    TileConfig tiles(13, 10, t);
    auto res = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
    CHECK(rel_error(res.y.data, oracle.data) <= 1e-10);
  }
}

TEST_CASE("oracle equivalence over random instances, both precisions") {
  Rng meta(46);
  for (int trial = 0; trial < 30; ++trial) {
    const int h = meta.uniform_int(1, 24);
    const int w = meta.uniform_int(1, 24);
    const int n = meta.uniform_int(1, 8);
    const int t = std::vector<int>{1, 2, 3, 8, 64}[meta.uniform_int(0, 4)];
    const auto seed = meta.next_u64();
    {
      auto inst = random_instance<double>(h, w, n, seed);
      auto oracle = sequential_oracle_y(inst);
      TileConfig tiles(h, w, t);
      auto tiled = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
      auto naive = naive_scan_2d(inst.x, inst.inputs, inst.params);
      CHECK(rel_error(tiled.y.data, oracle.data) <= 1e-12);
      CHECK(rel_error(naive.data, oracle.data) <= 1e-12);
    }
    {
      auto inst = random_instance<float>(h, w, n, seed);
      auto oracle = sequential_oracle_y(inst);
      TileConfig tiles(h, w, t);
      auto tiled = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
      auto naive = naive_scan_2d(inst.x, inst.inputs, inst.params);
      CHECK(rel_error(tiled.y.data, oracle.data) <= 1e-5);
      CHECK(rel_error(naive.data, oracle.data) <= 1e-5);
    }
  }
}

TEST_CASE("block_scan_1d_forward matches the 1D sequential oracle") {
  auto inst = random_instance<double>(5, 8, 3, 47);
  auto g = discretize(inst.x, inst.inputs, inst.params);
  auto y1 = scan_1d_sequential<double>(g.a_bar.data, g.b_bar_x.data, inst.inputs.c.data,
                                       inst.params.d_skip, inst.x.data, 3);
  auto y = block_scan_1d_forward(inst.x, inst.inputs, inst.params);
  CHECK(rel_error(y.data, y1) <= 1e-12);
}

TEST_CASE("forward is bit-deterministic across run and worker counts") {
  auto inst = random_instance<double>(33, 29, 6, 48);
  TileConfig tiles(33, 29, 8);
  auto base = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles, 1);
  for (int threads : {1, 2, 8}) {
    auto res = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles, threads);
    CHECK(res.y.data == base.y.data);
    CHECK(res.carries.ph == base.carries.ph);
    CHECK(res.carries.pv == base.carries.pv);
  }
  auto naive1 = naive_scan_2d(inst.x, inst.inputs, inst.params, 1);
  auto naive8 = naive_scan_2d(inst.x, inst.inputs, inst.params, 8);
  CHECK(naive1.data == naive8.data);
}

TEST_CASE("boundary tiles carry all-zero prefixes") {
  auto inst = random_instance<double>(9, 9, 2, 49);
  TileConfig tiles(9, 9, 4);
  auto res = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  // slot (ih, iw) holds tile outputs; inputs of the first column/row come
  // from the zero boundary, checked indirectly: recomputing tile (0,0)
  // against the oracle is covered above. Here check saved state size.
  const auto& c = res.carries;
  CHECK(c.ph.size() == static_cast<std::size_t>(c.kh) * c.kw * c.t * c.n);
  CHECK(c.pv.size() == c.ph.size());
}

TEST_CASE("saved forward keeps inputs and carries but no state grids") {
  auto inst = random_instance<double>(16, 12, 3, 50);
  TileConfig tiles(16, 12, 4);
  auto res = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  const auto& s = res.saved;
  REQUIRE(s.valid);
  // retained: x, z (H*W each), B, C (H*W*N each), carries O(N(K_H*W + K_W*H))
  const std::size_t hw = static_cast<std::size_t>(16) * 12;
  CHECK(s.x.data.size() == hw);
  CHECK(s.inputs.b.data.size() == hw * 3);
  CHECK(s.carries.ph.size() ==
        static_cast<std::size_t>(tiles.kh) * tiles.kw * tiles.t * 3);
}

TEST_CASE("engine shape errors") {
  auto inst = random_instance<double>(4, 4, 2, 51);
  TileConfig wrong(8, 8, 2);  // kh/kw do not match a 4x4 grid
  CHECK_THROWS_AS(tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, wrong),
                  std::invalid_argument);
  auto other = random_instance<double>(4, 5, 2, 52);
  CHECK_THROWS_AS(naive_scan_2d(inst.x, other.inputs, inst.params),
                  std::invalid_argument);
  CHECK_THROWS_AS(TileConfig(4, 4, 0), std::invalid_argument);
}

TEST_CASE("naive intermediate traffic at 56x56, N = 16") {
  auto inst = random_instance<double>(56, 56, 16, 53);
  MemCounter counter;
  naive_scan_2d(inst.x, inst.inputs, inst.params, 1, &counter);
  // N*H*W writes plus equal reads
  CHECK(counter.intermediate_traffic == 2ull * 16 * 56 * 56);
  CHECK(counter.intermediate_traffic >= 50176ull + 50176ull);
}
