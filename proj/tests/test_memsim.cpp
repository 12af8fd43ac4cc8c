#include "doctest.h"
#include "scan2d/engine.hpp"
#include "scan2d/memsim.hpp"
#include "test_util.hpp"

using namespace scan2d;
using namespace scan2d::testutil;

TEST_CASE("naive2d intermediate traffic formula at 56x56, N = 16") {
  auto r = simulate_traffic(Variant::Naive2d, 56, 56, 16);
  CHECK(r.intermediate_traffic == 100352);
  CHECK(r.carry_traffic == 0);
  CHECK(r.payload_reads == (2 + 2 * 16ull) * 56 * 56);
  CHECK(r.payload_writes == 56ull * 56);
}

TEST_CASE("tiled2d carry traffic formula at 56x56, N = 16, T = 8") {
  auto r = simulate_traffic(Variant::Tiled2d, 56, 56, 16, 8);
  CHECK(r.carry_traffic == 25088);  // 2*16*(7*7*16)
  CHECK(r.intermediate_traffic == 0);
}

TEST_CASE("N = 1 degenerates: naive intermediate traffic is 2*H*W") {
  auto r = simulate_traffic(Variant::Naive2d, 12, 9, 1);
  CHECK(r.intermediate_traffic == 2ull * 12 * 9);
  CHECK_THROWS_AS(simulate_traffic(Variant::Naive2d, 12, 9, 0), std::invalid_argument);
}

TEST_CASE("naive slope in N is exactly 2*H*W per state") {
  for (int n : {1, 2, 4, 8, 16}) {
    auto r = simulate_traffic(Variant::Naive2d, 56, 56, n);
    CHECK(r.intermediate_traffic == 2ull * 56 * 56 * n);
  }
}

TEST_CASE("engine hooks equal the closed forms exactly") {
  struct Case {
    int h, w, n, t;
  };
  // includes shapes where T does not divide H or W
  for (const Case c : {Case{16, 16, 4, 8}, Case{23, 17, 3, 8}, Case{56, 56, 16, 8},
                       Case{9, 31, 5, 4}, Case{7, 7, 2, 16}}) {
    auto inst = random_instance<double>(c.h, c.w, c.n, 1000 + c.h * 31 + c.w);

    MemCounter naive;
    naive_scan_2d(inst.x, inst.inputs, inst.params, 1, &naive);
    auto naive_sim = simulate_traffic(Variant::Naive2d, c.h, c.w, c.n);
    CHECK(naive.payload_reads == naive_sim.payload_reads);
    CHECK(naive.payload_writes == naive_sim.payload_writes);
    CHECK(naive.intermediate_traffic == naive_sim.intermediate_traffic);
    CHECK(naive.carry_traffic == naive_sim.carry_traffic);
    CHECK(naive.padding_elements == naive_sim.padding_elements);

    MemCounter tiled;
    TileConfig tiles(c.h, c.w, c.t);
    tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles, 1, &tiled);
    auto tiled_sim = simulate_traffic(Variant::Tiled2d, c.h, c.w, c.n, c.t);
    CHECK(tiled.payload_reads == tiled_sim.payload_reads);
    CHECK(tiled.payload_writes == tiled_sim.payload_writes);
    CHECK(tiled.intermediate_traffic == tiled_sim.intermediate_traffic);
    CHECK(tiled.carry_traffic == tiled_sim.carry_traffic);
    CHECK(tiled.padding_elements == tiled_sim.padding_elements);

    MemCounter cub;
    block_scan_1d_forward(inst.x, inst.inputs, inst.params, 1, &cub);
    auto cub_sim = simulate_traffic(Variant::Cub1d, c.h, c.w, c.n);
    CHECK(cub.payload_reads == cub_sim.payload_reads);
    CHECK(cub.payload_writes == cub_sim.payload_writes);
    CHECK(cub.padding_elements == cub_sim.padding_elements);
    CHECK(cub.carry_traffic == 0);
    CHECK(cub.intermediate_traffic == 0);
  }
}

TEST_CASE("hook counts are thread-count independent") {
  auto inst = random_instance<double>(20, 14, 3, 77);
  TileConfig tiles(20, 14, 8);
  MemCounter one, eight;
  tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles, 1, &one);
  tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles, 8, &eight);
  CHECK(one.payload_reads == eight.payload_reads);
  CHECK(one.carry_traffic == eight.carry_traffic);
  CHECK(one.padding_elements == eight.padding_elements);
}

TEST_CASE("padding waste on the 14x14 feature map") {
  auto full = padding_waste(14, 14, 32, PaddingScheme::FullRowScan);
  CHECK(full.pad_per_row == 18.0);
  CHECK(full.pad_per_column == 18.0);
  CHECK(full.waste_fraction == doctest::Approx(0.5625).epsilon(1e-12));

  auto seg = padding_waste(14, 14, 32, PaddingScheme::Segmented);
  CHECK(seg.pad_per_row == 2.0);  // 196 -> 224, 28 pads over 14 rows
  CHECK(seg.pad_per_column == 2.0);
  CHECK(seg.waste_fraction == doctest::Approx(28.0 / 224.0).epsilon(1e-12));
}

TEST_CASE("aligned grids need no padding") {
  auto r = padding_waste(32, 32, 32, PaddingScheme::FullRowScan);
  CHECK(r.pad_per_row == 0.0);
  CHECK(r.pad_per_column == 0.0);
  CHECK(r.waste_fraction == 0.0);
}

TEST_CASE("full-row padding always wastes at least as much as segmented") {
  Rng rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const int h = rng.uniform_int(1, 70);
    const int w = rng.uniform_int(1, 70);
    auto full = padding_waste(h, w, 32, PaddingScheme::FullRowScan);
    auto seg = padding_waste(h, w, 32, PaddingScheme::Segmented);
    CHECK(full.waste_fraction >= seg.waste_fraction - 1e-12);
    CHECK(full.pad_per_row >= seg.pad_per_row - 1e-12);
  }
}

TEST_CASE("flop model calibration at 14x14, N = 16") {
  const auto one_d = count_flops(Variant::Cub1d, 14, 14, 16);
  const auto two_d = count_flops(Variant::Tiled2d, 14, 14, 16);
  CHECK(two_d == count_flops(Variant::Naive2d, 14, 14, 16));
  // within a factor of two of the reference 9K / 16K figures
  CHECK(one_d >= 4500);
  CHECK(one_d <= 18000);
  CHECK(two_d >= 8000);
  CHECK(two_d <= 32000);
  const double ratio = static_cast<double>(two_d) / static_cast<double>(one_d);
  CHECK(ratio >= 1.4);
  CHECK(ratio <= 2.0);
}

TEST_CASE("the 2D/1D flop ratio stays in range across sizes") {
  for (int hw : {8, 14, 56, 200}) {
    const double ratio = static_cast<double>(count_flops(Variant::Tiled2d, hw, hw, 16)) /
                         static_cast<double>(count_flops(Variant::Cub1d, hw, hw, 16));
    CHECK(ratio >= 1.4);
    CHECK(ratio <= 2.0);
  }
}

TEST_CASE("extra-traffic ratio against the tiled carry term") {
  // with exact tilings the naive/tiled extra-traffic ratio equals T/2
  for (int t : {4, 8}) {
    auto naive = simulate_traffic(Variant::Naive2d, 56, 56, 8);
    auto tiled = simulate_traffic(Variant::Tiled2d, 56, 56, 8, t);
    CHECK(naive.intermediate_traffic * 2 >= tiled.carry_traffic * t);
  }
}
