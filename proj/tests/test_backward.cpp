#include <cmath>

#include "doctest.h"
#include "scan2d/engine.hpp"
#include "scan2d/gradcheck.hpp"
#include "test_util.hpp"

using namespace scan2d;
using namespace scan2d::testutil;

TEST_CASE("dy = 0 produces all-zero gradients") {
  auto inst = random_instance<double>(5, 6, 3, 60);
  TileConfig tiles(5, 6, 2);
  auto fwd = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  auto g = tiled_scan_2d_backward(fwd.saved, Grid<double>::zeros(5, 6));
  for (double v : g.dx.data) CHECK(v == 0.0);
  for (double v : g.dz_raw.data) CHECK(v == 0.0);
  for (double v : g.db.data) CHECK(v == 0.0);
  for (double v : g.dc.data) CHECK(v == 0.0);
  for (double v : g.da) CHECK(v == 0.0);
  CHECK(g.dd == 0.0);
  CHECK(g.dbias == 0.0);
}

TEST_CASE("dD always equals sum dy * x") {
  Rng rng(61);
  auto inst = random_instance<double>(7, 4, 2, 62);
  Grid<double> dy = Grid<double>::zeros(7, 4);
  rng.fill_normal(dy.data);
  TileConfig tiles(7, 4, 3);
  auto fwd = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  auto g = tiled_scan_2d_backward(fwd.saved, dy);
  double expect = 0.0;
  for (std::size_t k = 0; k < dy.data.size(); ++k)
    expect += dy.data[k] * inst.x.data[k];
  CHECK(g.dd == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("spec instance: 5x4, N = 3 matches central finite differences") {
  auto r = gradcheck(5, 4, 3, /*seed=*/0, 1e-6, /*tile=*/3);
  for (const auto& grp : r.groups) {
    INFO(grp.name);
    CHECK(grp.max_rel <= 1e-6);
    CHECK(grp.max_abs_small <= 1e-9);
  }
}

TEST_CASE("gradcheck passes across tile sizes including T = 1") {
  for (int tile : {1, 2, 6}) {
    auto r = gradcheck(4, 5, 2, /*seed=*/7, 1e-6, tile);
    INFO("tile " << tile << " worst rel " << r.worst_rel());
    CHECK(r.pass(1e-6, 1e-9));
  }
}

TEST_CASE("backward is deterministic across worker counts") {
  auto inst = random_instance<double>(17, 13, 4, 63);
  Rng rng(64);
  Grid<double> dy = Grid<double>::zeros(17, 13);
  rng.fill_normal(dy.data);
  TileConfig tiles(17, 13, 4);
  auto fwd = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  auto g1 = tiled_scan_2d_backward(fwd.saved, dy, 1);
  auto g2 = tiled_scan_2d_backward(fwd.saved, dy, 2);
  auto g8 = tiled_scan_2d_backward(fwd.saved, dy, 8);
  CHECK(g1.dx.data == g2.dx.data);
  CHECK(g1.dx.data == g8.dx.data);
  CHECK(g1.dz_raw.data == g8.dz_raw.data);
  CHECK(g1.da == g8.da);
  CHECK(g1.db.data == g8.db.data);
  CHECK(g1.dc.data == g8.dc.data);
  CHECK(g1.dd == g8.dd);
  CHECK(g1.dbias == g8.dbias);
}

TEST_CASE("stale saved state and dy shape mismatches are rejected") {
  SavedForward<double> stale;
  CHECK_THROWS_AS(tiled_scan_2d_backward(stale, Grid<double>::zeros(2, 2)),
                  std::logic_error);

  auto inst = random_instance<double>(4, 4, 2, 65);
  TileConfig tiles(4, 4, 2);
  auto fwd = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  CHECK_THROWS_AS(tiled_scan_2d_backward(fwd.saved, Grid<double>::zeros(4, 5)),
                  std::invalid_argument);

  auto inference = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles, 1,
                                         nullptr, /*save_residuals=*/false);
  CHECK_FALSE(inference.saved.valid);
  CHECK_THROWS_AS(tiled_scan_2d_backward(inference.saved, Grid<double>::zeros(4, 4)),
                  std::logic_error);
}
