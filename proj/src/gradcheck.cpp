#include "scan2d/gradcheck.hpp"

#include <cmath>
#include <functional>

#include "scan2d/engine.hpp"
#include "scan2d/fixtures.hpp"
#include "scan2d/reference.hpp"

namespace scan2d {

namespace {

double oracle_loss(const ScanInstance<double>& inst, const Grid<double>& weight) {
  auto g = discretize(inst.x, inst.inputs, inst.params);
  auto s = scan_2d_sequential(g, inst.inputs.c, inst.params.d_skip, inst.x);
  double loss = 0.0;
  for (std::size_t k = 0; k < weight.data.size(); ++k)
    loss += weight.data[k] * s.y.data[k];
  return loss;
}

struct GroupAccum {
  GradCheckGroup g;
  double cutoff;

  void take(double analytic, double fd) {
    const double err = std::abs(fd - analytic);
    if (std::abs(analytic) < cutoff)
      g.max_abs_small = std::max(g.max_abs_small, err);
    else
      g.max_rel = std::max(g.max_rel, err / std::abs(analytic));
  }
};

// central difference of the oracle loss under one scalar mutation
double central_diff(ScanInstance<double>& inst, const Grid<double>& weight, double* slot,
                    double step) {
  const double keep = *slot;
  *slot = keep + step;
  const double up = oracle_loss(inst, weight);
  *slot = keep - step;
  const double down = oracle_loss(inst, weight);
  *slot = keep;
  return (up - down) / (2.0 * step);
}

}  // namespace

GradCheckResult gradcheck(int h, int w, int n, std::uint64_t seed, double step,
                          int tile) {
  ScanInstance<double> inst = random_instance<double>(h, w, n, seed);
  Rng rng(seed ^ 0x5eedful);
  Grid<double> weight = Grid<double>::zeros(h, w);
  rng.fill_normal(weight.data);

  const TileConfig tiles(h, w, tile);
  auto fwd = tiled_scan_2d_forward(inst.x, inst.inputs, inst.params, tiles);
  GradBundle<double> grads = tiled_scan_2d_backward(fwd.saved, weight);

  GradCheckResult out;
  const double cutoff = out.small_cutoff;
  GroupAccum dx{{"dx", 0, 0}, cutoff}, dz{{"dz_raw", 0, 0}, cutoff},
      da{{"da", 0, 0}, cutoff}, db{{"db", 0, 0}, cutoff}, dc{{"dc", 0, 0}, cutoff},
      dd{{"dd", 0, 0}, cutoff}, dbias{{"dbias", 0, 0}, cutoff};

  for (std::size_t k = 0; k < inst.x.data.size(); ++k)
    dx.take(grads.dx.data[k], central_diff(inst, weight, &inst.x.data[k], step));
  for (std::size_t k = 0; k < inst.inputs.z_raw.data.size(); ++k)
    dz.take(grads.dz_raw.data[k],
            central_diff(inst, weight, &inst.inputs.z_raw.data[k], step));
  for (int d = 0; d < n; ++d)
    da.take(grads.da[d], central_diff(inst, weight, &inst.params.a[d], step));
  for (std::size_t k = 0; k < inst.inputs.b.data.size(); ++k)
    db.take(grads.db.data[k], central_diff(inst, weight, &inst.inputs.b.data[k], step));
  for (std::size_t k = 0; k < inst.inputs.c.data.size(); ++k)
    dc.take(grads.dc.data[k], central_diff(inst, weight, &inst.inputs.c.data[k], step));
  dd.take(grads.dd, central_diff(inst, weight, &inst.params.d_skip, step));
  dbias.take(grads.dbias, central_diff(inst, weight, &inst.params.bias, step));

  out.groups = {dx.g, dz.g, da.g, db.g, dc.g, dd.g, dbias.g};
  return out;
}

}  // namespace scan2d
