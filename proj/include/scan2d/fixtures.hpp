#pragma once

#include <vector>

#include "scan2d/rng.hpp"
#include "scan2d/types.hpp"

namespace scan2d {

template <typename T>
struct ScanInstance {
  Grid<T> x;
  SelectiveInputs<T> inputs;
  ScanParams<T> params;
};

/// Seeded random scan instance: A uniform in (-0.95, -0.05) so a_bar stays
/// in (0,1) during long loops, everything else unit normal. The benchmark
/// and verify CLI paths document and use this generator.
template <typename T>
ScanInstance<T> random_instance(int h, int w, int n, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  std::vector<T> xv(hw), zv(hw), bv(hw * n), cv(hw * n), av(n);
  rng.fill_normal(xv);
  rng.fill_normal(zv);
  rng.fill_normal(bv);
  rng.fill_normal(cv);
  for (auto& v : av) v = static_cast<T>(-rng.uniform(0.05, 0.95));
  const T d_skip = static_cast<T>(rng.normal());
  const T bias = static_cast<T>(rng.uniform(-0.5, 0.5));
  return ScanInstance<T>{
      Grid<T>(h, w, 1, std::move(xv)),
      SelectiveInputs<T>(Grid<T>(h, w, 1, std::move(zv)), Grid<T>(h, w, n, std::move(bv)),
                         Grid<T>(h, w, n, std::move(cv))),
      ScanParams<T>(std::move(av), d_skip, bias)};
}

}  // namespace scan2d
