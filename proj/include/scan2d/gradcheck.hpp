#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scan2d/types.hpp"

namespace scan2d {

/// Central-finite-difference validation of the tiled backward pass against
/// the sequential oracle composed with a random linear loss. The oracle
/// side never touches the tiled engine.
struct GradCheckGroup {
  std::string name;
  double max_rel = 0.0;    // over components with |analytic| >= small_cutoff
  double max_abs_small = 0.0;  // over components with |analytic| < small_cutoff
};

struct GradCheckResult {
  std::vector<GradCheckGroup> groups;  // dx, dz_raw, da, db, dc, dd, dbias
  double small_cutoff = 1e-6;

  bool pass(double rel_tol, double abs_tol) const {
    for (const auto& g : groups)
      if (g.max_rel > rel_tol || g.max_abs_small > abs_tol) return false;
    return true;
  }
  double worst_rel() const {
    double m = 0.0;
    for (const auto& g : groups) m = m > g.max_rel ? m : g.max_rel;
    return m;
  }
};

GradCheckResult gradcheck(int h, int w, int n, std::uint64_t seed, double step = 1e-6,
                          int tile = 3);

}  // namespace scan2d
