#pragma once

#include <span>
#include <vector>

#include "scan2d/types.hpp"

// Sequential reference implementations of every recurrence. Slow and
// obviously correct; these are the oracles for the parallel engines.
// All functions are pure and single threaded.

namespace scan2d {

/// Discretized per-position quantities. When all A < 0 and delta > 0
/// every a_bar entry lies in (0, 1).
template <typename T>
struct DiscretizedGrids {
  Grid<T> a_bar;    // H x W x N
  Grid<T> b_bar_x;  // H x W x N
  Grid<T> delta;    // H x W
};

/// States of the two-pass 2D scan.
///   first column: h_hor(i,0,d) = b_bar_x(i,0,d)   (zero left boundary)
///   first row:    h(0,j,d)     = h_hor(0,j,d)     (zero top boundary)
template <typename T>
struct ScanStates {
  Grid<T> h_hor;  // H x W x N
  Grid<T> h;      // H x W x N
  Grid<T> y;      // H x W
};

/// delta = softplus(z_raw + bias); a_bar = exp(delta * A^d);
/// b_bar_x = delta * B * x.
template <typename T>
DiscretizedGrids<T> discretize(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                               const ScanParams<T>& params);

/// h_0 = 0; h_t = a_bar_t * h_{t-1} + b_bar_x_t; y_t = sum_d C_t^d h_t^d + D x_t.
/// a_bar, b_bar_x, c are flat L x N (state fastest), x is length L.
template <typename T>
std::vector<T> scan_1d_sequential(std::span<const T> a_bar, std::span<const T> b_bar_x,
                                  std::span<const T> c, T d_skip, std::span<const T> x,
                                  int n);

/// Row-wise horizontal recurrence then column-wise vertical recurrence
/// sharing the same a_bar; y = sum_d C h + D x.
template <typename T>
ScanStates<T> scan_2d_sequential(const DiscretizedGrids<T>& g, const Grid<T>& c,
                                 T d_skip, const Grid<T>& x);

/// Constant-parameter state at 1-based cell (i, j): the Manhattan-distance
/// sum evaluated as a product of two geometric partial sums. 0^0 is 1 here
/// so the zero-distance impulse term survives at a_bar = 0.
template <typename T>
T closed_form_constant(T a_bar, T b_bar_x, long i, long j);

template <typename T>
std::vector<T> flatten_row_major(const Grid<T>& g);

template <typename T>
Grid<T> unflatten_row_major(int h, int w, int d, const std::vector<T>& flat);

enum class ScanKind { OneDRowMajor, TwoD };

/// Measured impulse-response coefficient: x = 1 at source, 0 elsewhere,
/// constant a_bar, B = 1, C selecting the raw state. Coordinates are
/// 0-based; source must not come after target in the scan order.
template <typename T>
T impulse_coefficient(ScanKind kind, int src_i, int src_j, int tgt_i, int tgt_j,
                      T a_bar, int width);

}  // namespace scan2d
