#pragma once

#include <cstdint>
#include <vector>

#include "scan2d/types.hpp"

namespace scan2d {

/// Element-transfer counters between the tile-local store and the main
/// store. The engines and the closed-form simulator share this counting
/// model: each payload stream (x, z, per-state B and C) is charged once
/// per element, intermediate and carry traffic are charged per transfer,
/// and padding is charged at the warp-size work granularity the GPU
/// analog would pad to.
struct MemCounter {
  std::uint64_t payload_reads = 0;
  std::uint64_t payload_writes = 0;
  std::uint64_t intermediate_traffic = 0;
  std::uint64_t carry_traffic = 0;
  std::uint64_t padding_elements = 0;
};

/// Carry prefixes exchanged between tiles. Slot (kh, kw, d) holds tile
/// (kh, kw)'s outputs: ph = last column of its horizontal states, pv =
/// last row of its vertical states, T entries each (identity padding
/// passes carries through on edge tiles). A tile's inputs are its left /
/// top neighbor's slots; boundary tiles read all-zero prefixes.
template <typename T>
struct CarryState {
  int kh = 0, kw = 0, n = 0, t = 0;
  std::vector<T> ph;  // [kh][kw][row][d], d fastest
  std::vector<T> pv;  // [kh][kw][col][d]

  CarryState() = default;
  CarryState(const TileConfig& tiles, int n_states)
      : kh(tiles.kh), kw(tiles.kw), n(n_states), t(tiles.t) {
    std::size_t slots = static_cast<std::size_t>(kh) * kw * t * n;
    ph.assign(slots, T(0));
    pv.assign(slots, T(0));
  }

  std::size_t slot(int ih, int iw) const {
    return (static_cast<std::size_t>(ih) * kw + iw) * t * n;
  }
};

/// Minimal forward residuals for the backward pass: the raw inputs plus
/// the tile carry prefixes. Intermediate h_hor / h grids are recomputed
/// tile by tile, never retained.
template <typename T>
struct SavedForward {
  Grid<T> x;
  SelectiveInputs<T> inputs;
  ScanParams<T> params;
  TileConfig tiles;
  CarryState<T> carries;
  bool valid = false;
};

template <typename T>
struct TiledForwardResult {
  Grid<T> y;
  SavedForward<T> saved;
  CarryState<T> carries;
};

/// Adjoints of every input. dx carries the D*dy term plus the delta*B
/// pathway; the z pathway is reported separately in dz_raw because the
/// projection producing z from x lives in the model, not the operator.
template <typename T>
struct GradBundle {
  Grid<T> dx;      // H x W
  Grid<T> dz_raw;  // H x W
  std::vector<T> da;  // N
  Grid<T> db;      // H x W x N
  Grid<T> dc;      // H x W x N
  T dd = T(0);
  T dbias = T(0);
};

/// Fused tiled 2D selective scan. Tiles are processed so each tile's left
/// and top neighbors complete first (row-major over tiles, or wavefront
/// over anti-diagonals when threads > 1); per-state intermediates live
/// only in tile-local storage. Output matches scan_2d_sequential.
/// With save_residuals = false the result's SavedForward stays invalid
/// (inference-only call, no input copies retained).
template <typename T>
TiledForwardResult<T> tiled_scan_2d_forward(const Grid<T>& x,
                                            const SelectiveInputs<T>& inputs,
                                            const ScanParams<T>& params,
                                            const TileConfig& tiles, int threads = 1,
                                            MemCounter* counter = nullptr,
                                            bool save_residuals = true);

/// Backward via four 2D scans per tile: two forward scans reconstruct
/// h_hor and h from the saved carries, a reverse vertical and a reverse
/// horizontal scan propagate the output adjoint. Scalar reductions
/// (da, dbias, dd) accumulate tile-major then row-major within the tile.
template <typename T>
GradBundle<T> tiled_scan_2d_backward(const SavedForward<T>& saved, const Grid<T>& dy,
                                     int threads = 1);

/// Unoptimized strategy reference: full row-wise 1D scans materialize all
/// N per-state horizontal grids in the main store, then full column-wise
/// 1D scans read them back, re-deriving the discretization per pass.
/// Numerically identical to scan_2d_sequential; exists to be benchmarked
/// and traffic-counted against the tiled engine.
template <typename T>
Grid<T> naive_scan_2d(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                      const ScanParams<T>& params, int threads = 1,
                      MemCounter* counter = nullptr);

/// 1D scan over the row-major flattened grid (the cub1d counting variant).
template <typename T>
Grid<T> block_scan_1d_forward(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                              const ScanParams<T>& params, int threads = 1,
                              MemCounter* counter = nullptr);

}  // namespace scan2d
