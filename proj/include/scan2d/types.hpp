#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scan2d {

enum class Dtype : std::uint8_t { f32 = 0, f64 = 1 };

inline const char* dtype_name(Dtype d) { return d == Dtype::f32 ? "f32" : "f64"; }

/// Dense H x W x D grid, row major with the channel index fastest.
/// All public indices are 0-based. Construction validates shape and
/// rejects non-finite entries; downstream code assumes finite data.
template <typename T>
struct Grid {
  int h = 0;
  int w = 0;
  int d = 1;
  std::vector<T> data;

  Grid() = default;

  Grid(int height, int width, int channels, std::vector<T> values)
      : h(height), w(width), d(channels), data(std::move(values)) {
    if (h <= 0 || w <= 0 || d <= 0)
      throw std::invalid_argument("Grid: dimensions must be positive");
    if (data.size() != size())
      throw std::invalid_argument("Grid: data length " + std::to_string(data.size()) +
                                  " != H*W*D " + std::to_string(size()));
    for (const T& v : data)
      if (!std::isfinite(v)) throw std::invalid_argument("Grid: non-finite entry");
  }

  static Grid zeros(int height, int width, int channels = 1) {
    Grid g;
    g.h = height;
    g.w = width;
    g.d = channels;
    if (height <= 0 || width <= 0 || channels <= 0)
      throw std::invalid_argument("Grid: dimensions must be positive");
    g.data.assign(g.size(), T(0));
    return g;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
           static_cast<std::size_t>(d);
  }

  std::size_t idx(int i, int j, int c = 0) const {
    return (static_cast<std::size_t>(i) * w + j) * d + c;
  }

  T at(int i, int j, int c = 0) const { return data[idx(i, j, c)]; }
  T& at(int i, int j, int c = 0) { return data[idx(i, j, c)]; }

  bool same_shape(const Grid& o) const { return h == o.h && w == o.w && d == o.d; }
};

/// Per-position selective parameters: raw time-step grid z (pre-softplus)
/// and the input-dependent B and C grids over N state dimensions.
template <typename T>
struct SelectiveInputs {
  Grid<T> z_raw;  // H x W
  Grid<T> b;      // H x W x N
  Grid<T> c;      // H x W x N

  SelectiveInputs() = default;
  SelectiveInputs(Grid<T> z, Grid<T> b_in, Grid<T> c_in)
      : z_raw(std::move(z)), b(std::move(b_in)), c(std::move(c_in)) {
    if (z_raw.d != 1) throw std::invalid_argument("SelectiveInputs: z must be single channel");
    if (b.h != z_raw.h || b.w != z_raw.w || c.h != z_raw.h || c.w != z_raw.w)
      throw std::invalid_argument("SelectiveInputs: grids must share H and W");
    if (b.d != c.d) throw std::invalid_argument("SelectiveInputs: B and C must share N");
  }

  int n() const { return b.d; }
};

/// Input-independent scan parameters for one channel.
template <typename T>
struct ScanParams {
  std::vector<T> a;  // N state-transition rates
  T d_skip = T(0);
  T bias = T(0);
  bool all_stable = false;  // true iff every A entry is negative

  ScanParams() = default;
  ScanParams(std::vector<T> a_in, T skip, T bias_in)
      : a(std::move(a_in)), d_skip(skip), bias(bias_in) {
    if (a.empty()) throw std::invalid_argument("ScanParams: N must be >= 1");
    all_stable = true;
    for (const T& v : a) {
      if (!std::isfinite(v)) throw std::invalid_argument("ScanParams: non-finite A entry");
      if (!(v < T(0))) all_stable = false;
    }
    if (!std::isfinite(d_skip) || !std::isfinite(bias))
      throw std::invalid_argument("ScanParams: non-finite parameter");
  }

  int n() const { return static_cast<int>(a.size()); }
};

/// One affine state update h <- a*h + b; the unit of scan composition.
template <typename T>
struct LinOp {
  T a = T(1);
  T b = T(0);
};

template <typename T>
inline LinOp<T> identity_op() {
  return LinOp<T>{T(1), T(0)};
}

/// Applying the result to h equals applying `first` then `second`.
template <typename T>
inline LinOp<T> compose(LinOp<T> first, LinOp<T> second) {
  return LinOp<T>{second.a * first.a, std::fma(second.a, first.b, second.b)};
}

template <typename T>
inline T apply_op(LinOp<T> e, T h) {
  return std::fma(e.a, h, e.b);
}

/// Tiling of an H x W grid into T x T tiles, ceil division at the edges.
struct TileConfig {
  int t = 1;
  int kh = 1;
  int kw = 1;

  TileConfig() = default;
  TileConfig(int height, int width, int tile) : t(tile) {
    if (tile <= 0) throw std::invalid_argument("TileConfig: T must be positive");
    if (height <= 0 || width <= 0)
      throw std::invalid_argument("TileConfig: grid dimensions must be positive");
    kh = (height + tile - 1) / tile;
    kw = (width + tile - 1) / tile;
  }
};

/// Patch grid with a tissue mask and the padding token substituted at
/// non-tissue positions by embed_with_padding.
template <typename T>
struct MaskedGrid {
  Grid<T> patches;               // H x W x D
  std::vector<std::uint8_t> tissue;  // H x W, row major
  std::vector<T> token;          // D entries

  MaskedGrid() = default;
  MaskedGrid(Grid<T> p, std::vector<std::uint8_t> mask, std::vector<T> tok)
      : patches(std::move(p)), tissue(std::move(mask)), token(std::move(tok)) {
    if (tissue.size() != static_cast<std::size_t>(patches.h) * patches.w)
      throw std::invalid_argument("MaskedGrid: mask and grid dimensions must agree");
    if (token.size() != static_cast<std::size_t>(patches.d))
      throw std::invalid_argument("MaskedGrid: token size must equal D");
    for (const T& v : token)
      if (!std::isfinite(v)) throw std::invalid_argument("MaskedGrid: non-finite token");
  }
};

}  // namespace scan2d
