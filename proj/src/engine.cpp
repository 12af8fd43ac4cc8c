#include "scan2d/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "scan2d/block_scan.hpp"
#include "scan2d/math.hpp"
#include "scan2d/parallel.hpp"

namespace scan2d {

namespace {

constexpr int kMaxStateDim = 2048;

template <typename T>
void require_shapes(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                    const ScanParams<T>& params) {
  if (x.d != 1) throw std::invalid_argument("scan input must be single channel");
  if (x.h != inputs.z_raw.h || x.w != inputs.z_raw.w)
    throw std::invalid_argument("input and selective grids must share H and W");
  if (inputs.n() != params.n())
    throw std::invalid_argument("state dimension mismatch between inputs and params");
  if (params.n() > kMaxStateDim) throw std::invalid_argument("state dimension too large");
}

// per-worker counters merged at completion
struct CounterSink {
  MemCounter* target = nullptr;
  std::mutex mu;

  void add(const MemCounter& c) {
    if (!target) return;
    std::lock_guard<std::mutex> lock(mu);
    target->payload_reads += c.payload_reads;
    target->payload_writes += c.payload_writes;
    target->intermediate_traffic += c.intermediate_traffic;
    target->carry_traffic += c.carry_traffic;
    target->padding_elements += c.padding_elements;
  }
};

struct TileRange {
  int i0, i1, j0, j1, th, tw;
};

TileRange tile_range(const TileConfig& tiles, int h, int w, int ih, int iw) {
  TileRange r;
  r.i0 = ih * tiles.t;
  r.i1 = std::min(h, r.i0 + tiles.t);
  r.j0 = iw * tiles.t;
  r.j1 = std::min(w, r.j0 + tiles.t);
  r.th = r.i1 - r.i0;
  r.tw = r.j1 - r.j0;
  return r;
}

// elements a granularity-32 schedule processes for a T x T tile, minus the
// tile's real cells; charged once per state per scan direction
std::uint64_t tile_pad_elements(int t, int th, int tw) {
  const std::uint64_t flat = pad_to_granularity(static_cast<std::size_t>(t) * t);
  return flat - static_cast<std::uint64_t>(th) * tw;
}

/// Discretizes one tile into d-contiguous local slabs; shared by the
/// forward pass and the backward recomputation.
template <typename T>
void discretize_tile(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                     const ScanParams<T>& params, const TileRange& r,
                     std::vector<T>& delta, std::vector<T>& abar, std::vector<T>& bbarx) {
  const int n = params.n();
  const std::size_t cells = static_cast<std::size_t>(r.th) * r.tw;
  delta.resize(cells);
  abar.resize(cells * n);
  bbarx.resize(cells * n);
  const T* pa = params.a.data();
  for (int rr = 0; rr < r.th; ++rr) {
    const int gi = r.i0 + rr;
    for (int cc = 0; cc < r.tw; ++cc) {
      const int gj = r.j0 + cc;
      const T dv = num::delta_of(inputs.z_raw.at(gi, gj), params.bias);
      const T xv = x.at(gi, gj);
      const std::size_t cell = static_cast<std::size_t>(rr) * r.tw + cc;
      delta[cell] = dv;
      const T* pb = inputs.b.data.data() + inputs.b.idx(gi, gj, 0);
      T* oa = abar.data() + cell * n;
      T* ob = bbarx.data() + cell * n;
      for (int d = 0; d < n; ++d) {
        oa[d] = num::abar_of(dv, pa[d]);
        ob[d] = num::bbarx_of(dv, pb[d], xv);
      }
    }
  }
}

/// Horizontal segmented scan of one tile: row segments seeded by the P^h
/// carry, inclusive states written to hhor.
template <typename T>
void tile_horizontal_scan(const TileRange& r, int n, const std::vector<T>& abar,
                          const std::vector<T>& bbarx, const T* ph_in,
                          std::vector<T>& hhor) {
  hhor.resize(static_cast<std::size_t>(r.th) * r.tw * n);
  for (int rr = 0; rr < r.th; ++rr) {
    const std::size_t row = static_cast<std::size_t>(rr) * r.tw * n;
    const T* a_row = abar.data() + row;
    const T* b_row = bbarx.data() + row;
    T* h_row = hhor.data() + row;
    const T* prev = ph_in + static_cast<std::size_t>(rr) * n;
    for (int cc = 0; cc < r.tw; ++cc) {
      const std::size_t base = static_cast<std::size_t>(cc) * n;
      for (int d = 0; d < n; ++d)
        h_row[base + d] = num::ssm_step(a_row[base + d], prev[d], b_row[base + d]);
      prev = h_row + base;
    }
  }
}

// wavefront over anti-diagonals: every tile's left/top (or right/bottom,
// reversed) neighbors belong to an earlier diagonal
void for_each_tile(const TileConfig& tiles, int threads, bool reverse,
                   const std::function<void(int, int)>& body) {
  if (threads <= 1) {
    if (!reverse) {
      for (int ih = 0; ih < tiles.kh; ++ih)
        for (int iw = 0; iw < tiles.kw; ++iw) body(ih, iw);
    } else {
      for (int ih = tiles.kh - 1; ih >= 0; --ih)
        for (int iw = tiles.kw - 1; iw >= 0; --iw) body(ih, iw);
    }
    return;
  }
  const int diags = tiles.kh + tiles.kw - 1;
  for (int step = 0; step < diags; ++step) {
    const int s = reverse ? diags - 1 - step : step;
    const int lo = std::max(0, s - tiles.kw + 1);
    const int hi = std::min(tiles.kh - 1, s);
    parallel_for(static_cast<std::size_t>(hi - lo + 1), threads,
                 [&](std::size_t b, std::size_t e) {
                   for (std::size_t k = b; k < e; ++k) {
                     const int ih = lo + static_cast<int>(k);
                     body(ih, s - ih);
                   }
                 });
  }
}

}  // namespace

template <typename T>
TiledForwardResult<T> tiled_scan_2d_forward(const Grid<T>& x,
                                            const SelectiveInputs<T>& inputs,
                                            const ScanParams<T>& params,
                                            const TileConfig& tiles, int threads,
                                            MemCounter* counter, bool save_residuals) {
  require_shapes(x, inputs, params);
  const int h = x.h, w = x.w, n = params.n();
  const int t = tiles.t;
  if (tiles.kh != (h + t - 1) / t || tiles.kw != (w + t - 1) / t)
    throw std::invalid_argument("tile config does not match grid shape");

  TiledForwardResult<T> out;
  out.y = Grid<T>::zeros(h, w);
  out.carries = CarryState<T>(tiles, n);
  CounterSink sink{counter, {}};
  const std::vector<T> zero_slot(static_cast<std::size_t>(t) * n, T(0));

  auto do_tile = [&](int ih, int iw) {
    const TileRange r = tile_range(tiles, h, w, ih, iw);
    const std::size_t cells = static_cast<std::size_t>(r.th) * r.tw;
    thread_local std::vector<T> delta, abar, bbarx, hhor, hv;
    discretize_tile(x, inputs, params, r, delta, abar, bbarx);

    const T* ph_in =
        iw > 0 ? out.carries.ph.data() + out.carries.slot(ih, iw - 1) : zero_slot.data();
    const T* pv_in =
        ih > 0 ? out.carries.pv.data() + out.carries.slot(ih - 1, iw) : zero_slot.data();
    T* ph_out = out.carries.ph.data() + out.carries.slot(ih, iw);
    T* pv_out = out.carries.pv.data() + out.carries.slot(ih, iw);

    tile_horizontal_scan(r, n, abar, bbarx, ph_in, hhor);
    // emit last column as the right neighbor's P^h; identity padding
    // passes carries straight through on edge tiles
    for (int rr = 0; rr < r.th; ++rr)
      std::memcpy(ph_out + static_cast<std::size_t>(rr) * n,
                  hhor.data() + (static_cast<std::size_t>(rr) * r.tw + r.tw - 1) * n,
                  sizeof(T) * n);
    for (int rr = r.th; rr < t; ++rr)
      std::memcpy(ph_out + static_cast<std::size_t>(rr) * n,
                  ph_in + static_cast<std::size_t>(rr) * n, sizeof(T) * n);

    // vertical segmented scan over the horizontal states, same a_bar,
    // seeded by P^v; the C readout is fused into the row sweep
    hv.resize(static_cast<std::size_t>(r.tw) * n);
    std::memcpy(hv.data(), pv_in, sizeof(T) * hv.size());
    for (int rr = 0; rr < r.th; ++rr) {
      const std::size_t row = static_cast<std::size_t>(rr) * r.tw * n;
      const T* a_row = abar.data() + row;
      const T* hh_row = hhor.data() + row;
      const std::size_t row_len = static_cast<std::size_t>(r.tw) * n;
      for (std::size_t k = 0; k < row_len; ++k)
        hv[k] = num::ssm_step(a_row[k], hv[k], hh_row[k]);
      const int gi = r.i0 + rr;
      for (int cc = 0; cc < r.tw; ++cc) {
        const int gj = r.j0 + cc;
        const T* pc = inputs.c.data.data() + inputs.c.idx(gi, gj, 0);
        const T* hs = hv.data() + static_cast<std::size_t>(cc) * n;
        T acc = T(0);
        for (int d = 0; d < n; ++d) acc = std::fma(pc[d], hs[d], acc);
        out.y.at(gi, gj) = std::fma(params.d_skip, x.at(gi, gj), acc);
      }
    }
    std::memcpy(pv_out, hv.data(), sizeof(T) * hv.size());
    for (int cc = r.tw; cc < t; ++cc)
      std::memcpy(pv_out + static_cast<std::size_t>(cc) * n,
                  pv_in + static_cast<std::size_t>(cc) * n, sizeof(T) * n);

    if (sink.target) {
      MemCounter c;
      c.payload_reads = 2 * cells + 2 * cells * static_cast<std::uint64_t>(n);
      c.payload_writes = cells;
      c.carry_traffic = 4ull * t * n;  // read P^h,P^v + write P^h,P^v
      c.padding_elements = 2ull * n * tile_pad_elements(t, r.th, r.tw);
      sink.add(c);
    }
  };

  for_each_tile(tiles, threads, /*reverse=*/false, do_tile);

  if (save_residuals) {
    out.saved.x = x;
    out.saved.inputs = inputs;
    out.saved.params = params;
    out.saved.tiles = tiles;
    out.saved.carries = out.carries;
    out.saved.valid = true;
  }
  return out;
}

template <typename T>
GradBundle<T> tiled_scan_2d_backward(const SavedForward<T>& saved, const Grid<T>& dy,
                                     int threads) {
  if (!saved.valid)
    throw std::logic_error("tiled_scan_2d_backward: stale saved forward state");
  const Grid<T>& x = saved.x;
  if (dy.h != x.h || dy.w != x.w || dy.d != 1)
    throw std::invalid_argument("tiled_scan_2d_backward: dy shape mismatch");
  const int h = x.h, w = x.w, n = saved.params.n();
  const TileConfig& tiles = saved.tiles;
  const int t = tiles.t;

  GradBundle<T> g;
  g.dx = Grid<T>::zeros(h, w);
  g.dz_raw = Grid<T>::zeros(h, w);
  g.da.assign(n, T(0));
  g.db = Grid<T>::zeros(h, w, n);
  g.dc = Grid<T>::zeros(h, w, n);

  const std::size_t n_tiles = static_cast<std::size_t>(tiles.kh) * tiles.kw;
  const std::size_t slot_sz = static_cast<std::size_t>(t) * n;
  // reverse carries between tiles: a (.) adjoint of each tile's first row
  // (gv, consumed above) and first column (gh, consumed to the left)
  std::vector<T> gv(n_tiles * slot_sz, T(0));
  std::vector<T> gh(n_tiles * slot_sz, T(0));
  // per-tile partials of the scalar groups, reduced tile-major at the end
  std::vector<T> da_part(n_tiles * static_cast<std::size_t>(n), T(0));
  std::vector<T> dbias_part(n_tiles, T(0));
  std::vector<T> dd_part(n_tiles, T(0));
  const std::vector<T> zero_slot(slot_sz, T(0));

  auto do_tile = [&](int ih, int iw) {
    const TileRange r = tile_range(tiles, h, w, ih, iw);
    const std::size_t cells = static_cast<std::size_t>(r.th) * r.tw;
    const std::size_t tile_id = static_cast<std::size_t>(ih) * tiles.kw + iw;
    const std::size_t row_len = static_cast<std::size_t>(r.tw) * n;

    thread_local std::vector<T> delta, abar, bbarx, hhor, hfull, gsl, ghor, work;
    discretize_tile(x, saved.inputs, saved.params, r, delta, abar, bbarx);
    hfull.resize(cells * n);
    gsl.resize(cells * n);
    ghor.resize(cells * n);
    work.resize(row_len);

    const T* ph_in = iw > 0 ? saved.carries.ph.data() + saved.carries.slot(ih, iw - 1)
                            : zero_slot.data();
    const T* pv_in = ih > 0 ? saved.carries.pv.data() + saved.carries.slot(ih - 1, iw)
                            : zero_slot.data();

    // scans 1 + 2: reconstruct h_hor and h from the saved carries
    tile_horizontal_scan(r, n, abar, bbarx, ph_in, hhor);
    std::memcpy(work.data(), pv_in, sizeof(T) * row_len);
    for (int rr = 0; rr < r.th; ++rr) {
      const std::size_t row = static_cast<std::size_t>(rr) * row_len;
      for (std::size_t k = 0; k < row_len; ++k)
        work[k] = num::ssm_step(abar[row + k], work[k], hhor[row + k]);
      std::memcpy(hfull.data() + row, work.data(), sizeof(T) * row_len);
    }

    // scan 3: reverse vertical, G = C*dy + a_below * G_below
    if (ih + 1 < tiles.kh)
      std::memcpy(work.data(),
                  gv.data() + (static_cast<std::size_t>(ih + 1) * tiles.kw + iw) * slot_sz,
                  sizeof(T) * row_len);
    else
      std::fill(work.begin(), work.end(), T(0));  // zero beyond the last row
    for (int rr = r.th - 1; rr >= 0; --rr) {
      const int gi = r.i0 + rr;
      const std::size_t row = static_cast<std::size_t>(rr) * row_len;
      for (int cc = 0; cc < r.tw; ++cc) {
        const int gj = r.j0 + cc;
        const T dyv = dy.at(gi, gj);
        const std::size_t base = row + static_cast<std::size_t>(cc) * n;
        const T* pc = saved.inputs.c.data.data() + saved.inputs.c.idx(gi, gj, 0);
        T* dn = work.data() + static_cast<std::size_t>(cc) * n;
        for (int d = 0; d < n; ++d) {
          const T gval = std::fma(pc[d], dyv, dn[d]);
          gsl[base + d] = gval;
          dn[d] = abar[base + d] * gval;
        }
      }
    }
    std::memcpy(gv.data() + tile_id * slot_sz, work.data(), sizeof(T) * row_len);

    // scan 4: reverse horizontal, Ghor = G + a_right * Ghor_right
    {
      const T* gh_in =
          iw + 1 < tiles.kw
              ? gh.data() + (static_cast<std::size_t>(ih) * tiles.kw + iw + 1) * slot_sz
              : nullptr;
      T* gh_out = gh.data() + tile_id * slot_sz;
      T right[kMaxStateDim];
      for (int rr = 0; rr < r.th; ++rr) {
        const std::size_t row = static_cast<std::size_t>(rr) * row_len;
        if (gh_in)
          std::memcpy(right, gh_in + static_cast<std::size_t>(rr) * n, sizeof(T) * n);
        else
          std::memset(right, 0, sizeof(T) * n);  // zero beyond the last column
        for (int cc = r.tw - 1; cc >= 0; --cc) {
          const std::size_t base = row + static_cast<std::size_t>(cc) * n;
          for (int d = 0; d < n; ++d) {
            const T gval = gsl[base + d] + right[d];
            ghor[base + d] = gval;
            right[d] = abar[base + d] * gval;
          }
        }
        std::memcpy(gh_out + static_cast<std::size_t>(rr) * n, right, sizeof(T) * n);
      }
    }

    // chain rule through a_bar = exp(delta*A), b_bar_x = delta*B*x and
    // delta = softplus(z + bias); row-major within the tile
    T* da_t = da_part.data() + tile_id * n;
    T dbias_t = T(0), dd_t = T(0);
    const T* pa = saved.params.a.data();
    for (int rr = 0; rr < r.th; ++rr) {
      const int gi = r.i0 + rr;
      const std::size_t row = static_cast<std::size_t>(rr) * row_len;
      for (int cc = 0; cc < r.tw; ++cc) {
        const int gj = r.j0 + cc;
        const std::size_t cell = static_cast<std::size_t>(rr) * r.tw + cc;
        const std::size_t base = row + static_cast<std::size_t>(cc) * n;
        const T dyv = dy.at(gi, gj);
        const T xv = x.at(gi, gj);
        const T dv = delta[cell];
        const T sig = num::sigmoid(saved.inputs.z_raw.at(gi, gj) + saved.params.bias);
        const T* pb = saved.inputs.b.data.data() + saved.inputs.b.idx(gi, gj, 0);
        T* pdb = g.db.data.data() + g.db.idx(gi, gj, 0);
        T* pdc = g.dc.data.data() + g.dc.idx(gi, gj, 0);
        T ddelta = T(0);
        T sum_ghor_b = T(0);
        for (int d = 0; d < n; ++d) {
          const T hh_left =
              cc > 0 ? hhor[base - n + d] : ph_in[static_cast<std::size_t>(rr) * n + d];
          const T h_up = rr > 0 ? hfull[base - row_len + d]
                                : pv_in[static_cast<std::size_t>(cc) * n + d];
          const T gver = gsl[base + d];
          const T ghr = ghor[base + d];
          const T dabar = std::fma(ghr, hh_left, gver * h_up);
          const T av = abar[base + d];
          da_t[d] = std::fma(dabar, dv * av, da_t[d]);
          ddelta = std::fma(dabar, av * pa[d], ddelta);
          ddelta = std::fma(ghr, pb[d] * xv, ddelta);
          pdb[d] = ghr * (dv * xv);
          pdc[d] = dyv * hfull[base + d];
          sum_ghor_b = std::fma(ghr, pb[d], sum_ghor_b);
        }
        g.dx.at(gi, gj) = std::fma(saved.params.d_skip, dyv, dv * sum_ghor_b);
        g.dz_raw.at(gi, gj) = ddelta * sig;
        dbias_t += ddelta * sig;
        dd_t += dyv * xv;
      }
    }
    dbias_part[tile_id] = dbias_t;
    dd_part[tile_id] = dd_t;
  };

  for_each_tile(tiles, threads, /*reverse=*/true, do_tile);

  for (std::size_t k = 0; k < n_tiles; ++k) {
    for (int d = 0; d < n; ++d) g.da[d] += da_part[k * n + d];
    g.dbias += dbias_part[k];
    g.dd += dd_part[k];
  }
  return g;
}

template <typename T>
Grid<T> naive_scan_2d(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                      const ScanParams<T>& params, int threads, MemCounter* counter) {
  require_shapes(x, inputs, params);
  const int h = x.h, w = x.w, n = params.n();
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  Grid<T> y = Grid<T>::zeros(h, w);
  CounterSink sink{counter, {}};

  // N full per-state horizontal grids, materialized in the main store
  std::vector<T> hmaps(static_cast<std::size_t>(n) * hw);

  // pass 1: one full-row 1D selective scan per (row, state); each scan
  // unit derives its own discretization from the raw z and A inputs
  parallel_for(static_cast<std::size_t>(h), threads, [&](std::size_t r0, std::size_t r1) {
    MemCounter local;
    for (std::size_t i = r0; i < r1; ++i) {
      for (int d = 0; d < n; ++d) {
        const T ad = params.a[d];
        T state = T(0);
        T* map = hmaps.data() + static_cast<std::size_t>(d) * hw + i * w;
        for (int j = 0; j < w; ++j) {
          const std::size_t cell = i * w + j;
          const T dv = num::delta_of(inputs.z_raw.data[cell], params.bias);
          const T av = num::abar_of(dv, ad);
          const T bx = num::bbarx_of(dv, inputs.b.data[cell * n + d], x.data[cell]);
          state = num::ssm_step(av, state, bx);
          map[j] = state;
        }
      }
      if (sink.target) {
        local.payload_reads += 2ull * w + static_cast<std::uint64_t>(n) * w;  // x, z, B^d
        local.intermediate_traffic += static_cast<std::uint64_t>(n) * w;      // map writes
        local.padding_elements +=
            static_cast<std::uint64_t>(n) * (pad_to_granularity(w) - w);
      }
    }
    sink.add(local);
  });

  // pass 2: one full-column 1D scan per (column, state) over the
  // materialized maps, discretization re-derived for the vertical pass
  parallel_for(static_cast<std::size_t>(w), threads, [&](std::size_t c0, std::size_t c1) {
    MemCounter local;
    std::vector<T> acc(h);
    for (std::size_t j = c0; j < c1; ++j) {
      std::fill(acc.begin(), acc.end(), T(0));
      for (int d = 0; d < n; ++d) {
        const T ad = params.a[d];
        const T* map = hmaps.data() + static_cast<std::size_t>(d) * hw;
        T state = T(0);
        for (int i = 0; i < h; ++i) {
          const std::size_t cell = static_cast<std::size_t>(i) * w + j;
          const T dv = num::delta_of(inputs.z_raw.data[cell], params.bias);
          const T av = num::abar_of(dv, ad);
          state = num::ssm_step(av, state, map[cell]);
          acc[i] = std::fma(inputs.c.data[cell * n + d], state, acc[i]);
        }
      }
      for (int i = 0; i < h; ++i) {
        const std::size_t cell = static_cast<std::size_t>(i) * w + j;
        y.data[cell] = std::fma(params.d_skip, x.data[cell], acc[i]);
      }
      if (sink.target) {
        local.payload_reads += static_cast<std::uint64_t>(n) * h;         // C^d
        local.payload_writes += static_cast<std::uint64_t>(h);            // y
        local.intermediate_traffic += static_cast<std::uint64_t>(n) * h;  // map reads
        local.padding_elements +=
            static_cast<std::uint64_t>(n) * (pad_to_granularity(h) - h);
      }
    }
    sink.add(local);
  });

  return y;
}

template <typename T>
Grid<T> block_scan_1d_forward(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                              const ScanParams<T>& params, int threads,
                              MemCounter* counter) {
  require_shapes(x, inputs, params);
  const int h = x.h, w = x.w, n = params.n();
  const std::size_t l = static_cast<std::size_t>(h) * w;

  std::vector<T> delta(l);
  for (std::size_t k = 0; k < l; ++k)
    delta[k] = num::delta_of(inputs.z_raw.data[k], params.bias);

  Grid<T> y = Grid<T>::zeros(h, w);
  std::vector<LinOp<T>> elems(l);
  const std::size_t seg_len[1] = {l};
  const T carry[1] = {T(0)};
  std::uint64_t padding = 0;
  for (int d = 0; d < n; ++d) {
    const T ad = params.a[d];
    for (std::size_t k = 0; k < l; ++k) {
      elems[k].a = num::abar_of(delta[k], ad);
      elems[k].b = num::bbarx_of(delta[k], inputs.b.data[k * n + d], x.data[k]);
    }
    std::vector<T> states =
        segmented_block_scan<T>(elems, seg_len, carry, threads, &padding);
    for (std::size_t k = 0; k < l; ++k)
      y.data[k] = std::fma(inputs.c.data[k * n + d], states[k], y.data[k]);
  }
  for (std::size_t k = 0; k < l; ++k)
    y.data[k] = std::fma(params.d_skip, x.data[k], y.data[k]);

  if (counter) {
    counter->payload_reads += 2 * l + 2 * static_cast<std::uint64_t>(n) * l;
    counter->payload_writes += l;
    counter->padding_elements += padding;
  }
  return y;
}

#define SCAN2D_INSTANTIATE_ENGINE(T)                                                   \
  template TiledForwardResult<T> tiled_scan_2d_forward<T>(                             \
      const Grid<T>&, const SelectiveInputs<T>&, const ScanParams<T>&,                 \
      const TileConfig&, int, MemCounter*, bool);                                      \
  template GradBundle<T> tiled_scan_2d_backward<T>(const SavedForward<T>&,             \
                                                   const Grid<T>&, int);               \
  template Grid<T> naive_scan_2d<T>(const Grid<T>&, const SelectiveInputs<T>&,         \
                                    const ScanParams<T>&, int, MemCounter*);           \
  template Grid<T> block_scan_1d_forward<T>(const Grid<T>&, const SelectiveInputs<T>&, \
                                            const ScanParams<T>&, int, MemCounter*);

SCAN2D_INSTANTIATE_ENGINE(float)
SCAN2D_INSTANTIATE_ENGINE(double)

#undef SCAN2D_INSTANTIATE_ENGINE

}  // namespace scan2d
