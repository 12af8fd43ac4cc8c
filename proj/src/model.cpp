#include "scan2d/model.hpp"

#include <cmath>
#include <stdexcept>

#include "scan2d/engine.hpp"
#include "scan2d/math.hpp"
#include "scan2d/parallel.hpp"
#include "scan2d/rng.hpp"

namespace scan2d {

namespace {

template <typename T>
std::vector<T> seeded_linear(Rng& rng, std::size_t count, int fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::vector<T> v(count);
  rng.fill_uniform(v, -bound, bound);
  return v;
}

}  // namespace

template <typename T>
BlockWeights<T> BlockWeights<T>::seeded(int d_channels, const BlockConfig& cfg,
                                        std::uint64_t seed) {
  if (d_channels <= 0 || cfg.e <= 0 || cfg.n <= 0)
    throw std::invalid_argument("BlockWeights: dimensions must be positive");
  Rng rng(seed);
  BlockWeights<T> w;
  w.d = d_channels;
  w.cfg = cfg;
  const std::size_t d = static_cast<std::size_t>(d_channels);
  const std::size_t e = static_cast<std::size_t>(cfg.e);
  const std::size_t n = static_cast<std::size_t>(cfg.n);

  w.norm_scale.assign(d, T(1));
  w.norm_offset.assign(d, T(0));
  w.w_in = seeded_linear<T>(rng, 2 * e * d, d_channels);
  w.conv3 = seeded_linear<T>(rng, e * 9, 9);
  w.conv_bias.assign(e, T(0));
  w.w_z = seeded_linear<T>(rng, e * e, cfg.e);
  w.w_b = seeded_linear<T>(rng, n * e, cfg.e);
  w.w_c = seeded_linear<T>(rng, n * e, cfg.e);

  // negative state rates keep a_bar in (0,1)
  w.a.resize(e * n);
  for (auto& v : w.a) v = static_cast<T>(-rng.uniform(0.1, 1.0));
  w.d_skip.resize(e);
  rng.fill_uniform(w.d_skip, -1.0, 1.0);
  w.bias.resize(e);
  rng.fill_uniform(w.bias, -0.5, 0.5);

  w.w_out = seeded_linear<T>(rng, d * e, cfg.e);
  return w;
}

template <typename T>
AttentionWeights<T> AttentionWeights<T>::seeded(int d_channels, int hidden,
                                                std::uint64_t seed) {
  if (d_channels <= 0 || hidden <= 0)
    throw std::invalid_argument("AttentionWeights: dimensions must be positive");
  Rng rng(seed);
  AttentionWeights<T> w;
  w.d = d_channels;
  w.hidden = hidden;
  w.w1 = seeded_linear<T>(rng, static_cast<std::size_t>(hidden) * d_channels, d_channels);
  w.w2 = seeded_linear<T>(rng, hidden, hidden);
  return w;
}

template <typename T>
Grid<T> embed_with_padding(const MaskedGrid<T>& patches) {
  const Grid<T>& p = patches.patches;
  Grid<T> out = p;
  for (int i = 0; i < p.h; ++i) {
    for (int j = 0; j < p.w; ++j) {
      if (patches.tissue[static_cast<std::size_t>(i) * p.w + j]) continue;
      for (int c = 0; c < p.d; ++c) out.at(i, j, c) = patches.token[c];
    }
  }
  return out;
}

template <typename T>
Grid<T> block_forward(const Grid<T>& x, const BlockWeights<T>& w, int threads) {
  if (x.d != w.d) throw std::invalid_argument("block_forward: channel count mismatch");
  const int h = x.h, wd = x.w, dch = x.d;
  const int e = w.cfg.e, n = w.cfg.n;
  const std::size_t cells = static_cast<std::size_t>(h) * wd;

  // pre-block layer norm over channels
  std::vector<T> normed(cells * dch);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const T* px = x.data.data() + cell * dch;
    T mean = T(0);
    for (int c = 0; c < dch; ++c) mean += px[c];
    mean /= static_cast<T>(dch);
    T var = T(0);
    for (int c = 0; c < dch; ++c) var += (px[c] - mean) * (px[c] - mean);
    var /= static_cast<T>(dch);
    const T inv = T(1) / std::sqrt(var + T(1e-5));
    for (int c = 0; c < dch; ++c)
      normed[cell * dch + c] =
          std::fma((px[c] - mean) * inv, w.norm_scale[c], w.norm_offset[c]);
  }

  // input projection into stream and gate
  std::vector<T> stream(cells * e), gate(cells * e);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const T* pn = normed.data() + cell * dch;
    for (int k = 0; k < e; ++k) {
      T s = T(0), g = T(0);
      const T* ws = w.w_in.data() + static_cast<std::size_t>(k) * dch;
      const T* wg = w.w_in.data() + static_cast<std::size_t>(e + k) * dch;
      for (int c = 0; c < dch; ++c) {
        s = std::fma(ws[c], pn[c], s);
        g = std::fma(wg[c], pn[c], g);
      }
      stream[cell * e + k] = s;
      gate[cell * e + k] = g;
    }
  }

  // depthwise 3x3 convolution with zero padding, then SiLU
  std::vector<T> conv(cells * e);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < wd; ++j) {
      T* out = conv.data() + (static_cast<std::size_t>(i) * wd + j) * e;
      for (int k = 0; k < e; ++k) {
        const T* kern = w.conv3.data() + static_cast<std::size_t>(k) * 9;
        T acc = w.conv_bias[k];
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di;
          if (ii < 0 || ii >= h) continue;
          for (int dj = -1; dj <= 1; ++dj) {
            const int jj = j + dj;
            if (jj < 0 || jj >= wd) continue;
            acc = std::fma(kern[(di + 1) * 3 + (dj + 1)],
                           stream[(static_cast<std::size_t>(ii) * wd + jj) * e + k], acc);
          }
        }
        out[k] = num::silu(acc);
      }
    }
  }

  // selective projections from the activated stream: per-channel z, shared B and C
  std::vector<T> zall(cells * e);
  Grid<T> bgrid = Grid<T>::zeros(h, wd, n);
  Grid<T> cgrid = Grid<T>::zeros(h, wd, n);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const T* ps = conv.data() + cell * e;
    for (int k = 0; k < e; ++k) {
      T acc = T(0);
      const T* wz = w.w_z.data() + static_cast<std::size_t>(k) * e;
      for (int f = 0; f < e; ++f) acc = std::fma(wz[f], ps[f], acc);
      zall[cell * e + k] = acc;
    }
    for (int k = 0; k < n; ++k) {
      T accb = T(0), accc = T(0);
      const T* wb = w.w_b.data() + static_cast<std::size_t>(k) * e;
      const T* wc = w.w_c.data() + static_cast<std::size_t>(k) * e;
      for (int f = 0; f < e; ++f) {
        accb = std::fma(wb[f], ps[f], accb);
        accc = std::fma(wc[f], ps[f], accc);
      }
      bgrid.data[cell * n + k] = accb;
      cgrid.data[cell * n + k] = accc;
    }
  }

  // per-channel 2D selective scan, gated; channels run concurrently
  const TileConfig tiles(h, wd, w.cfg.tile);
  std::vector<T> gated(cells * e);
  parallel_for(static_cast<std::size_t>(e), threads, [&](std::size_t e0, std::size_t e1) {
    for (std::size_t k = e0; k < e1; ++k) {
      Grid<T> xk = Grid<T>::zeros(h, wd);
      Grid<T> zk = Grid<T>::zeros(h, wd);
      for (std::size_t cell = 0; cell < cells; ++cell) {
        xk.data[cell] = conv[cell * e + k];
        zk.data[cell] = zall[cell * e + k];
      }
      std::vector<T> ak(w.a.begin() + k * n, w.a.begin() + (k + 1) * n);
      ScanParams<T> params(std::move(ak), w.d_skip[k], w.bias[k]);
      SelectiveInputs<T> inputs(std::move(zk), bgrid, cgrid);
      auto res = tiled_scan_2d_forward(xk, inputs, params, tiles, 1, nullptr,
                                       /*save_residuals=*/false);
      for (std::size_t cell = 0; cell < cells; ++cell)
        gated[cell * e + k] = res.y.data[cell] * num::silu(gate[cell * e + k]);
    }
  });

  // output projection and residual
  Grid<T> out = x;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const T* pg = gated.data() + cell * e;
    T* po = out.data.data() + cell * dch;
    for (int c = 0; c < dch; ++c) {
      T acc = T(0);
      const T* wo = w.w_out.data() + static_cast<std::size_t>(c) * e;
      for (int k = 0; k < e; ++k) acc = std::fma(wo[k], pg[k], acc);
      po[c] += acc;
    }
  }
  return out;
}

template <typename T>
SlideFeature<T> attention_aggregate(const Grid<T>& features,
                                    const std::vector<std::uint8_t>& tissue,
                                    const AttentionWeights<T>& w) {
  if (features.d != w.d)
    throw std::invalid_argument("attention_aggregate: channel count mismatch");
  if (tissue.size() != static_cast<std::size_t>(features.h) * features.w)
    throw std::invalid_argument("attention_aggregate: mask shape mismatch");
  const std::size_t cells = tissue.size();
  const int dch = features.d;

  bool any = false;
  std::vector<T> scores(cells, T(0));
  T max_score = T(0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!tissue[cell]) continue;
    const T* pf = features.data.data() + cell * dch;
    T s = T(0);
    for (int k = 0; k < w.hidden; ++k) {
      T acc = T(0);
      const T* w1 = w.w1.data() + static_cast<std::size_t>(k) * dch;
      for (int c = 0; c < dch; ++c) acc = std::fma(w1[c], pf[c], acc);
      s = std::fma(w.w2[k], std::tanh(acc), s);
    }
    scores[cell] = s;
    max_score = any ? std::max(max_score, s) : s;
    any = true;
  }
  if (!any) throw std::invalid_argument("attention_aggregate: no tissue positions");

  SlideFeature<T> out;
  out.attention = Grid<T>::zeros(features.h, features.w);
  T denom = T(0);
  for (std::size_t cell = 0; cell < cells; ++cell)
    if (tissue[cell]) denom += std::exp(scores[cell] - max_score);
  out.feature.assign(dch, T(0));
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!tissue[cell]) continue;
    const T att = std::exp(scores[cell] - max_score) / denom;
    out.attention.data[cell] = att;
    const T* pf = features.data.data() + cell * dch;
    for (int c = 0; c < dch; ++c) out.feature[c] = std::fma(att, pf[c], out.feature[c]);
  }
  return out;
}

#define SCAN2D_INSTANTIATE_MODEL(T)                                          \
  template struct BlockWeights<T>;                                           \
  template struct AttentionWeights<T>;                                       \
  template Grid<T> embed_with_padding<T>(const MaskedGrid<T>&);              \
  template Grid<T> block_forward<T>(const Grid<T>&, const BlockWeights<T>&, int); \
  template SlideFeature<T> attention_aggregate<T>(                           \
      const Grid<T>&, const std::vector<std::uint8_t>&, const AttentionWeights<T>&);

SCAN2D_INSTANTIATE_MODEL(float)
SCAN2D_INSTANTIATE_MODEL(double)

#undef SCAN2D_INSTANTIATE_MODEL

}  // namespace scan2d
