#pragma once

#include <cstdint>
#include <vector>

#include "scan2d/types.hpp"

// Forward-only toy model: padding-token embedding, a selective-scan block
// around the tiled 2D engine, and the attention aggregator. No training.

namespace scan2d {

struct BlockConfig {
  int e = 128;        // inner SSM width
  int n = 16;         // state dimensions per channel
  int att_hidden = 64;
  int tile = 16;
};

/// Deterministically seeded weights; uniform in +-1/sqrt(fan_in).
template <typename T>
struct BlockWeights {
  int d = 0;  // external feature width
  BlockConfig cfg;

  // pre-block layer norm over channels
  std::vector<T> norm_scale;  // D
  std::vector<T> norm_offset; // D

  std::vector<T> w_in;    // (2E) x D input projection, stream then gate
  std::vector<T> conv3;   // E x 3 x 3 depthwise kernels
  std::vector<T> conv_bias;  // E

  // selective projections from the E-channel stream
  std::vector<T> w_z;  // E x E  -> per-channel z_raw
  std::vector<T> w_b;  // N x E  -> shared B
  std::vector<T> w_c;  // N x E  -> shared C

  std::vector<T> a;       // E x N state rates, negative
  std::vector<T> d_skip;  // E
  std::vector<T> bias;    // E

  std::vector<T> w_out;  // D x E output projection

  static BlockWeights seeded(int d_channels, const BlockConfig& cfg, std::uint64_t seed);
};

template <typename T>
struct AttentionWeights {
  int d = 0;
  int hidden = 0;
  std::vector<T> w1;  // hidden x D, tanh
  std::vector<T> w2;  // hidden     -> scalar score

  static AttentionWeights seeded(int d_channels, int hidden, std::uint64_t seed);
};

template <typename T>
struct SlideFeature {
  std::vector<T> feature;  // D aggregate
  Grid<T> attention;       // H x W, sums to 1 over tissue, 0 elsewhere
};

/// Tissue positions keep their embedding; every non-tissue position is
/// replaced by the padding token, producing a dense rectangular grid.
template <typename T>
Grid<T> embed_with_padding(const MaskedGrid<T>& patches);

/// norm -> input projection (stream, gate) -> depthwise 3x3 conv (zero
/// padded) -> SiLU -> per-channel tiled 2D selective scan -> gate with
/// SiLU(gate) -> output projection -> residual. Shape preserving.
template <typename T>
Grid<T> block_forward(const Grid<T>& x, const BlockWeights<T>& w, int threads = 1);

/// score = w2 . tanh(w1 f); softmax over tissue positions only.
template <typename T>
SlideFeature<T> attention_aggregate(const Grid<T>& features,
                                    const std::vector<std::uint8_t>& tissue,
                                    const AttentionWeights<T>& w);

}  // namespace scan2d
