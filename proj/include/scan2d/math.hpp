#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

// Shared numeric kernels. Every scan variant calls the same discretization
// and update helpers, so identical inputs produce bit-identical states in
// the sequential oracle and in both engines.

namespace scan2d::num {

// Above this the identity branch of softplus is exact to machine precision.
inline constexpr double kSoftplusCutoff = 20.0;

template <typename T>
inline T softplus(T x) {
  if (x > T(kSoftplusCutoff)) return x;
  return std::log1p(std::exp(x));
}

template <typename T>
inline T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
inline T silu(T x) {
  return x * sigmoid(x);
}

/// Branch-free single-precision exp, ~2 ulp over the normal range.
/// Inputs below the single-precision normal range flush to zero (no
/// denormal outputs). Written with fma throughout so scalar and
/// auto-vectorized evaluations agree bit for bit.
inline float fast_expf(float x) {
  constexpr float kMaxIn = 88.02f;     // keeps 2^k finite after split scaling
  constexpr float kMinIn = -87.33654f; // below this expf underflows the normal range
  const bool flush = x < kMinIn;
  float xc = std::min(std::max(x, kMinIn), kMaxIn);

  constexpr float kLog2e = 1.44269504088896341f;
  constexpr float kLn2Hi = 0.693359375f;
  constexpr float kLn2Lo = -2.12194440e-4f;

  float kf = std::floor(std::fma(xc, kLog2e, 0.5f));
  float r = std::fma(kf, -kLn2Hi, xc);
  r = std::fma(kf, -kLn2Lo, r);

  // degree-5 minimax polynomial for exp(r) - 1 - r on |r| <= ln2/2
  float p = 1.9875691500e-4f;
  p = std::fma(p, r, 1.3981999507e-3f);
  p = std::fma(p, r, 8.3334519073e-3f);
  p = std::fma(p, r, 4.1665795894e-2f);
  p = std::fma(p, r, 1.6666665459e-1f);
  p = std::fma(p, r, 5.0000001201e-1f);
  float y = std::fma(p, r * r, r) + 1.0f;

  // scale by 2^k in two halves so k = -126..127 never over/underflows
  int k = static_cast<int>(kf);
  int k0 = k >> 1;
  int k1 = k - k0;
  float s0 = std::bit_cast<float>(static_cast<std::uint32_t>(k0 + 127) << 23);
  float s1 = std::bit_cast<float>(static_cast<std::uint32_t>(k1 + 127) << 23);
  y = y * s0 * s1;
  return flush ? 0.0f : y;
}

inline float apply_exp(float x) { return fast_expf(x); }
inline double apply_exp(double x) { return std::exp(x); }

// Discretization of one cell, one definition for every variant.
template <typename T>
inline T delta_of(T z_raw, T bias) {
  return softplus(z_raw + bias);
}

template <typename T>
inline T abar_of(T delta, T a) {
  return apply_exp(delta * a);
}

template <typename T>
inline T bbarx_of(T delta, T b, T x) {
  return (delta * b) * x;
}

/// State update h <- a*h + b, fused.
template <typename T>
inline T ssm_step(T a, T h, T b) {
  return std::fma(a, h, b);
}

}  // namespace scan2d::num
