#include "scan2d/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "scan2d/math.hpp"

namespace scan2d {

namespace {

template <typename T>
void require_shapes(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                    const ScanParams<T>& params) {
  if (x.d != 1) throw std::invalid_argument("scan input must be single channel");
  if (x.h != inputs.z_raw.h || x.w != inputs.z_raw.w)
    throw std::invalid_argument("input and selective grids must share H and W");
  if (inputs.n() != params.n())
    throw std::invalid_argument("state dimension mismatch between inputs and params");
}

}  // namespace

template <typename T>
DiscretizedGrids<T> discretize(const Grid<T>& x, const SelectiveInputs<T>& inputs,
                               const ScanParams<T>& params) {
  require_shapes(x, inputs, params);
  const int h = x.h, w = x.w, n = params.n();
  DiscretizedGrids<T> out;
  out.delta = Grid<T>::zeros(h, w);
  out.a_bar = Grid<T>::zeros(h, w, n);
  out.b_bar_x = Grid<T>::zeros(h, w, n);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const T delta = num::delta_of(inputs.z_raw.at(i, j), params.bias);
      out.delta.at(i, j) = delta;
      const T xv = x.at(i, j);
      const std::size_t base = out.a_bar.idx(i, j, 0);
      for (int d = 0; d < n; ++d) {
        out.a_bar.data[base + d] = num::abar_of(delta, params.a[d]);
        out.b_bar_x.data[base + d] = num::bbarx_of(delta, inputs.b.data[base + d], xv);
      }
    }
  }
  return out;
}

template <typename T>
std::vector<T> scan_1d_sequential(std::span<const T> a_bar, std::span<const T> b_bar_x,
                                  std::span<const T> c, T d_skip, std::span<const T> x,
                                  int n) {
  const std::size_t l = x.size();
  const std::size_t ln = l * static_cast<std::size_t>(n);
  if (a_bar.size() != ln || b_bar_x.size() != ln || c.size() != ln)
    throw std::invalid_argument("scan_1d_sequential: sequence length mismatch");
  std::vector<T> h(static_cast<std::size_t>(n), T(0));
  std::vector<T> y(l);
  for (std::size_t t = 0; t < l; ++t) {
    T acc = T(0);
    const std::size_t base = t * n;
    for (int d = 0; d < n; ++d) {
      h[d] = num::ssm_step(a_bar[base + d], h[d], b_bar_x[base + d]);
      acc = std::fma(c[base + d], h[d], acc);
    }
    y[t] = std::fma(d_skip, x[t], acc);
  }
  return y;
}

template <typename T>
ScanStates<T> scan_2d_sequential(const DiscretizedGrids<T>& g, const Grid<T>& c,
                                 T d_skip, const Grid<T>& x) {
  const int h = x.h, w = x.w;
  const int n = g.a_bar.d;
  if (!g.a_bar.same_shape(g.b_bar_x) || g.a_bar.h != h || g.a_bar.w != w)
    throw std::invalid_argument("scan_2d_sequential: discretized grid shape mismatch");
  if (!c.same_shape(g.a_bar))
    throw std::invalid_argument("scan_2d_sequential: C grid shape mismatch");

  ScanStates<T> s;
  s.h_hor = Grid<T>::zeros(h, w, n);
  s.h = Grid<T>::zeros(h, w, n);
  s.y = Grid<T>::zeros(h, w);

  // horizontal pass, zero left boundary
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const std::size_t base = g.a_bar.idx(i, j, 0);
      const std::size_t prev = j > 0 ? g.a_bar.idx(i, j - 1, 0) : 0;
      for (int d = 0; d < n; ++d) {
        const T left = j > 0 ? s.h_hor.data[prev + d] : T(0);
        s.h_hor.data[base + d] =
            num::ssm_step(g.a_bar.data[base + d], left, g.b_bar_x.data[base + d]);
      }
    }
  }

  // vertical pass over the horizontal states, same a_bar, zero top boundary
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const std::size_t base = g.a_bar.idx(i, j, 0);
      const std::size_t above = i > 0 ? g.a_bar.idx(i - 1, j, 0) : 0;
      T acc = T(0);
      for (int d = 0; d < n; ++d) {
        const T up = i > 0 ? s.h.data[above + d] : T(0);
        const T hv = num::ssm_step(g.a_bar.data[base + d], up, s.h_hor.data[base + d]);
        s.h.data[base + d] = hv;
        acc = std::fma(c.data[base + d], hv, acc);
      }
      s.y.at(i, j) = std::fma(d_skip, x.at(i, j), acc);
    }
  }
  return s;
}

template <typename T>
T closed_form_constant(T a_bar, T b_bar_x, long i, long j) {
  if (i < 1 || j < 1)
    throw std::invalid_argument("closed_form_constant: indices are 1-based");
  // sum over the upper-left rectangle of a^(manhattan distance) * b,
  // which factors into two geometric partial sums
  auto geometric = [](T a, long terms) -> T {
    if (a == T(1)) return static_cast<T>(terms);
    return (T(1) - std::pow(a, static_cast<T>(terms))) / (T(1) - a);
  };
  return geometric(a_bar, i) * geometric(a_bar, j) * b_bar_x;
}

template <typename T>
std::vector<T> flatten_row_major(const Grid<T>& g) {
  return g.data;  // storage is already row major, (1,1),(1,2),...,(2,1),...
}

template <typename T>
Grid<T> unflatten_row_major(int h, int w, int d, const std::vector<T>& flat) {
  return Grid<T>(h, w, d, flat);
}

template <typename T>
T impulse_coefficient(ScanKind kind, int src_i, int src_j, int tgt_i, int tgt_j,
                      T a_bar, int width) {
  if (width <= 0) throw std::invalid_argument("impulse_coefficient: width must be positive");
  if (src_i < 0 || src_j < 0 || src_j >= width || tgt_j >= width || tgt_j < 0 || tgt_i < 0)
    throw std::invalid_argument("impulse_coefficient: coordinates out of range");
  if (kind == ScanKind::TwoD) {
    if (src_i > tgt_i || src_j > tgt_j)
      throw std::invalid_argument("impulse_coefficient: source after target");
  } else {
    if (static_cast<long>(src_i) * width + src_j > static_cast<long>(tgt_i) * width + tgt_j)
      throw std::invalid_argument("impulse_coefficient: source after target");
  }

  const int h = tgt_i + 1;
  const int n = 1;
  DiscretizedGrids<T> g;
  g.delta = Grid<T>::zeros(h, width);
  g.a_bar = Grid<T>::zeros(h, width, n);
  g.b_bar_x = Grid<T>::zeros(h, width, n);
  for (auto& v : g.a_bar.data) v = a_bar;
  g.b_bar_x.at(src_i, src_j, 0) = T(1);  // B = 1, x = impulse at the source

  if (kind == ScanKind::TwoD) {
    Grid<T> c = Grid<T>::zeros(h, width, n);
    for (auto& v : c.data) v = T(1);  // C selects the raw state
    Grid<T> x = Grid<T>::zeros(h, width);
    ScanStates<T> s = scan_2d_sequential(g, c, T(0), x);
    return s.h.at(tgt_i, tgt_j, 0);
  }
  std::vector<T> a_flat = flatten_row_major(g.a_bar);
  std::vector<T> bx_flat = flatten_row_major(g.b_bar_x);
  std::vector<T> c_flat(a_flat.size(), T(1));
  std::vector<T> x_flat(static_cast<std::size_t>(h) * width, T(0));
  std::vector<T> y = scan_1d_sequential<T>(a_flat, bx_flat, c_flat, T(0), x_flat, n);
  return y[static_cast<std::size_t>(tgt_i) * width + tgt_j];
}

#define SCAN2D_INSTANTIATE_REF(T)                                                        \
  template DiscretizedGrids<T> discretize<T>(const Grid<T>&, const SelectiveInputs<T>&,  \
                                             const ScanParams<T>&);                      \
  template std::vector<T> scan_1d_sequential<T>(std::span<const T>, std::span<const T>,  \
                                                std::span<const T>, T, std::span<const T>, \
                                                int);                                    \
  template ScanStates<T> scan_2d_sequential<T>(const DiscretizedGrids<T>&, const Grid<T>&, \
                                               T, const Grid<T>&);                       \
  template T closed_form_constant<T>(T, T, long, long);                                  \
  template std::vector<T> flatten_row_major<T>(const Grid<T>&);                          \
  template Grid<T> unflatten_row_major<T>(int, int, int, const std::vector<T>&);         \
  template T impulse_coefficient<T>(ScanKind, int, int, int, int, T, int);

SCAN2D_INSTANTIATE_REF(float)
SCAN2D_INSTANTIATE_REF(double)

#undef SCAN2D_INSTANTIATE_REF

}  // namespace scan2d
