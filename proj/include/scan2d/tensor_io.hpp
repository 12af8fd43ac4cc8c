#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "scan2d/types.hpp"

// "T2DM" binary tensor format, fixed little-endian:
//   magic "T2DM" | version u8 = 1 | dtype u8 (0 = f32, 1 = f64) | ndim u8 |
//   reserved u8 = 0 | ndim x u64 dims | row-major payload.
// Grids are written with trailing singleton dimensions dropped (at least
// one dimension is kept), so a 2x3 single-channel grid encodes dims (2,3)
// and a 1x1x1 grid encodes dims (1).

namespace scan2d {

class TensorIoError : public std::runtime_error {
 public:
  enum class Kind { BadMagic, BadVersion, BadDtype, BadShape, Truncated, NonFinite, Io };

  TensorIoError(Kind k, const std::string& msg, std::size_t byte_offset = 0)
      : std::runtime_error(msg), kind(k), offset(byte_offset) {}

  Kind kind;
  std::size_t offset;  // byte position in the stream where the failure was seen
};

/// Runtime-typed tensor, used where the dtype is only known from the file.
struct Tensor {
  Dtype dtype = Dtype::f64;
  std::vector<std::uint64_t> dims;
  std::vector<float> f32;
  std::vector<double> f64;

  std::size_t count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }
};

std::size_t write_tensor(const Tensor& t, std::ostream& out);
Tensor read_tensor(std::istream& in);

template <typename T>
Tensor tensor_from_grid(const Grid<T>& g);

/// Maps dims (a) -> a x 1 x 1, (a,b) -> a x b x 1, (a,b,c) -> a x b x c.
template <typename T>
Grid<T> grid_from_tensor(const Tensor& t);

template <typename T>
std::size_t write_tensor(const Grid<T>& g, std::ostream& out) {
  return write_tensor(tensor_from_grid(g), out);
}

std::size_t write_tensor_file(const Tensor& t, const std::string& path);
Tensor read_tensor_file(const std::string& path);

}  // namespace scan2d
