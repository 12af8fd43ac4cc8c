#include "scan2d/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace scan2d {

namespace {

constexpr char kMagic[4] = {'T', '2', 'D', 'M'};
constexpr std::uint8_t kVersion = 1;
constexpr int kMaxNdim = 3;

void put_u64_le(std::uint64_t v, unsigned char* out) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint64_t get_u64_le(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

void write_bytes(std::ostream& out, const unsigned char* p, std::size_t len,
                 std::size_t& offset) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(len));
  if (!out) throw TensorIoError(TensorIoError::Kind::Io, "tensor write failed", offset);
  offset += len;
}

void read_bytes(std::istream& in, unsigned char* p, std::size_t len, std::size_t& offset) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len)
    throw TensorIoError(TensorIoError::Kind::Truncated,
                        "tensor stream truncated at byte " +
                            std::to_string(offset + static_cast<std::size_t>(in.gcount())),
                        offset + static_cast<std::size_t>(in.gcount()));
  offset += len;
}

template <typename T, typename Bits>
void encode_payload(const std::vector<T>& v, std::vector<unsigned char>& out) {
  out.resize(v.size() * sizeof(Bits));
  unsigned char* p = out.data();
  for (const T& x : v) {
    Bits b = std::bit_cast<Bits>(x);
    for (std::size_t i = 0; i < sizeof(Bits); ++i)
      p[i] = static_cast<unsigned char>(b >> (8 * i));
    p += sizeof(Bits);
  }
}

template <typename T, typename Bits>
void decode_payload(const std::vector<unsigned char>& in, std::vector<T>& v,
                    std::size_t count, std::size_t payload_offset) {
  v.resize(count);
  const unsigned char* p = in.data();
  for (std::size_t k = 0; k < count; ++k) {
    Bits b = 0;
    for (std::size_t i = 0; i < sizeof(Bits); ++i)
      b |= static_cast<Bits>(p[i]) << (8 * i);
    v[k] = std::bit_cast<T>(b);
    if (!std::isfinite(v[k]))
      throw TensorIoError(TensorIoError::Kind::NonFinite,
                          "non-finite entry at index " + std::to_string(k),
                          payload_offset + k * sizeof(Bits));
    p += sizeof(Bits);
  }
}

}  // namespace

std::size_t write_tensor(const Tensor& t, std::ostream& out) {
  if (t.dims.empty() || t.dims.size() > kMaxNdim)
    throw TensorIoError(TensorIoError::Kind::BadShape, "tensor must have 1 to 3 dims");
  std::size_t count = t.count();
  std::size_t have = t.dtype == Dtype::f32 ? t.f32.size() : t.f64.size();
  if (have != count)
    throw TensorIoError(TensorIoError::Kind::BadShape, "payload length does not match dims");

  std::size_t offset = 0;
  unsigned char header[8];
  std::memcpy(header, kMagic, 4);
  header[4] = kVersion;
  header[5] = static_cast<std::uint8_t>(t.dtype);
  header[6] = static_cast<std::uint8_t>(t.dims.size());
  header[7] = 0;
  write_bytes(out, header, 8, offset);

  unsigned char dim_bytes[8];
  for (auto d : t.dims) {
    put_u64_le(d, dim_bytes);
    write_bytes(out, dim_bytes, 8, offset);
  }

  std::vector<unsigned char> payload;
  if (t.dtype == Dtype::f32)
    encode_payload<float, std::uint32_t>(t.f32, payload);
  else
    encode_payload<double, std::uint64_t>(t.f64, payload);
  if (!payload.empty()) write_bytes(out, payload.data(), payload.size(), offset);
  return offset;
}

Tensor read_tensor(std::istream& in) {
  std::size_t offset = 0;
  unsigned char header[8];
  read_bytes(in, header, 8, offset);
  if (std::memcmp(header, kMagic, 4) != 0)
    throw TensorIoError(TensorIoError::Kind::BadMagic, "bad magic", 0);
  if (header[4] != kVersion)
    throw TensorIoError(TensorIoError::Kind::BadVersion,
                        "unsupported version " + std::to_string(header[4]), 4);
  if (header[5] > 1)
    throw TensorIoError(TensorIoError::Kind::BadDtype,
                        "unsupported dtype byte " + std::to_string(header[5]), 5);
  int ndim = header[6];
  if (ndim < 1 || ndim > kMaxNdim)
    throw TensorIoError(TensorIoError::Kind::BadShape,
                        "unsupported ndim " + std::to_string(ndim), 6);

  Tensor t;
  t.dtype = static_cast<Dtype>(header[5]);
  std::size_t count = 1;
  for (int i = 0; i < ndim; ++i) {
    unsigned char dim_bytes[8];
    read_bytes(in, dim_bytes, 8, offset);
    std::uint64_t d = get_u64_le(dim_bytes);
    if (d == 0 || d > (std::uint64_t(1) << 32))
      throw TensorIoError(TensorIoError::Kind::BadShape, "invalid dimension", offset - 8);
    if (count > std::numeric_limits<std::size_t>::max() / d)
      throw TensorIoError(TensorIoError::Kind::BadShape, "dimension overflow", offset - 8);
    t.dims.push_back(d);
    count *= d;
  }

  std::size_t elem = t.dtype == Dtype::f32 ? 4 : 8;
  std::vector<unsigned char> payload(count * elem);
  std::size_t payload_offset = offset;
  read_bytes(in, payload.data(), payload.size(), offset);
  if (t.dtype == Dtype::f32)
    decode_payload<float, std::uint32_t>(payload, t.f32, count, payload_offset);
  else
    decode_payload<double, std::uint64_t>(payload, t.f64, count, payload_offset);
  return t;
}

template <typename T>
Tensor tensor_from_grid(const Grid<T>& g) {
  Tensor t;
  t.dtype = std::is_same_v<T, float> ? Dtype::f32 : Dtype::f64;
  t.dims = {static_cast<std::uint64_t>(g.h), static_cast<std::uint64_t>(g.w),
            static_cast<std::uint64_t>(g.d)};
  while (t.dims.size() > 1 && t.dims.back() == 1) t.dims.pop_back();
  if constexpr (std::is_same_v<T, float>)
    t.f32 = g.data;
  else
    t.f64 = g.data;
  return t;
}

template <typename T>
Grid<T> grid_from_tensor(const Tensor& t) {
  if (t.dims.empty() || t.dims.size() > kMaxNdim)
    throw TensorIoError(TensorIoError::Kind::BadShape, "tensor must have 1 to 3 dims");
  int h = static_cast<int>(t.dims[0]);
  int w = t.dims.size() > 1 ? static_cast<int>(t.dims[1]) : 1;
  int d = t.dims.size() > 2 ? static_cast<int>(t.dims[2]) : 1;
  std::vector<T> data(t.count());
  if (t.dtype == Dtype::f32)
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<T>(t.f32[i]);
  else
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<T>(t.f64[i]);
  return Grid<T>(h, w, d, std::move(data));
}

std::size_t write_tensor_file(const Tensor& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TensorIoError(TensorIoError::Kind::Io, "cannot open " + path + " for write");
  return write_tensor(t, out);
}

Tensor read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TensorIoError(TensorIoError::Kind::Io, "cannot open " + path);
  return read_tensor(in);
}

template Tensor tensor_from_grid<float>(const Grid<float>&);
template Tensor tensor_from_grid<double>(const Grid<double>&);
template Grid<float> grid_from_tensor<float>(const Tensor&);
template Grid<double> grid_from_tensor<double>(const Tensor&);

}  // namespace scan2d
