#include <sstream>

#include "doctest.h"
#include "scan2d/rng.hpp"
#include "scan2d/tensor_io.hpp"

using namespace scan2d;

TEST_CASE("1x1x1 single grid encodes to 20 bytes") {
  Grid<float> g(1, 1, 1, {0.0f});
  std::ostringstream out;
  std::size_t bytes = write_tensor(g, out);
  CHECK(bytes == 20);  // 8 header + 8 dims + 4 payload
  CHECK(out.str().size() == 20);
  CHECK(out.str().substr(0, 4) == "T2DM");
}

TEST_CASE("2x3 double grid encodes dims (2,3) with 48 payload bytes") {
  Grid<double> g(2, 3, 1, {1, 2, 3, 4, 5, 6});
  std::ostringstream out;
  std::size_t bytes = write_tensor(g, out);
  CHECK(bytes == 8 + 16 + 48);
  const std::string s = out.str();
  CHECK(static_cast<unsigned char>(s[6]) == 2);   // ndim
  CHECK(static_cast<unsigned char>(s[8]) == 2);   // first dim, little endian
  CHECK(static_cast<unsigned char>(s[16]) == 3);  // second dim
}

TEST_CASE("write then read round-trips bit for bit") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int h = rng.uniform_int(1, 9);
    int w = rng.uniform_int(1, 9);
    int d = rng.uniform_int(1, 4);
    if (rng.uniform() < 0.5) {
      std::vector<double> v(static_cast<std::size_t>(h) * w * d);
      rng.fill_normal(v);
      Grid<double> g(h, w, d, v);
      std::stringstream buf;
      write_tensor(g, buf);
      Tensor t = read_tensor(buf);
      Grid<double> back = grid_from_tensor<double>(t);
      REQUIRE(back.same_shape(g));
      CHECK(back.data == g.data);
    } else {
      std::vector<float> v(static_cast<std::size_t>(h) * w * d);
      rng.fill_normal(v);
      Grid<float> g(h, w, d, v);
      std::stringstream buf;
      write_tensor(g, buf);
      Tensor t = read_tensor(buf);
      CHECK(t.dtype == Dtype::f32);
      Grid<float> back = grid_from_tensor<float>(t);
      REQUIRE(back.same_shape(g));
      CHECK(back.data == g.data);
    }
  }
}

TEST_CASE("valid 14x14 grid reads back with H = W = 14") {
  std::vector<double> v(196);
  Rng rng(3);
  rng.fill_normal(v);
  std::stringstream buf;
  write_tensor(Grid<double>(14, 14, 1, v), buf);
  Grid<double> g = grid_from_tensor<double>(read_tensor(buf));
  CHECK(g.h == 14);
  CHECK(g.w == 14);
  CHECK(g.d == 1);
}

namespace {

std::string valid_file_bytes() {
  Grid<float> g(2, 2, 1, {1.f, 2.f, 3.f, 4.f});
  std::ostringstream out;
  write_tensor(g, out);
  return out.str();
}

TensorIoError::Kind read_kind(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    read_tensor(in);
  } catch (const TensorIoError& e) {
    return e.kind;
  }
  throw std::logic_error("expected a TensorIoError");
}

}  // namespace

TEST_CASE("corrupted magic is a bad-magic error") {
  std::string s = valid_file_bytes();
  s[0] = 'X';
  CHECK(read_kind(s) == TensorIoError::Kind::BadMagic);
}

TEST_CASE("unsupported version and dtype are distinct errors") {
  std::string s = valid_file_bytes();
  s[4] = 9;
  CHECK(read_kind(s) == TensorIoError::Kind::BadVersion);
  s = valid_file_bytes();
  s[5] = 7;
  CHECK(read_kind(s) == TensorIoError::Kind::BadDtype);
}

TEST_CASE("payload shorter than the dims product is a truncation error") {
  std::string s = valid_file_bytes();
  s.resize(s.size() - 5);
  CHECK(read_kind(s) == TensorIoError::Kind::Truncated);
}

TEST_CASE("non-finite payload entries are rejected on read") {
  Grid<float> g(1, 2, 1, {1.f, 2.f});
  std::ostringstream out;
  write_tensor(g, out);
  std::string s = out.str();
  // overwrite the second payload float with +inf
  s[s.size() - 4] = 0;
  s[s.size() - 3] = 0;
  s[s.size() - 2] = static_cast<char>(0x80);
  s[s.size() - 1] = static_cast<char>(0x7f);
  CHECK(read_kind(s) == TensorIoError::Kind::NonFinite);
}

TEST_CASE("constructors reject non-finite data and bad shapes") {
  CHECK_THROWS_AS(Grid<double>(1, 1, 1, {std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Grid<double>(2, 2, 1, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid<double>(0, 1, 1, {}), std::invalid_argument);
}
