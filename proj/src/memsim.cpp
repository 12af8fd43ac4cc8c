#include "scan2d/memsim.hpp"

#include <stdexcept>

#include "scan2d/block_scan.hpp"

namespace scan2d {

namespace {

std::uint64_t pad_gap(std::uint64_t len) {
  return pad_to_granularity(len) - len;
}

void require_dims(int h, int w, int n) {
  if (h <= 0 || w <= 0 || n <= 0)
    throw std::invalid_argument("memsim: dimensions must be positive");
}

}  // namespace

Variant variant_from_string(const std::string& name) {
  if (name == "cub1d") return Variant::Cub1d;
  if (name == "naive2d") return Variant::Naive2d;
  if (name == "tiled2d") return Variant::Tiled2d;
  throw std::invalid_argument("unknown variant '" + name + "'");
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Cub1d: return "cub1d";
    case Variant::Naive2d: return "naive2d";
    case Variant::Tiled2d: return "tiled2d";
  }
  return "?";
}

MemReport simulate_traffic(Variant v, int h, int w, int n, int t) {
  require_dims(h, w, n);
  const std::uint64_t l = static_cast<std::uint64_t>(h) * w;
  const std::uint64_t nn = static_cast<std::uint64_t>(n);

  MemReport r;
  // distinct per-element input streams: x, z, and per-state B, C
  r.payload_reads = (2 + 2 * nn) * l;
  r.payload_writes = l;
  r.flops = count_flops(v, h, w, n);

  switch (v) {
    case Variant::Cub1d:
      r.padding_elements = nn * pad_gap(l);
      break;
    case Variant::Naive2d:
      // write then read each per-state horizontal grid
      r.intermediate_traffic = 2 * nn * l;
      r.padding_elements = nn * (static_cast<std::uint64_t>(h) * pad_gap(w) +
                                 static_cast<std::uint64_t>(w) * pad_gap(h));
      break;
    case Variant::Tiled2d: {
      if (t <= 0) throw std::invalid_argument("memsim: tiled2d requires a tile size");
      const TileConfig tiles(h, w, t);
      const std::uint64_t n_tiles = static_cast<std::uint64_t>(tiles.kh) * tiles.kw;
      // one column read/write and one row read/write per tile per state
      r.carry_traffic = 2 * nn * (n_tiles * 2 * static_cast<std::uint64_t>(t));
      const std::uint64_t flat = pad_to_granularity(static_cast<std::size_t>(t) * t);
      r.padding_elements = 2 * nn * (n_tiles * flat - l);
      break;
    }
  }
  return r;
}

MemReport report_from_counter(Variant v, const MemCounter& c, int h, int w, int n) {
  MemReport r;
  r.payload_reads = c.payload_reads;
  r.payload_writes = c.payload_writes;
  r.intermediate_traffic = c.intermediate_traffic;
  r.carry_traffic = c.carry_traffic;
  r.padding_elements = c.padding_elements;
  r.flops = count_flops(v, h, w, n);
  return r;
}

PaddingReport padding_waste(int h, int w, int granularity, PaddingScheme scheme) {
  if (h <= 0 || w <= 0 || granularity <= 0)
    throw std::invalid_argument("padding_waste: dimensions must be positive");
  const auto g = static_cast<std::uint64_t>(granularity);
  auto round_up = [g](std::uint64_t x) { return (x + g - 1) / g * g; };

  PaddingReport r;
  if (scheme == PaddingScheme::FullRowScan) {
    // every row and every column is padded to a full granularity multiple
    const std::uint64_t pad_row = round_up(w) - w;
    const std::uint64_t pad_col = round_up(h) - h;
    r.pad_per_row = static_cast<double>(pad_row);
    r.pad_per_column = static_cast<double>(pad_col);
    const std::uint64_t processed =
        static_cast<std::uint64_t>(h) * round_up(w) + static_cast<std::uint64_t>(w) * round_up(h);
    const std::uint64_t useful = 2ull * h * w;
    r.waste_fraction = static_cast<double>(processed - useful) / static_cast<double>(processed);
  } else {
    // only the flattened H*W is padded once, amortized per row / column
    const std::uint64_t l = static_cast<std::uint64_t>(h) * w;
    const std::uint64_t pad = round_up(l) - l;
    r.pad_per_row = static_cast<double>(pad) / h;
    r.pad_per_column = static_cast<double>(pad) / w;
    r.waste_fraction = static_cast<double>(pad) / static_cast<double>(l + pad);
  }
  return r;
}

std::uint64_t count_flops(Variant v, int h, int w, int n) {
  require_dims(h, w, n);
  // per element: 1 flop/state discretization, 2 flops/state/direction scan
  // update, 1 flop/state output aggregation, 2 flops skip connection
  const std::uint64_t directions = v == Variant::Cub1d ? 1 : 2;
  const std::uint64_t per_element =
      static_cast<std::uint64_t>(n) * (1 + 2 * directions + 1) + 2;
  return static_cast<std::uint64_t>(h) * w * per_element;
}

}  // namespace scan2d
