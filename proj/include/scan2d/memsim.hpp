#pragma once

#include <cstdint>
#include <string>

#include "scan2d/engine.hpp"

// Closed-form model of the two-level memory hierarchy (fast tile-local
// store vs slow main store). Counts are element transfers, not bytes;
// byte totals follow by multiplying with the dtype width. The engines'
// counting hooks implement the same model, and the two must agree exactly.

namespace scan2d {

enum class Variant { Cub1d, Naive2d, Tiled2d };

Variant variant_from_string(const std::string& name);
const char* variant_name(Variant v);

/// Counted slow-memory transfers per variant:
///   payload           (2 + 2N) * H*W reads + H*W writes for all variants
///                     (one charge per element per distinct input stream)
///   naive2d           intermediate = 2*N*H*W (write then read each
///                     per-state horizontal grid)
///   tiled2d           carry = 2*N*(K_H*K_W*2T), one column read/write and
///                     one row read/write of T-sized slots per tile per state
///   padding           identity elements a granularity-32 scan schedule
///                     would process: per state, full-row/column padding
///                     for naive2d, flat padding of each T*T tile (both
///                     directions) for tiled2d, flat padding of H*W for cub1d
struct MemReport {
  std::uint64_t payload_reads = 0;
  std::uint64_t payload_writes = 0;
  std::uint64_t intermediate_traffic = 0;
  std::uint64_t carry_traffic = 0;
  std::uint64_t padding_elements = 0;
  std::uint64_t flops = 0;
};

MemReport simulate_traffic(Variant v, int h, int w, int n, int t = 0);

MemReport report_from_counter(Variant v, const MemCounter& c, int h, int w, int n);

enum class PaddingScheme { FullRowScan, Segmented };

struct PaddingReport {
  double pad_per_row = 0.0;
  double pad_per_column = 0.0;
  double waste_fraction = 0.0;
};

/// FullRowScan pads every row and every column to the next granularity
/// multiple; Segmented pads only the flattened H*W once and amortizes it
/// per row / per column.
PaddingReport padding_waste(int h, int w, int granularity = 32,
                            PaddingScheme scheme = PaddingScheme::FullRowScan);

/// Analytic per-element flop model with fixed calibration constants:
/// 1 per state for discretization, 2 per state per scan direction (one
/// direction for 1D, two for 2D), 1 per state for output aggregation and
/// 2 for the skip connection.
std::uint64_t count_flops(Variant v, int h, int w, int n);

}  // namespace scan2d
