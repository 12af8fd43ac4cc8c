#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scan2d/types.hpp"

namespace scan2d {

/// Thread-schedule granularity mirrored from the warp size; flat work is
/// padded with identity elements to the next multiple of this.
inline constexpr std::size_t kWorkGranularity = 32;

inline std::size_t pad_to_granularity(std::size_t n) {
  return (n + kWorkGranularity - 1) / kWorkGranularity * kWorkGranularity;
}

/// Inclusive first-order recurrence over a flat buffer partitioned into
/// independent segments. Segment s starts from initial_carries[s]; segments
/// never exchange information. Internally the buffer is one flat work unit
/// padded with identity elements to the granularity multiple and processed
/// in fixed-size blocks (pad outputs discarded), so output bits do not
/// depend on the worker count.
///
/// Returns the per-element inclusive states. If padding_counter is non-null
/// it is incremented by the number of identity pad elements processed.
template <typename T>
std::vector<T> segmented_block_scan(std::span<const LinOp<T>> elements,
                                    std::span<const std::size_t> segment_lengths,
                                    std::span<const T> initial_carries, int threads = 1,
                                    std::uint64_t* padding_counter = nullptr);

}  // namespace scan2d
