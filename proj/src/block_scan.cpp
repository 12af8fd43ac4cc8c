#include "scan2d/block_scan.hpp"

#include <cmath>
#include <stdexcept>

#include "scan2d/parallel.hpp"

namespace scan2d {

namespace {

// segmented-scan monoid: a set flag means the composed range starts a segment,
// so anything composed from the left is discarded
template <typename T>
struct Flagged {
  LinOp<T> op;
  bool flag = false;
};

template <typename T>
Flagged<T> combine(const Flagged<T>& x, const Flagged<T>& y) {
  if (y.flag) return y;
  return Flagged<T>{compose(x.op, y.op), x.flag};
}

}  // namespace

template <typename T>
std::vector<T> segmented_block_scan(std::span<const LinOp<T>> elements,
                                    std::span<const std::size_t> segment_lengths,
                                    std::span<const T> initial_carries, int threads,
                                    std::uint64_t* padding_counter) {
  std::size_t total = 0;
  for (std::size_t len : segment_lengths) total += len;
  if (total != elements.size())
    throw std::invalid_argument("segmented_block_scan: segment lengths do not sum to element count");
  if (initial_carries.size() != segment_lengths.size())
    throw std::invalid_argument("segmented_block_scan: one carry required per segment");

  const std::size_t n = elements.size();
  const std::size_t padded = pad_to_granularity(n);
  if (padding_counter) *padding_counter += padded - n;
  if (n == 0) return {};

  // flat work unit: carries folded into each segment head, identity padding
  std::vector<Flagged<T>> work(padded);
  std::size_t pos = 0;
  for (std::size_t s = 0; s < segment_lengths.size(); ++s) {
    for (std::size_t k = 0; k < segment_lengths[s]; ++k, ++pos) {
      LinOp<T> e = elements[pos];
      if (k == 0) e.b = std::fma(e.a, initial_carries[s], e.b);
      work[pos] = Flagged<T>{e, k == 0};
    }
  }
  for (; pos < padded; ++pos) work[pos] = Flagged<T>{identity_op<T>(), false};

  const std::size_t blocks = padded / kWorkGranularity;

  // phase 1: in-block inclusive compose; the last slot is the block aggregate
  parallel_for(blocks, threads, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      std::size_t base = b * kWorkGranularity;
      for (std::size_t k = 1; k < kWorkGranularity; ++k)
        work[base + k] = combine(work[base + k - 1], work[base + k]);
    }
  });

  // phase 2: exclusive scan of block aggregates, sequential in block order
  std::vector<Flagged<T>> prefix(blocks);
  prefix[0] = Flagged<T>{identity_op<T>(), false};
  for (std::size_t b = 1; b < blocks; ++b)
    prefix[b] = combine(prefix[b - 1], work[b * kWorkGranularity - 1]);

  // phase 3: rebase in-block results and apply to the zero start state
  std::vector<T> out(n);
  parallel_for(blocks, threads, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      std::size_t base = b * kWorkGranularity;
      std::size_t end = std::min(n, base + kWorkGranularity);
      const Flagged<T>& pre = prefix[b];
      for (std::size_t k = base; k < end; ++k) {
        const Flagged<T>& v = work[k];
        out[k] = v.flag ? v.op.b : std::fma(v.op.a, pre.op.b, v.op.b);
      }
    }
  });
  return out;
}

template std::vector<float> segmented_block_scan<float>(std::span<const LinOp<float>>,
                                                        std::span<const std::size_t>,
                                                        std::span<const float>, int,
                                                        std::uint64_t*);
template std::vector<double> segmented_block_scan<double>(std::span<const LinOp<double>>,
                                                          std::span<const std::size_t>,
                                                          std::span<const double>, int,
                                                          std::uint64_t*);

}  // namespace scan2d
