#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "coljoin/column.hpp"
#include "coljoin/mem_ledger.hpp"

namespace coljoin::primitives {

/// Contiguous partition boundaries after a radix pass: partition p holds
/// exactly the elements whose key bits in [low_bit, high_bit) equal p.
struct PartitionLayout {
  uint32_t fanout = 1;
  unsigned low_bit = 0;
  unsigned high_bit = 0;
  std::vector<uint64_t> offsets;  // fanout + 1, offsets.back() == n

  uint64_t partition_size(uint32_t p) const { return offsets[p + 1] - offsets[p]; }
};

/// Per-digit counts over the key bits in [low_bit, high_bit); at most 8 bits.
std::vector<uint32_t> histogram(const Column& keys, unsigned low_bit,
                                unsigned high_bit, unsigned workers = 1);

/// out[0] = 0, out[i] = out[i-1] + counts[i-1]; the appended final element
/// is the total.
std::vector<uint64_t> exclusive_prefix_sum(std::span<const uint32_t> counts);

/// Stable single-pass radix partition of (keys, values) pairs into
/// contiguous digit groups. Output is identical for every worker count:
/// each worker histograms a fixed input chunk, a two-level prefix sum
/// (digit-major, then chunk order) assigns write cursors, and workers
/// scatter their chunks in order.
PartitionLayout radix_partition(const Column& keys, const Column& values,
                                Column& keys_out, Column& values_out,
                                unsigned low_bit, unsigned high_bit,
                                unsigned workers = 1, Workspace ws = {});

/// Keys-only variant.
PartitionLayout radix_partition_keys(const Column& keys, Column& keys_out,
                                     unsigned low_bit, unsigned high_bit,
                                     unsigned workers = 1, Workspace ws = {});

/// Stable multi-pass partition applying radix_partition per bit range in
/// plan, least-significant range first. Passes whose digit is constant
/// across all keys are skipped; the skip set depends only on the data,
/// never on the worker count.
void radix_partition_passes(const Column& keys, const Column& values,
                            Column& keys_out, Column& values_out,
                            std::span<const std::pair<unsigned, unsigned>> plan,
                            unsigned workers = 1, Workspace ws = {});
void radix_partition_passes_keys(const Column& keys, Column& keys_out,
                                 std::span<const std::pair<unsigned, unsigned>> plan,
                                 unsigned workers = 1, Workspace ws = {});

/// Stable pair sort: least-significant-digit radix passes of 8 bits over
/// the full key width (4 passes for 4-byte keys, up to 8 for 8-byte).
void sort_pairs(const Column& keys, const Column& values, Column& keys_out,
                Column& values_out, unsigned workers = 1, Workspace ws = {});

/// Keys-only variant.
void sort_keys(const Column& keys, Column& keys_out, unsigned workers = 1,
               Workspace ws = {});

/// out[i] = in[map[i]]; single pass, no tiling or map reordering.
void gather(const Column& in, std::span<const uint32_t> map, Column& out,
            unsigned workers = 1);
Column gather_copy(const Column& in, std::span<const uint32_t> map,
                   unsigned workers = 1);

/// Mean absolute step between consecutive map entries: 1.0 for a fully
/// clustered (unit-stride) map, large for a shuffled one. A single-entry
/// map counts as fully clustered.
double gather_clusteredness(std::span<const uint32_t> map);

}  // namespace coljoin::primitives
