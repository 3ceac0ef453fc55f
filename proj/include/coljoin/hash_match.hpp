#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coljoin/column.hpp"
#include "coljoin/mem_ledger.hpp"
#include "coljoin/primitives.hpp"

namespace coljoin::hashjoin {

/// Partition-contiguous keys with the layout that delimits the digit runs,
/// plus an optional carried column (physical IDs or a first payload).
struct PartitionedRelationView {
  const Column* keys = nullptr;
  const primitives::PartitionLayout* layout = nullptr;
  const Column* carried = nullptr;

  uint64_t rows() const { return keys ? keys->size() : 0; }
};

/// Multi-pass contiguous partitioning by the low total_bits of the key.
/// Stable and deterministic, so repeated runs over (key, other-column)
/// pairs land every row at the same position.
primitives::PartitionLayout partition_relation(const Column& keys,
                                               const Column& carried,
                                               Column& keys_out, Column& carried_out,
                                               unsigned total_bits,
                                               unsigned bits_per_pass,
                                               unsigned workers = 1,
                                               Workspace ws = {});
primitives::PartitionLayout partition_relation_keys(const Column& keys,
                                                    Column& keys_out,
                                                    unsigned total_bits,
                                                    unsigned bits_per_pass,
                                                    unsigned workers = 1,
                                                    Workspace ws = {});

struct WorkUnit {
  uint32_t partition = 0;
  uint64_t build_lo = 0, build_hi = 0;  // build chunk, size <= limit
  uint64_t probe_lo = 0, probe_hi = 0;  // full probe co-partition
};

struct SubPartitionPlan {
  std::vector<WorkUnit> units;  // ordered by (partition, build chunk)
  uint32_t limit = 0;
};

/// Splits oversized build partitions into ceil(size/limit) chunks, each
/// paired against the full probe co-partition (block nested loop shape).
SubPartitionPlan plan_subpartitions(const PartitionedRelationView& build,
                                    const PartitionedRelationView& probe,
                                    uint32_t limit);

struct HashMatchCounts {
  std::vector<uint64_t> unit_offsets;  // units + 1
  uint64_t total() const { return unit_offsets.back(); }
};

HashMatchCounts hash_match_count(const PartitionedRelationView& build,
                                 const PartitionedRelationView& probe,
                                 const SubPartitionPlan& plan,
                                 unsigned workers = 1);

/// Emits matches per work unit with probe positions scanned in order and
/// equal build keys in chunk insertion order. Virtual mode writes positions
/// in the partitioned arrays; Physical mode writes the carried columns'
/// values (both views need a carried column then).
void hash_match_fill(const PartitionedRelationView& build,
                     const PartitionedRelationView& probe,
                     const SubPartitionPlan& plan, const HashMatchCounts& counts,
                     TupleIdSemantics id_mode, Column& keys_dest,
                     std::span<uint32_t> ids_r, std::span<uint32_t> ids_s,
                     unsigned workers = 1);

MatchSet hash_find_matches(const PartitionedRelationView& build,
                           const PartitionedRelationView& probe,
                           const SubPartitionPlan& plan, TupleIdSemantics id_mode,
                           unsigned workers = 1);

}  // namespace coljoin::hashjoin
