#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coljoin/column.hpp"

namespace coljoin::mergejoin {

/// Contiguous, disjoint (r, s) ranges covering both sorted inputs; the
/// per-part total work |r range| + |s range| differs by at most one.
struct MergePathSplit {
  std::vector<uint64_t> r_bounds;  // parts + 1
  std::vector<uint64_t> s_bounds;  // parts + 1

  unsigned parts() const { return static_cast<unsigned>(r_bounds.size()) - 1; }
  uint64_t part_work(unsigned p) const {
    return (r_bounds[p + 1] - r_bounds[p]) + (s_bounds[p + 1] - s_bounds[p]);
  }
};

/// Diagonal binary search over the merge matrix of two sorted columns.
/// Ties resolve r-first, matching a stable merge.
MergePathSplit merge_path_split(const Column& r_keys, const Column& s_keys,
                                unsigned parts, bool validate = false);

/// Count pass result: per-part output offsets, reusable by the fill pass.
struct MergeMatchCounts {
  MergePathSplit split;
  std::vector<uint64_t> part_offsets;  // parts + 1
  bool pk_fk = false;
  uint64_t total() const { return part_offsets.back(); }
};

MergeMatchCounts merge_match_count(const Column& r_keys, const Column& s_keys,
                                   bool pk_fk, unsigned parts,
                                   unsigned workers = 1, bool validate = false);

/// Emits every (i, j) with r_keys[i] == s_keys[j] in (s-position, r-position)
/// lexicographic order, as positions into the sorted inputs. Matched keys go
/// to keys_dest (pre-sized to counts.total()). Workers fill disjoint ranges.
void merge_match_fill(const Column& r_keys, const Column& s_keys,
                      const MergeMatchCounts& counts, Column& keys_dest,
                      std::span<uint32_t> ids_r, std::span<uint32_t> ids_s,
                      unsigned workers = 1);

/// Convenience wrapper producing a MatchSet with Virtual identifiers.
/// Output is identical for every parts value.
MatchSet merge_find_matches(const Column& r_keys, const Column& s_keys,
                            bool pk_fk, unsigned parts, unsigned workers = 1,
                            bool validate = false);

}  // namespace coljoin::mergejoin
