#include "coljoin/hash_match.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <bit>

#include "coljoin/task.hpp"

namespace coljoin::hashjoin {

namespace {

constexpr unsigned kMaxTotalBits = 20;
constexpr uint32_t kEmptySlot = UINT32_MAX;

inline int thread_request(unsigned workers) {
  return static_cast<int>(std::clamp(workers, 1u, 64u));
}

// Fibonacci hashing; the top product bits stay uncorrelated with the low
// key bits that picked the partition.
inline uint64_t slot_of(uint64_t key, unsigned log2_cap) {
  return (key * 0x9E3779B97F4A7C15ull) >> (64 - log2_cap);
}

// Joint-digit histogram over [0, total_bits); wider than the 8-bit
// primitive on purpose, for layout construction only.
template <class K>
std::vector<uint64_t> wide_offsets(std::span<const K> keys, unsigned total_bits,
                                   unsigned workers) {
  const size_t fanout = size_t{1} << total_bits;
  const K mask = static_cast<K>(fanout - 1);
  const size_t n = keys.size();
  std::vector<std::vector<uint64_t>> local(workers);
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
  for (unsigned w = 0; w < workers; ++w) {
    auto& mine = local[w];
    mine.assign(fanout, 0);
    const size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    for (size_t i = lo; i < hi; ++i) ++mine[keys[i] & mask];
  }
  std::vector<uint64_t> offsets(fanout + 1, 0);
  for (size_t d = 0; d < fanout; ++d) {
    uint64_t total = 0;
    for (unsigned w = 0; w < workers; ++w) total += local[w][d];
    offsets[d + 1] = offsets[d] + total;
  }
  return offsets;
}

template <class K>
primitives::PartitionLayout finish_layout(const Column& keys_out,
                                          unsigned total_bits, unsigned workers) {
  primitives::PartitionLayout lay;
  lay.low_bit = 0;
  lay.high_bit = total_bits;
  lay.fanout = 1u << total_bits;
  lay.offsets = wide_offsets<K>(values<K>(keys_out), total_bits, workers);
  return lay;
}

void check_total_bits(const Column& keys, unsigned total_bits) {
  if (total_bits > kMaxTotalBits)
    throw FanoutTooLarge("partition fan-out capped at 2^20");
  if (total_bits > value_bytes(keys.kind()) * 8)
    throw FanoutTooLarge("partition bits exceed key width");
}

// Open-addressing table over one build chunk, rebuilt per pass. Slots keep
// chunk-relative positions so equal keys are visited in insertion order.
template <class K>
struct ChunkTable {
  std::vector<K> key;
  std::vector<uint32_t> pos;
  unsigned log2_cap = 1;

  bool build(std::span<const K> keys, uint64_t lo, uint64_t hi) {
    const uint64_t n = hi - lo;
    uint64_t cap = std::bit_ceil(std::max<uint64_t>(2 * n, 2));
    log2_cap = static_cast<unsigned>(std::countr_zero(cap));
    key.assign(cap, K{});
    pos.assign(cap, kEmptySlot);
    const uint64_t mask = cap - 1;
    for (uint64_t i = lo; i < hi; ++i) {
      uint64_t s = slot_of(keys[i], log2_cap);
      uint64_t walked = 0;
      while (pos[s] != kEmptySlot) {
        s = (s + 1) & mask;
        if (++walked > mask) return false;
      }
      key[s] = keys[i];
      pos[s] = static_cast<uint32_t>(i - lo);
    }
    return true;
  }

  // Calls fn(chunk_pos) for every build entry equal to k, in insertion
  // order. Equal keys occupy increasing probe-sequence slots.
  template <class Fn>
  void for_matches(K k, Fn&& fn) const {
    const uint64_t mask = (uint64_t{1} << log2_cap) - 1;
    uint64_t s = slot_of(k, log2_cap);
    while (pos[s] != kEmptySlot) {
      if (key[s] == k) fn(pos[s]);
      s = (s + 1) & mask;
    }
  }
};

template <class K, class Emit>
void scan_unit(const ChunkTable<K>& table, std::span<const K> probe_keys,
               const WorkUnit& u, Emit&& emit) {
  for (uint64_t j = u.probe_lo; j < u.probe_hi; ++j) {
    const K k = probe_keys[j];
    table.for_matches(k, [&](uint32_t chunk_pos) {
      emit(u.build_lo + chunk_pos, j);
    });
  }
}

void check_views(const PartitionedRelationView& build,
                 const PartitionedRelationView& probe) {
  if (!build.keys || !build.layout || !probe.keys || !probe.layout)
    throw SpecInvalid("partitioned view missing keys or layout");
  if (build.keys->kind() != probe.keys->kind())
    throw KindError("build and probe keys must share a value kind");
}

void check_unit_sizes(const SubPartitionPlan& plan) {
  for (const auto& u : plan.units) {
    if (u.build_hi - u.build_lo > plan.limit)
      throw CapacityExceeded("work unit exceeds the sub-partition limit");
  }
}

}  // namespace

primitives::PartitionLayout partition_relation(const Column& keys,
                                               const Column& carried,
                                               Column& keys_out, Column& carried_out,
                                               unsigned total_bits,
                                               unsigned bits_per_pass,
                                               unsigned workers, Workspace ws) {
  check_total_bits(keys, total_bits);
  if (total_bits == 0) {
    primitives::PartitionLayout lay;
    lay.offsets = {0, keys.size()};
    primitives::radix_partition(keys, carried, keys_out, carried_out, 0, 0, workers, ws);
    return lay;
  }
  auto plan = partition_pass_plan(total_bits, bits_per_pass);
  primitives::radix_partition_passes(keys, carried, keys_out, carried_out, plan,
                                     workers, ws);
  primitives::PartitionLayout lay;
  visit_kind(keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    lay = finish_layout<K>(keys_out, total_bits, workers);
  });
  return lay;
}

primitives::PartitionLayout partition_relation_keys(const Column& keys,
                                                    Column& keys_out,
                                                    unsigned total_bits,
                                                    unsigned bits_per_pass,
                                                    unsigned workers, Workspace ws) {
  check_total_bits(keys, total_bits);
  if (total_bits == 0) {
    primitives::PartitionLayout lay;
    lay.offsets = {0, keys.size()};
    primitives::radix_partition_keys(keys, keys_out, 0, 0, workers, ws);
    return lay;
  }
  auto plan = partition_pass_plan(total_bits, bits_per_pass);
  primitives::radix_partition_passes_keys(keys, keys_out, plan, workers, ws);
  primitives::PartitionLayout lay;
  visit_kind(keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    lay = finish_layout<K>(keys_out, total_bits, workers);
  });
  return lay;
}

SubPartitionPlan plan_subpartitions(const PartitionedRelationView& build,
                                    const PartitionedRelationView& probe,
                                    uint32_t limit) {
  check_views(build, probe);
  if (build.layout->fanout != probe.layout->fanout)
    throw FanoutMismatch("build and probe views disagree on fan-out");
  if (limit == 0) throw SpecInvalid("sub-partition limit must be positive");
  SubPartitionPlan plan;
  plan.limit = limit;
  for (uint32_t p = 0; p < build.layout->fanout; ++p) {
    const uint64_t b_lo = build.layout->offsets[p];
    const uint64_t b_hi = build.layout->offsets[p + 1];
    const uint64_t s_lo = probe.layout->offsets[p];
    const uint64_t s_hi = probe.layout->offsets[p + 1];
    if (b_hi == b_lo) {
      plan.units.push_back(WorkUnit{p, b_lo, b_hi, s_lo, s_hi});
      continue;
    }
    for (uint64_t c = b_lo; c < b_hi; c += limit) {
      plan.units.push_back(
          WorkUnit{p, c, std::min<uint64_t>(c + limit, b_hi), s_lo, s_hi});
    }
  }
  return plan;
}

HashMatchCounts hash_match_count(const PartitionedRelationView& build,
                                 const PartitionedRelationView& probe,
                                 const SubPartitionPlan& plan, unsigned workers) {
  check_views(build, probe);
  check_unit_sizes(plan);
  const size_t units = plan.units.size();
  HashMatchCounts counts;
  counts.unit_offsets.assign(units + 1, 0);
  std::vector<uint64_t> per_unit(units, 0);
  std::atomic<bool> overflow{false};
  visit_kind(build.keys->kind(), [&](auto tag) {
    using K = decltype(tag);
    auto bk = values<K>(*build.keys);
    auto pk = values<K>(*probe.keys);
#pragma omp parallel num_threads(thread_request(workers))
    {
      ChunkTable<K> table;
#pragma omp for schedule(static)
      for (size_t u = 0; u < units; ++u) {
        const WorkUnit& unit = plan.units[u];
        if (unit.build_hi == unit.build_lo || unit.probe_hi == unit.probe_lo)
          continue;
        if (!table.build(bk, unit.build_lo, unit.build_hi)) {
          overflow.store(true, std::memory_order_relaxed);
          continue;
        }
        uint64_t c = 0;
        scan_unit<K>(table, pk, unit, [&](uint64_t, uint64_t) { ++c; });
        per_unit[u] = c;
      }
    }
  });
  if (overflow.load()) throw CapacityExceeded("build chunk overflowed its hash table");
  for (size_t u = 0; u < units; ++u)
    counts.unit_offsets[u + 1] = counts.unit_offsets[u] + per_unit[u];
  return counts;
}

void hash_match_fill(const PartitionedRelationView& build,
                     const PartitionedRelationView& probe,
                     const SubPartitionPlan& plan, const HashMatchCounts& counts,
                     TupleIdSemantics id_mode, Column& keys_dest,
                     std::span<uint32_t> ids_r, std::span<uint32_t> ids_s,
                     unsigned workers) {
  check_views(build, probe);
  const uint64_t total = counts.total();
  if (keys_dest.size() != total || ids_r.size() != total || ids_s.size() != total)
    throw LengthMismatch("fill destinations must match the counted total");
  check_unit_sizes(plan);
  const bool physical = id_mode == TupleIdSemantics::Physical;
  if (physical && (!build.carried || !probe.carried))
    throw Unsupported("physical id mode needs carried id columns on both sides");
  if (physical && (build.carried->kind() != ValueKind::u32 ||
                   probe.carried->kind() != ValueKind::u32))
    throw KindError("carried tuple ids must be 4-byte columns");
  const size_t units = plan.units.size();
  visit_kind(build.keys->kind(), [&](auto tag) {
    using K = decltype(tag);
    auto bk = values<K>(*build.keys);
    auto pk = values<K>(*probe.keys);
    auto keys_out = values<K>(keys_dest);
    std::span<const uint32_t> b_ids, p_ids;
    if (physical) {
      b_ids = build.carried->u32();
      p_ids = probe.carried->u32();
    }
#pragma omp parallel num_threads(thread_request(workers))
    {
      ChunkTable<K> table;
#pragma omp for schedule(static)
      for (size_t u = 0; u < units; ++u) {
        const WorkUnit& unit = plan.units[u];
        if (unit.build_hi == unit.build_lo || unit.probe_hi == unit.probe_lo)
          continue;
        if (!table.build(bk, unit.build_lo, unit.build_hi)) continue;
        uint64_t out = counts.unit_offsets[u];
        scan_unit<K>(table, pk, unit, [&](uint64_t i, uint64_t j) {
          keys_out[out] = pk[j];
          if (physical) {
            ids_r[out] = b_ids[i];
            ids_s[out] = p_ids[j];
          } else {
            ids_r[out] = static_cast<uint32_t>(i);
            ids_s[out] = static_cast<uint32_t>(j);
          }
          ++out;
        });
      }
    }
  });
}

MatchSet hash_find_matches(const PartitionedRelationView& build,
                           const PartitionedRelationView& probe,
                           const SubPartitionPlan& plan, TupleIdSemantics id_mode,
                           unsigned workers) {
  auto counts = hash_match_count(build, probe, plan, workers);
  MatchSet m;
  m.id_semantics = id_mode;
  m.keys = Column(build.keys->kind(), counts.total());
  m.ids_r.resize(counts.total());
  m.ids_s.resize(counts.total());
  hash_match_fill(build, probe, plan, counts, id_mode, m.keys, m.ids_r, m.ids_s,
                  workers);
  return m;
}

}  // namespace coljoin::hashjoin
