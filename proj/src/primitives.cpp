#include "coljoin/primitives.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstring>

#include "coljoin/task.hpp"

namespace coljoin::primitives {

namespace {

constexpr unsigned kMaxRadixBits = 8;

inline int thread_request(unsigned workers) {
  return static_cast<int>(std::clamp(workers, 1u, 64u));
}

inline std::pair<size_t, size_t> chunk_range(size_t n, unsigned workers, unsigned w) {
  return {n * w / workers, n * (w + 1) / workers};
}

inline void check_bit_range(unsigned low_bit, unsigned high_bit, unsigned key_bits) {
  if (high_bit < low_bit || high_bit - low_bit > kMaxRadixBits)
    throw FanoutTooLarge("radix pass limited to 8 bits (256 partitions)");
  if (high_bit > key_bits)
    throw FanoutTooLarge("bit range exceeds key width");
}

template <class K>
void histogram_kernel(std::span<const K> keys, unsigned low_bit, unsigned fanout,
                      unsigned workers, std::vector<uint32_t>& per_worker) {
  const size_t n = keys.size();
  per_worker.assign(static_cast<size_t>(workers) * fanout, 0);
  const K mask = static_cast<K>(fanout - 1);
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
  for (unsigned w = 0; w < workers; ++w) {
    uint32_t* h = per_worker.data() + static_cast<size_t>(w) * fanout;
    auto [lo, hi] = chunk_range(n, workers, w);
    for (size_t i = lo; i < hi; ++i) {
      ++h[(keys[i] >> low_bit) & mask];
    }
  }
}

// Per-(digit, worker) write cursors: global digit base plus counts of the
// same digit in all earlier chunks. This keeps input order within a digit
// for any worker count.
std::vector<uint64_t> scatter_starts(const std::vector<uint32_t>& per_worker,
                                     unsigned fanout, unsigned workers) {
  std::vector<uint64_t> starts(per_worker.size());
  uint64_t base = 0;
  for (unsigned d = 0; d < fanout; ++d) {
    for (unsigned w = 0; w < workers; ++w) {
      starts[static_cast<size_t>(w) * fanout + d] = base;
      base += per_worker[static_cast<size_t>(w) * fanout + d];
    }
  }
  return starts;
}

template <class K, class V>
void scatter_pairs(std::span<const K> keys, std::span<const V> vals,
                   std::span<K> keys_out, std::span<V> vals_out,
                   unsigned low_bit, unsigned fanout, unsigned workers,
                   std::vector<uint64_t>& starts) {
  const size_t n = keys.size();
  const K mask = static_cast<K>(fanout - 1);
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
  for (unsigned w = 0; w < workers; ++w) {
    uint64_t* cur = starts.data() + static_cast<size_t>(w) * fanout;
    auto [lo, hi] = chunk_range(n, workers, w);
    for (size_t i = lo; i < hi; ++i) {
      const uint64_t pos = cur[(keys[i] >> low_bit) & mask]++;
      keys_out[pos] = keys[i];
      vals_out[pos] = vals[i];
    }
  }
}

template <class K>
void scatter_keys_only(std::span<const K> keys, std::span<K> keys_out,
                       unsigned low_bit, unsigned fanout, unsigned workers,
                       std::vector<uint64_t>& starts) {
  const size_t n = keys.size();
  const K mask = static_cast<K>(fanout - 1);
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
  for (unsigned w = 0; w < workers; ++w) {
    uint64_t* cur = starts.data() + static_cast<size_t>(w) * fanout;
    auto [lo, hi] = chunk_range(n, workers, w);
    for (size_t i = lo; i < hi; ++i) {
      keys_out[cur[(keys[i] >> low_bit) & mask]++] = keys[i];
    }
  }
}

PartitionLayout layout_from(const std::vector<uint32_t>& per_worker,
                            unsigned fanout, unsigned workers,
                            unsigned low_bit, unsigned high_bit) {
  PartitionLayout lay;
  lay.fanout = fanout;
  lay.low_bit = low_bit;
  lay.high_bit = high_bit;
  lay.offsets.assign(fanout + 1, 0);
  for (unsigned d = 0; d < fanout; ++d) {
    uint64_t total = 0;
    for (unsigned w = 0; w < workers; ++w)
      total += per_worker[static_cast<size_t>(w) * fanout + d];
    lay.offsets[d + 1] = lay.offsets[d] + total;
  }
  return lay;
}

// One stable pass; values may be null for keys-only operation.
template <class K>
PartitionLayout radix_pass(const Column& keys, const Column* vals,
                           Column& keys_out, Column* vals_out,
                           unsigned low_bit, unsigned high_bit,
                           unsigned workers, Workspace ws) {
  const unsigned fanout = 1u << (high_bit - low_bit);
  std::vector<uint32_t> per_worker;
  histogram_kernel<K>(values<K>(keys), low_bit, fanout, workers, per_worker);
  ScopedAlloc hist_acc(ws.ledger, per_worker.size() * sizeof(uint32_t),
                       AllocClass::Scratch);
  auto starts = scatter_starts(per_worker, fanout, workers);
  if (vals != nullptr) {
    visit_kind(vals->kind(), [&](auto vtag) {
      using V = decltype(vtag);
      scatter_pairs<K, V>(values<K>(keys), values<V>(*vals), values<K>(keys_out),
                          values<V>(*vals_out), low_bit, fanout, workers, starts);
    });
  } else {
    scatter_keys_only<K>(values<K>(keys), values<K>(keys_out), low_bit, fanout,
                         workers, starts);
  }
  return layout_from(per_worker, fanout, workers, low_bit, high_bit);
}

void check_pair_sizes(const Column& keys, const Column& vals) {
  if (keys.size() != vals.size())
    throw LengthMismatch("key and value columns differ in length");
}

void require_shape(const Column& in, Column& out) {
  if (out.kind() != in.kind() || out.size() != in.size())
    out = Column(in.kind(), in.size());
}

void copy_column(const Column& in, Column& out, unsigned workers) {
  require_shape(in, out);
  visit_kind(in.kind(), [&](auto tag) {
    using T = decltype(tag);
    auto src = values<T>(in);
    auto dst = values<T>(out);
    const size_t n = src.size();
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
    for (unsigned w = 0; w < workers; ++w) {
      auto [lo, hi] = chunk_range(n, workers, w);
      if (hi > lo)
        std::memcpy(dst.data() + lo, src.data() + lo, (hi - lo) * sizeof(T));
    }
  });
}

// All-pass digit histograms in one scan. Digit counts are permutation
// invariant, so counts taken on the input hold for every later pass.
template <class K>
std::vector<std::vector<uint32_t>> digit_totals(
    std::span<const K> keys, std::span<const std::pair<unsigned, unsigned>> plan,
    unsigned workers) {
  const size_t n = keys.size();
  const size_t passes = plan.size();
  std::vector<std::vector<uint32_t>> totals(passes);
  size_t stride = 0;
  for (size_t p = 0; p < passes; ++p) {
    totals[p].assign(size_t{1} << (plan[p].second - plan[p].first), 0);
    stride += totals[p].size();
  }
  std::vector<std::vector<uint32_t>> local(workers);
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
  for (unsigned w = 0; w < workers; ++w) {
    auto& mine = local[w];
    mine.assign(stride, 0);
    auto [lo, hi] = chunk_range(n, workers, w);
    for (size_t i = lo; i < hi; ++i) {
      const K k = keys[i];
      size_t base = 0;
      for (size_t p = 0; p < passes; ++p) {
        const unsigned bits = plan[p].second - plan[p].first;
        ++mine[base + static_cast<size_t>((k >> plan[p].first) & ((K{1} << bits) - 1))];
        base += size_t{1} << bits;
      }
    }
  }
  for (unsigned w = 0; w < workers; ++w) {
    size_t base = 0;
    for (size_t p = 0; p < passes; ++p) {
      for (size_t d = 0; d < totals[p].size(); ++d) totals[p][d] += local[w][base + d];
      base += totals[p].size();
    }
  }
  return totals;
}

inline bool single_digit(const std::vector<uint32_t>& counts, size_t n) {
  if (n == 0) return true;
  for (uint32_t c : counts)
    if (c == n) return true;
  return false;
}

// LSD loop with ping-pong buffers. The executed pass count is known up
// front, so the first target is chosen to land the last pass in the
// caller's output buffers without a fix-up copy.
template <class K>
void lsd_passes(const Column& keys, const Column* vals, Column& keys_out,
                Column* vals_out, std::span<const std::pair<unsigned, unsigned>> plan,
                unsigned workers, Workspace ws) {
  const size_t n = keys.size();
  auto totals = digit_totals<K>(values<K>(keys), plan, workers);

  std::vector<size_t> live;
  for (size_t p = 0; p < plan.size(); ++p)
    if (!single_digit(totals[p], n)) live.push_back(p);

  if (live.empty()) {
    copy_column(keys, keys_out, workers);
    if (vals != nullptr) copy_column(*vals, *vals_out, workers);
    return;
  }

  if (live.size() == 1) {
    const auto [lo_bit, hi_bit] = plan[live[0]];
    radix_pass<K>(keys, vals, keys_out, vals_out, lo_bit, hi_bit, workers, ws);
    return;
  }

  WorkColumn scratch_k(ws, keys.kind(), n, AllocClass::Scratch);
  WorkColumn scratch_v;
  if (vals != nullptr) scratch_v = WorkColumn(ws, vals->kind(), n, AllocClass::Scratch);

  const Column* cur_k = &keys;
  const Column* cur_v = vals;
  bool next_is_out = (live.size() % 2) == 1;
  for (size_t idx : live) {
    const auto [lo_bit, hi_bit] = plan[idx];
    Column& tk = next_is_out ? keys_out : scratch_k.col();
    Column* tv = vals != nullptr ? (next_is_out ? vals_out : &scratch_v.col()) : nullptr;
    radix_pass<K>(*cur_k, cur_v, tk, tv, lo_bit, hi_bit, workers, ws);
    cur_k = &tk;
    cur_v = tv;
    next_is_out = !next_is_out;
  }
}

std::vector<std::pair<unsigned, unsigned>> full_width_plan(const Column& keys) {
  const unsigned width = static_cast<unsigned>(value_bytes(keys.kind()) * 8);
  return partition_pass_plan(width, kMaxRadixBits);
}

void validate_plan(std::span<const std::pair<unsigned, unsigned>> plan,
                   unsigned key_bits) {
  for (const auto& [lo, hi] : plan) check_bit_range(lo, hi, key_bits);
}

}  // namespace

std::vector<uint32_t> histogram(const Column& keys, unsigned low_bit,
                                unsigned high_bit, unsigned workers) {
  check_bit_range(low_bit, high_bit, static_cast<unsigned>(value_bytes(keys.kind()) * 8));
  const unsigned fanout = 1u << (high_bit - low_bit);
  std::vector<uint32_t> out(fanout, 0);
  visit_kind(keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    std::vector<uint32_t> per_worker;
    histogram_kernel<K>(values<K>(keys), low_bit, fanout, workers, per_worker);
    for (unsigned w = 0; w < workers; ++w)
      for (unsigned d = 0; d < fanout; ++d)
        out[d] += per_worker[static_cast<size_t>(w) * fanout + d];
  });
  return out;
}

std::vector<uint64_t> exclusive_prefix_sum(std::span<const uint32_t> counts) {
  std::vector<uint64_t> out(counts.size() + 1, 0);
  for (size_t i = 0; i < counts.size(); ++i) out[i + 1] = out[i] + counts[i];
  return out;
}

PartitionLayout radix_partition(const Column& keys, const Column& vals,
                                Column& keys_out, Column& vals_out,
                                unsigned low_bit, unsigned high_bit,
                                unsigned workers, Workspace ws) {
  check_pair_sizes(keys, vals);
  check_bit_range(low_bit, high_bit, static_cast<unsigned>(value_bytes(keys.kind()) * 8));
  require_shape(keys, keys_out);
  require_shape(vals, vals_out);
  if (low_bit == high_bit) {
    // fan-out 1 is the identity permutation
    copy_column(keys, keys_out, workers);
    copy_column(vals, vals_out, workers);
    return PartitionLayout{1, low_bit, high_bit, {0, keys.size()}};
  }
  PartitionLayout lay;
  visit_kind(keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    lay = radix_pass<K>(keys, &vals, keys_out, &vals_out, low_bit, high_bit,
                        workers, ws);
  });
  return lay;
}

PartitionLayout radix_partition_keys(const Column& keys, Column& keys_out,
                                     unsigned low_bit, unsigned high_bit,
                                     unsigned workers, Workspace ws) {
  check_bit_range(low_bit, high_bit, static_cast<unsigned>(value_bytes(keys.kind()) * 8));
  require_shape(keys, keys_out);
  if (low_bit == high_bit) {
    copy_column(keys, keys_out, workers);
    return PartitionLayout{1, low_bit, high_bit, {0, keys.size()}};
  }
  PartitionLayout lay;
  visit_kind(keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    lay = radix_pass<K>(keys, nullptr, keys_out, nullptr, low_bit, high_bit,
                        workers, ws);
  });
  return lay;
}

void radix_partition_passes(const Column& keys, const Column& vals,
                            Column& keys_out, Column& vals_out,
                            std::span<const std::pair<unsigned, unsigned>> plan,
                            unsigned workers, Workspace ws) {
  check_pair_sizes(keys, vals);
  validate_plan(plan, static_cast<unsigned>(value_bytes(keys.kind()) * 8));
  require_shape(keys, keys_out);
  require_shape(vals, vals_out);
  visit_kind(keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    lsd_passes<K>(keys, &vals, keys_out, &vals_out, plan, workers, ws);
  });
}

void radix_partition_passes_keys(const Column& keys, Column& keys_out,
                                 std::span<const std::pair<unsigned, unsigned>> plan,
                                 unsigned workers, Workspace ws) {
  validate_plan(plan, static_cast<unsigned>(value_bytes(keys.kind()) * 8));
  require_shape(keys, keys_out);
  visit_kind(keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    lsd_passes<K>(keys, nullptr, keys_out, nullptr, plan, workers, ws);
  });
}

void sort_pairs(const Column& keys, const Column& vals, Column& keys_out,
                Column& vals_out, unsigned workers, Workspace ws) {
  auto plan = full_width_plan(keys);
  radix_partition_passes(keys, vals, keys_out, vals_out, plan, workers, ws);
}

void sort_keys(const Column& keys, Column& keys_out, unsigned workers, Workspace ws) {
  auto plan = full_width_plan(keys);
  radix_partition_passes_keys(keys, keys_out, plan, workers, ws);
}

void gather(const Column& in, std::span<const uint32_t> map, Column& out,
            unsigned workers) {
  if (out.kind() != in.kind() || out.size() != map.size())
    out = Column(in.kind(), map.size());
  std::atomic<bool> oob{false};
  visit_kind(in.kind(), [&](auto tag) {
    using T = decltype(tag);
    auto src = values<T>(in);
    auto dst = values<T>(out);
    const size_t n = map.size();
    const size_t limit = src.size();
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
    for (unsigned w = 0; w < workers; ++w) {
      auto [lo, hi] = chunk_range(n, workers, w);
      bool bad = false;
      for (size_t i = lo; i < hi; ++i) {
        const uint32_t m = map[i];
        if (m >= limit) {
          bad = true;
          break;
        }
        dst[i] = src[m];
      }
      if (bad) oob.store(true, std::memory_order_relaxed);
    }
  });
  if (oob.load()) throw IndexOutOfBounds("gather map entry past input length");
}

Column gather_copy(const Column& in, std::span<const uint32_t> map, unsigned workers) {
  Column out(in.kind(), map.size());
  gather(in, map, out, workers);
  return out;
}

double gather_clusteredness(std::span<const uint32_t> map) {
  if (map.empty()) throw EmptyInput("clusteredness of an empty map");
  if (map.size() == 1) return 1.0;
  uint64_t total = 0;
  for (size_t i = 0; i + 1 < map.size(); ++i) {
    total += map[i + 1] > map[i] ? map[i + 1] - map[i] : map[i] - map[i + 1];
  }
  return static_cast<double>(total) / static_cast<double>(map.size() - 1);
}

}  // namespace coljoin::primitives
