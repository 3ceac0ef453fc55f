#include "coljoin/merge_match.hpp"

#include <omp.h>

#include <algorithm>

namespace coljoin::mergejoin {

namespace {

inline int thread_request(unsigned workers) {
  return static_cast<int>(std::clamp(workers, 1u, 64u));
}

template <class K>
void check_sorted(std::span<const K> v, const char* side) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] > v[i]) throw NotSorted(std::string(side) + " keys not ascending");
}

template <class K>
void check_unique(std::span<const K> v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] == v[i])
      throw DuplicateBuildKeys("pk-fk mode requires unique build keys");
}

// Path point (i, j) with i + j = diag, under r-first tie consumption:
// valid iff r[i-1] <= s[j] and s[j-1] < r[i] (with boundary cases).
template <class K>
uint64_t diagonal_intersect(std::span<const K> r, std::span<const K> s,
                            uint64_t diag) {
  const uint64_t nr = r.size(), ns = s.size();
  uint64_t lo = diag > ns ? diag - ns : 0;
  uint64_t hi = std::min<uint64_t>(diag, nr);
  // largest i such that i == 0 or j >= ns or r[i-1] <= s[j]
  while (lo < hi) {
    const uint64_t i = lo + (hi - lo + 1) / 2;
    const uint64_t j = diag - i;
    const bool ok = j >= ns || r[i - 1] <= s[j];
    if (ok) {
      lo = i;
    } else {
      hi = i - 1;
    }
  }
  return lo;
}

// Per-part match walk. The cursor into r only moves forward; matches for a
// given s value always start at its lower bound in the full r column, so
// reads may cross the part's r range while writes stay local.
template <class K, class Emit>
void walk_part(std::span<const K> r, std::span<const K> s, uint64_t s_lo,
               uint64_t s_hi, bool pk_fk, Emit&& emit) {
  if (s_lo >= s_hi) return;
  const uint64_t nr = r.size();
  uint64_t cur = std::lower_bound(r.begin(), r.end(), s[s_lo]) - r.begin();
  for (uint64_t j = s_lo; j < s_hi; ++j) {
    const K key = s[j];
    while (cur < nr && r[cur] < key) ++cur;
    // r exhausted: later s values are >= key, nothing left to match
    if (cur >= nr) break;
    if (r[cur] != key) continue;
    if (pk_fk) {
      emit(cur, j);
      continue;
    }
    for (uint64_t i = cur; i < nr && r[i] == key; ++i) emit(i, j);
  }
}

}  // namespace

MergePathSplit merge_path_split(const Column& r_keys, const Column& s_keys,
                                unsigned parts, bool validate) {
  if (parts == 0) throw SpecInvalid("merge path needs at least one part");
  if (r_keys.kind() != s_keys.kind())
    throw KindError("merge inputs must share a value kind");
  MergePathSplit split;
  split.r_bounds.assign(parts + 1, 0);
  split.s_bounds.assign(parts + 1, 0);
  visit_kind(r_keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    auto r = values<K>(r_keys);
    auto s = values<K>(s_keys);
    if (validate) {
      check_sorted<K>(r, "build");
      check_sorted<K>(s, "probe");
    }
    const uint64_t total = r.size() + s.size();
    for (unsigned p = 1; p < parts; ++p) {
      const uint64_t diag = total * p / parts;
      const uint64_t i = diagonal_intersect<K>(r, s, diag);
      split.r_bounds[p] = i;
      split.s_bounds[p] = diag - i;
    }
    split.r_bounds[parts] = r.size();
    split.s_bounds[parts] = s.size();
  });
  return split;
}

MergeMatchCounts merge_match_count(const Column& r_keys, const Column& s_keys,
                                   bool pk_fk, unsigned parts, unsigned workers,
                                   bool validate) {
  MergeMatchCounts counts;
  counts.pk_fk = pk_fk;
  counts.split = merge_path_split(r_keys, s_keys, parts, validate);
  counts.part_offsets.assign(parts + 1, 0);
  visit_kind(r_keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    auto r = values<K>(r_keys);
    auto s = values<K>(s_keys);
    if (validate && pk_fk) check_unique<K>(r);
    std::vector<uint64_t> per_part(parts, 0);
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
    for (unsigned p = 0; p < parts; ++p) {
      uint64_t c = 0;
      walk_part<K>(r, s, counts.split.s_bounds[p], counts.split.s_bounds[p + 1],
                   pk_fk, [&](uint64_t, uint64_t) { ++c; });
      per_part[p] = c;
    }
    for (unsigned p = 0; p < parts; ++p)
      counts.part_offsets[p + 1] = counts.part_offsets[p] + per_part[p];
  });
  return counts;
}

void merge_match_fill(const Column& r_keys, const Column& s_keys,
                      const MergeMatchCounts& counts, Column& keys_dest,
                      std::span<uint32_t> ids_r, std::span<uint32_t> ids_s,
                      unsigned workers) {
  const uint64_t total = counts.total();
  if (keys_dest.size() != total || ids_r.size() != total || ids_s.size() != total)
    throw LengthMismatch("fill destinations must match the counted total");
  const unsigned parts = counts.split.parts();
  visit_kind(r_keys.kind(), [&](auto tag) {
    using K = decltype(tag);
    auto r = values<K>(r_keys);
    auto s = values<K>(s_keys);
    auto keys_out = values<K>(keys_dest);
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
    for (unsigned p = 0; p < parts; ++p) {
      uint64_t out = counts.part_offsets[p];
      walk_part<K>(r, s, counts.split.s_bounds[p], counts.split.s_bounds[p + 1],
                   counts.pk_fk, [&](uint64_t i, uint64_t j) {
                     keys_out[out] = s[j];
                     ids_r[out] = static_cast<uint32_t>(i);
                     ids_s[out] = static_cast<uint32_t>(j);
                     ++out;
                   });
    }
  });
}

MatchSet merge_find_matches(const Column& r_keys, const Column& s_keys,
                            bool pk_fk, unsigned parts, unsigned workers,
                            bool validate) {
  auto counts = merge_match_count(r_keys, s_keys, pk_fk, parts, workers, validate);
  MatchSet m;
  m.id_semantics = TupleIdSemantics::Virtual;
  m.keys = Column(r_keys.kind(), counts.total());
  m.ids_r.resize(counts.total());
  m.ids_s.resize(counts.total());
  merge_match_fill(r_keys, s_keys, counts, m.keys, m.ids_r, m.ids_s, workers);
  return m;
}

}  // namespace coljoin::mergejoin
