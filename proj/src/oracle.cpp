#include "coljoin/oracle.hpp"

#include <algorithm>

namespace coljoin::oracle {

namespace {

template <class KR, class KS>
void match_pairs(std::span<const KR> rk, std::span<const KS> sk,
                 std::vector<std::pair<uint32_t, uint32_t>>& pairs) {
  for (size_t i = 0; i < rk.size(); ++i) {
    const uint64_t key = rk[i];
    for (size_t j = 0; j < sk.size(); ++j) {
      if (sk[j] == key)
        pairs.emplace_back(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
    }
  }
}

void sort_rows_in_place(std::vector<uint64_t>& flat, size_t width) {
  if (width == 0 || flat.empty()) return;
  const size_t rows = flat.size() / width;
  std::vector<uint32_t> order(rows);
  for (size_t i = 0; i < rows; ++i) order[i] = static_cast<uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const uint64_t* ra = flat.data() + static_cast<size_t>(a) * width;
    const uint64_t* rb = flat.data() + static_cast<size_t>(b) * width;
    return std::lexicographical_compare(ra, ra + width, rb, rb + width);
  });
  std::vector<uint64_t> sorted(flat.size());
  for (size_t i = 0; i < rows; ++i) {
    const uint64_t* src = flat.data() + static_cast<size_t>(order[i]) * width;
    std::copy(src, src + width, sorted.data() + i * width);
  }
  flat = std::move(sorted);
}

}  // namespace

Relation nested_loop_join(const Relation& r, const Relation& s) {
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  visit_kind(r.key.kind(), [&](auto rtag) {
    using KR = decltype(rtag);
    visit_kind(s.key.kind(), [&](auto stag) {
      using KS = decltype(stag);
      match_pairs<KR, KS>(values<KR>(r.key), values<KS>(s.key), pairs);
    });
  });

  // canonicalize by full row content
  const size_t width = 1 + r.payloads.size() + s.payloads.size();
  std::vector<uint64_t> flat;
  flat.reserve(pairs.size() * width);
  for (const auto& [i, j] : pairs) {
    flat.push_back(r.key.at(i));
    for (const auto& p : r.payloads) flat.push_back(p.at(i));
    for (const auto& p : s.payloads) flat.push_back(p.at(j));
  }
  sort_rows_in_place(flat, width);

  Relation out;
  out.name = "oracle";
  const size_t rows = pairs.size();
  out.key = Column(r.key.kind(), rows);
  for (const auto& p : r.payloads) out.payloads.emplace_back(p.kind(), rows);
  for (const auto& p : s.payloads) out.payloads.emplace_back(p.kind(), rows);
  for (size_t i = 0; i < rows; ++i) {
    const uint64_t* row = flat.data() + i * width;
    out.key.set(i, row[0]);
    for (size_t c = 0; c < out.payloads.size(); ++c)
      out.payloads[c].set(i, row[1 + c]);
  }
  return out;
}

std::vector<uint64_t> canonical_rows(const Relation& rel) {
  const size_t width = rel.column_count();
  const size_t rows = rel.rows();
  std::vector<uint64_t> flat(rows * width);
  for (size_t i = 0; i < rows; ++i) {
    uint64_t* row = flat.data() + i * width;
    row[0] = rel.key.at(i);
    for (size_t c = 0; c < rel.payloads.size(); ++c) row[1 + c] = rel.payloads[c].at(i);
  }
  sort_rows_in_place(flat, width);
  return flat;
}

bool same_rows(const Relation& a, const Relation& b) {
  if (a.column_count() != b.column_count() || a.rows() != b.rows()) return false;
  return canonical_rows(a) == canonical_rows(b);
}

}  // namespace coljoin::oracle
