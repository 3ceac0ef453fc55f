#include "coljoin/reference.hpp"

#include <algorithm>
#include <numeric>

namespace coljoin::reference {

std::pair<Column, Column> stable_partition_pairs(const Column& keys,
                                                 const Column& vals,
                                                 unsigned low_bit,
                                                 unsigned high_bit) {
  const size_t n = keys.size();
  const uint64_t fanout = 1ull << (high_bit - low_bit);
  const uint64_t mask = fanout - 1;
  std::vector<uint64_t> counts(fanout, 0);
  for (size_t i = 0; i < n; ++i) ++counts[(keys.at(i) >> low_bit) & mask];
  std::vector<uint64_t> cursor(fanout, 0);
  for (uint64_t d = 1; d < fanout; ++d) cursor[d] = cursor[d - 1] + counts[d - 1];
  Column ko(keys.kind(), n), vo(vals.kind(), n);
  for (size_t i = 0; i < n; ++i) {
    const uint64_t pos = cursor[(keys.at(i) >> low_bit) & mask]++;
    ko.set(pos, keys.at(i));
    vo.set(pos, vals.at(i));
  }
  return {std::move(ko), std::move(vo)};
}

std::pair<Column, Column> stable_sort_pairs(const Column& keys, const Column& vals) {
  const size_t n = keys.size();
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](uint32_t a, uint32_t b) { return keys.at(a) < keys.at(b); });
  Column ko(keys.kind(), n), vo(vals.kind(), n);
  for (size_t i = 0; i < n; ++i) {
    ko.set(i, keys.at(order[i]));
    vo.set(i, vals.at(order[i]));
  }
  return {std::move(ko), std::move(vo)};
}

Column gather(const Column& in, std::span<const uint32_t> map) {
  Column out(in.kind(), map.size());
  for (size_t i = 0; i < map.size(); ++i) out.set(i, in.at(map[i]));
  return out;
}

}  // namespace coljoin::reference
