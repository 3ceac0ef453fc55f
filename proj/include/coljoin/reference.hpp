#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coljoin/column.hpp"

// Serial reference kernels. Kept deliberately naive and independent of the
// parallel implementations; tests use them as oracles and `bench primitives`
// compares against them.
namespace coljoin::reference {

/// Single-threaded stable counting sort by the digit in [low_bit, high_bit).
std::pair<Column, Column> stable_partition_pairs(const Column& keys,
                                                 const Column& vals,
                                                 unsigned low_bit,
                                                 unsigned high_bit);

/// std::stable_sort on (key, value) pairs.
std::pair<Column, Column> stable_sort_pairs(const Column& keys, const Column& vals);

/// Scalar gather loop.
Column gather(const Column& in, std::span<const uint32_t> map);

}  // namespace coljoin::reference
