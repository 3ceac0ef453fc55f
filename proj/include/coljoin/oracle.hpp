#pragma once

#include <cstdint>
#include <vector>

#include "coljoin/column.hpp"

// Brute-force reference join. Single-threaded, O(|R|*|S|), no code shared
// with the engine or its primitives; meant for instances up to ~1e5 rows.
namespace coljoin::oracle {

/// Inner equi-join with rows in canonical (lexicographic) order.
Relation nested_loop_join(const Relation& r, const Relation& s);

/// Rows widened to u64, row-major, sorted lexicographically. Two relations
/// are join-equivalent iff their canonical rows are equal.
std::vector<uint64_t> canonical_rows(const Relation& rel);

bool same_rows(const Relation& a, const Relation& b);

}  // namespace coljoin::oracle
