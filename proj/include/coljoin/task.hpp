#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coljoin/column.hpp"
#include "coljoin/errors.hpp"

namespace coljoin {

enum class JoinAlgo : uint8_t { SMJ, PHJ };
enum class JoinPattern : uint8_t { GFUR, GFTR };

inline const char* algo_name(JoinAlgo a) { return a == JoinAlgo::SMJ ? "smj" : "phj"; }
inline const char* pattern_name(JoinPattern p) { return p == JoinPattern::GFUR ? "gfur" : "gftr"; }

/// Short names as used in plots: SMJ-UM, PHJ-OM, ...
inline const char* variant_name(JoinAlgo a, JoinPattern p) {
  if (a == JoinAlgo::SMJ) return p == JoinPattern::GFUR ? "SMJ-UM" : "SMJ-OM";
  return p == JoinPattern::GFUR ? "PHJ-UM" : "PHJ-OM";
}

struct JoinOptions {
  unsigned radix_bits_per_pass = 8;  // <= 8: one pass produces at most 256 partitions
  int total_radix_bits = -1;         // -1 selects a default from the build size
  unsigned worker_count = 0;         // 0 = runtime default
  uint64_t seed = 0;
  uint32_t sub_partition_limit = 4096;
  bool validate = false;     // sortedness / duplicate-PK / layout guards
  bool preallocate = false;  // grab size-known buffers before the timed phases
};

/// Full description of one join run.
struct JoinTask {
  JoinAlgo algorithm = JoinAlgo::PHJ;
  JoinPattern pattern = JoinPattern::GFTR;
  const Relation* build = nullptr;  // R, holds the keys looked up
  const Relation* probe = nullptr;  // S, streamed against R
  JoinOptions options;
};

/// Default partition fan-out: keep average partitions near 1024 build rows,
/// capped at 16 bits.
inline unsigned default_total_radix_bits(uint64_t build_rows) {
  if (build_rows > (1ull << 20)) return 16;
  unsigned bits = 0;
  while ((build_rows >> bits) > 1024) ++bits;
  return bits > 16 ? 16 : bits;
}

/// Deterministic multi-pass plan over [0, total_bits): full passes of
/// bits_per_pass plus one smaller final pass when the division is not exact.
inline std::vector<std::pair<unsigned, unsigned>> partition_pass_plan(
    unsigned total_bits, unsigned bits_per_pass) {
  if (bits_per_pass == 0 || bits_per_pass > 8)
    throw FanoutTooLarge("bits per pass must be in [1, 8]");
  std::vector<std::pair<unsigned, unsigned>> plan;
  for (unsigned lo = 0; lo < total_bits; lo += bits_per_pass) {
    plan.emplace_back(lo, std::min(lo + bits_per_pass, total_bits));
  }
  return plan;
}

}  // namespace coljoin
