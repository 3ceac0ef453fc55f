#pragma once

#include <string>

#include "coljoin/task.hpp"

namespace coljoin::selector {

struct WorkloadFeatures {
  bool is_narrow = false;      // at most one payload column per side
  double match_ratio = 1.0;
  double zipf_factor = 0.0;
  unsigned key_bytes = 4;
  unsigned payload_bytes = 4;
  unsigned r_payload_cols = 1;
  unsigned s_payload_cols = 1;
};

/// Rule thresholds; the defaults are the only values the measurements name,
/// kept adjustable so users can recalibrate from their own bench CSVs.
struct SelectorConfig {
  double low_match_threshold = 0.25;
  double skew_threshold = 1.0;
};

struct Choice {
  JoinAlgo algorithm;
  JoinPattern pattern;
};

/// Decision tree over all four variants. Partitioned hash join wins every
/// leaf; the pattern flips on match ratio and width.
Choice choose(const WorkloadFeatures& f, const SelectorConfig& cfg = {});

/// Restricted tree when only sort-merge variants are available.
Choice choose_smj_only(const WorkloadFeatures& f, const SelectorConfig& cfg = {});

/// Human-readable dump of both rule sets.
std::string rules_text(const SelectorConfig& cfg = {});

}  // namespace coljoin::selector
