#pragma once

#include <cstdint>
#include <vector>

#include "coljoin/join_engine.hpp"

namespace coljoin {

struct SequenceStep {
  uint64_t rows = 0;            // output cardinality of this join
  unsigned output_columns = 0;  // key + carried payloads + dim payload
  PhaseReport report;
  uint64_t fk_fetch_ns = 0;     // gathering the next FK column, between joins
};

/// Chains N primary-key joins over a fact table with FK columns
/// fact.payloads[0..N) and an ID key. Join i probes with
/// (FK_i, ID, P_1..P_{i-1}) against dims[i]; the result's ID column fetches
/// FK_{i+1} before the next join.
std::vector<SequenceStep> run_join_sequence(const Relation& fact,
                                            const std::vector<Relation>& dims,
                                            JoinAlgo algorithm, JoinPattern pattern,
                                            const JoinOptions& options);

}  // namespace coljoin
