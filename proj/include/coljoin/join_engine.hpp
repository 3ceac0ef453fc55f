#pragma once

#include <chrono>
#include <cstdint>
#include <span>

#include "coljoin/column.hpp"
#include "coljoin/mem_ledger.hpp"
#include "coljoin/primitives.hpp"
#include "coljoin/task.hpp"

namespace coljoin {

/// Wall-time and ledger scope for one join phase. Phases must run in order
/// transform, find, materialize, exactly once each.
class PhaseScope {
 public:
  PhaseScope(MemLedger& ledger, PhaseReport& report, JoinPhase phase)
      : ledger_(&ledger), report_(&report), phase_(phase),
        start_(std::chrono::steady_clock::now()) {
    ledger_->begin_phase(phase_);
  }
  PhaseScope(const PhaseScope&) = delete;
  PhaseScope& operator=(const PhaseScope&) = delete;
  ~PhaseScope() {
    try {
      end();
    } catch (...) {
    }
  }

  void end() {
    if (!ledger_) return;
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
    ledger_->end_phase(phase_);
    switch (phase_) {
      case JoinPhase::Transform: report_->transform_ns = static_cast<uint64_t>(ns); break;
      case JoinPhase::FindMatches: report_->find_ns = static_cast<uint64_t>(ns); break;
      case JoinPhase::Materialize: report_->materialize_ns = static_cast<uint64_t>(ns); break;
    }
    report_->peak_by_phase[static_cast<int>(phase_)] = ledger_->phase_peak(phase_);
    ledger_ = nullptr;
  }

 private:
  MemLedger* ledger_;
  PhaseReport* report_;
  JoinPhase phase_;
  std::chrono::steady_clock::time_point start_;
};

struct JoinStats {
  uint64_t matches = 0;
  double clusteredness_r = 1.0;  // of the build-side gather map
  double clusteredness_s = 1.0;  // of the probe-side gather map
};

struct JoinOutput {
  Relation relation;  // key plus every payload of both inputs
  PhaseReport report;
  JoinStats stats;
};

/// Runs one join task through the selected pipeline. Output rows follow the
/// deterministic match emission order; byte-identical for any worker count.
JoinOutput run_join(const JoinTask& task);

/// Output shell for a match set: key column filled, payload columns sized.
Relation make_join_output_shell(const MatchSet& match, const Relation& r,
                                const Relation& s);

/// Copies matched payload values from the untransformed inputs through
/// physical tuple ids.
void materialize_gfur(std::span<const uint32_t> ids_r,
                      std::span<const uint32_t> ids_s, const Relation& r,
                      const Relation& s, Relation& out, unsigned workers = 1);
void materialize_gfur(const MatchSet& match, const Relation& r,
                      const Relation& s, Relation& out, unsigned workers = 1);

/// Transform recipe the on-demand payload transforms must reproduce.
struct GftrContext {
  JoinAlgo algorithm = JoinAlgo::SMJ;
  unsigned total_bits = 0;      // PHJ partition bits
  unsigned bits_per_pass = 8;
  const primitives::PartitionLayout* layout_r = nullptr;  // key-transform layouts
  const primitives::PartitionLayout* layout_s = nullptr;
  unsigned workers = 1;
  Workspace ws{};
  bool validate = false;
};

/// Gathers the two already-transformed first payloads (freeing them), then
/// transforms and gathers the remaining payload columns one at a time.
/// Throws TransformMismatch if an on-demand transform disagrees with the
/// key transform's layout.
void materialize_gftr(std::span<const uint32_t> ids_r,
                      std::span<const uint32_t> ids_s, const Relation& r,
                      const Relation& s, WorkColumn first_r, WorkColumn first_s,
                      const GftrContext& ctx, Relation& out);
void materialize_gftr(const MatchSet& match, const Relation& r,
                      const Relation& s, Column transformed_first_r,
                      Column transformed_first_s, const GftrContext& ctx,
                      Relation& out);

}  // namespace coljoin
