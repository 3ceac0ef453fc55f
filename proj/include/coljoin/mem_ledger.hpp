#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <vector>

#include "coljoin/column.hpp"
#include "coljoin/errors.hpp"

namespace coljoin {

enum class JoinPhase : uint8_t { Transform = 0, FindMatches = 1, Materialize = 2 };

inline const char* phase_name(JoinPhase p) {
  switch (p) {
    case JoinPhase::Transform: return "transform";
    case JoinPhase::FindMatches: return "find";
    default: return "materialize";
  }
}

/// Column-sized data (keys, payloads, tuple IDs) vs. transform scratch
/// (ping-pong buffers, histograms, partition offsets).
enum class AllocClass : uint8_t { ColumnData, Scratch };

struct PeakSnapshot {
  uint64_t total_bytes = 0;
  uint64_t column_bytes = 0;
  uint64_t scratch_bytes = 0;
};

/// Logical memory accounting: counts requested bytes, not what the
/// allocator rounds to. The high-water mark is snapshotted per phase with
/// its column/scratch breakdown.
class MemLedger {
 public:
  void begin_phase(JoinPhase p) {
    std::lock_guard<std::mutex> g(mu_);
    int idx = static_cast<int>(p);
    if (idx != next_phase_ || phase_open_)
      throw PhaseOrderViolation("phases must run transform, find, materialize, once each");
    phase_open_ = true;
    // live bytes carried in from earlier phases count toward this peak
    phase_peaks_[idx] = snapshot_locked();
  }

  void end_phase(JoinPhase p) {
    std::lock_guard<std::mutex> g(mu_);
    if (!phase_open_ || static_cast<int>(p) != next_phase_)
      throw PhaseOrderViolation("end_phase without matching begin_phase");
    phase_open_ = false;
    ++next_phase_;
  }

  void on_alloc(uint64_t bytes, AllocClass cls) {
    std::lock_guard<std::mutex> g(mu_);
    live_ += bytes;
    (cls == AllocClass::ColumnData ? live_col_ : live_scr_) += bytes;
    if (live_ > peak_.total_bytes) peak_ = snapshot_locked();
    if (phase_open_ && live_ > phase_peaks_[next_phase_].total_bytes)
      phase_peaks_[next_phase_] = snapshot_locked();
  }

  void on_free(uint64_t bytes, AllocClass cls) {
    std::lock_guard<std::mutex> g(mu_);
    uint64_t& bucket = (cls == AllocClass::ColumnData ? live_col_ : live_scr_);
    if (bytes > live_ || bytes > bucket)
      throw SpecInvalid("ledger release exceeds live bytes");
    live_ -= bytes;
    bucket -= bytes;
  }

  uint64_t live_bytes() const {
    std::lock_guard<std::mutex> g(mu_);
    return live_;
  }
  PeakSnapshot peak() const {
    std::lock_guard<std::mutex> g(mu_);
    return peak_;
  }
  uint64_t peak_bytes() const { return peak().total_bytes; }
  PeakSnapshot phase_peak(JoinPhase p) const {
    std::lock_guard<std::mutex> g(mu_);
    return phase_peaks_[static_cast<int>(p)];
  }

 private:
  PeakSnapshot snapshot_locked() const {
    return PeakSnapshot{live_, live_col_, live_scr_};
  }

  mutable std::mutex mu_;
  uint64_t live_ = 0, live_col_ = 0, live_scr_ = 0;
  PeakSnapshot peak_{};
  std::array<PeakSnapshot, 3> phase_peaks_{};
  int next_phase_ = 0;
  bool phase_open_ = false;
};

/// RAII handle pairing one logical allocation with exactly one release.
class ScopedAlloc {
 public:
  ScopedAlloc() = default;
  ScopedAlloc(MemLedger* ledger, uint64_t bytes, AllocClass cls)
      : ledger_(ledger), bytes_(bytes), cls_(cls) {
    if (ledger_) ledger_->on_alloc(bytes_, cls_);
  }
  ScopedAlloc(const ScopedAlloc&) = delete;
  ScopedAlloc& operator=(const ScopedAlloc&) = delete;
  ScopedAlloc(ScopedAlloc&& o) noexcept { swap(o); }
  ScopedAlloc& operator=(ScopedAlloc&& o) noexcept {
    release();
    swap(o);
    return *this;
  }
  ~ScopedAlloc() { release(); }

  void release() {
    if (ledger_) ledger_->on_free(bytes_, cls_);
    ledger_ = nullptr;
    bytes_ = 0;
  }

 private:
  void swap(ScopedAlloc& o) {
    std::swap(ledger_, o.ledger_);
    std::swap(bytes_, o.bytes_);
    std::swap(cls_, o.cls_);
  }

  MemLedger* ledger_ = nullptr;
  uint64_t bytes_ = 0;
  AllocClass cls_ = AllocClass::Scratch;
};

/// Free-list of columns for the pre-allocation run mode. Draws match on
/// exact kind and length.
class BufferPool {
 public:
  void put(Column c) { cols_.push_back(std::move(c)); }
  bool take(ValueKind kind, size_t n, Column& out) {
    for (size_t i = 0; i < cols_.size(); ++i) {
      if (cols_[i].kind() == kind && cols_[i].size() == n) {
        out = std::move(cols_[i]);
        cols_.erase(cols_.begin() + static_cast<ptrdiff_t>(i));
        return true;
      }
    }
    return false;
  }
  size_t count() const { return cols_.size(); }

 private:
  std::vector<Column> cols_;
};

/// Buffer acquisition context handed down to kernels: where to account
/// logical allocations and, in pre-allocation mode, where to draw buffers.
struct Workspace {
  MemLedger* ledger = nullptr;
  BufferPool* pool = nullptr;
};

/// A working column that is either drawn from the pool (already counted)
/// or freshly allocated and ledger-tracked. Released on destruction.
class WorkColumn {
 public:
  WorkColumn() = default;
  WorkColumn(Workspace ws, ValueKind kind, size_t n, AllocClass cls) : ws_(ws) {
    if (ws_.pool && ws_.pool->take(kind, n, col_)) {
      pooled_ = true;
    } else {
      col_ = Column(kind, n);
      acc_ = ScopedAlloc(ws_.ledger, col_.byte_size(), cls);
    }
    active_ = true;
  }
  WorkColumn(const WorkColumn&) = delete;
  WorkColumn& operator=(const WorkColumn&) = delete;
  WorkColumn(WorkColumn&& o) noexcept
      : col_(std::move(o.col_)),
        ws_(o.ws_),
        acc_(std::move(o.acc_)),
        pooled_(o.pooled_),
        active_(o.active_) {
    o.pooled_ = false;
    o.active_ = false;
  }
  WorkColumn& operator=(WorkColumn&& o) noexcept {
    if (this != &o) {
      release();
      col_ = std::move(o.col_);
      ws_ = o.ws_;
      acc_ = std::move(o.acc_);
      pooled_ = o.pooled_;
      active_ = o.active_;
      o.pooled_ = false;
      o.active_ = false;
    }
    return *this;
  }
  ~WorkColumn() { release(); }

  Column& col() { return col_; }
  const Column& col() const { return col_; }
  bool active() const { return active_; }

  void release() {
    if (!active_) return;
    if (pooled_ && ws_.pool) {
      ws_.pool->put(std::move(col_));
    } else {
      acc_.release();
    }
    col_ = Column();
    active_ = false;
  }

 private:
  Column col_;
  Workspace ws_{};
  ScopedAlloc acc_;
  bool pooled_ = false;
  bool active_ = false;
};

/// Wall time and logical memory peaks for the three join phases. The total
/// is the sum of the phases; there is no untimed gap inside the join scope.
struct PhaseReport {
  uint64_t transform_ns = 0;
  uint64_t find_ns = 0;
  uint64_t materialize_ns = 0;
  std::array<PeakSnapshot, 3> peak_by_phase{};

  uint64_t total_ns() const { return transform_ns + find_ns + materialize_ns; }
  const PeakSnapshot& peak(JoinPhase p) const {
    return peak_by_phase[static_cast<int>(p)];
  }
  uint64_t overall_peak_bytes() const {
    uint64_t m = 0;
    for (const auto& s : peak_by_phase) m = std::max(m, s.total_bytes);
    return m;
  }
};

}  // namespace coljoin
