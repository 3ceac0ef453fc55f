#include "doctest.h"

#include "coljoin/column.hpp"
#include "coljoin/mem_ledger.hpp"
#include "coljoin/task.hpp"
#include "test_util.hpp"

using namespace coljoin;

TEST_CASE("make_relation validates lengths and builds") {
  auto r = make_relation(tu::col32({1, 2, 3}), {tu::col32({10, 20, 30})}, "r");
  CHECK(r.rows() == 3);
  CHECK(r.column_count() == 2);

  auto empty = make_relation(tu::col32({}), {}, "e");
  CHECK(empty.rows() == 0);

  CHECK_THROWS_AS(make_relation(tu::col32({1, 2}), {tu::col32({10, 20, 30})}, "x"),
                  LengthMismatch);
}

TEST_CASE("relation columns round-trip") {
  auto key = tu::random_u32(257, 7);
  auto pay = tu::random_u64(257, 8);
  auto r = make_relation(tu::col32(key), {tu::col64(pay)}, "rt");
  for (size_t i = 0; i < key.size(); ++i) {
    CHECK(r.key.at(i) == key[i]);
    CHECK(r.payloads[0].at(i) == pay[i]);
  }
}

TEST_CASE("match set key agreement resolves through both semantics") {
  // r sorted [1,3,5] with physical ids [2,0,1]; s sorted [1,1,5] ids [0,1,2]
  MatchSet m;
  m.keys = tu::col32({1, 1, 5});
  m.ids_r = {0, 0, 2};
  m.ids_s = {0, 1, 2};
  m.id_semantics = TupleIdSemantics::Virtual;
  Column r_sorted = tu::col32({1, 3, 5});
  Column s_sorted = tu::col32({1, 1, 5});
  for (size_t i = 0; i < m.size(); ++i) {
    CHECK(r_sorted.at(m.ids_r[i]) == m.keys.at(i));
    CHECK(s_sorted.at(m.ids_s[i]) == m.keys.at(i));
  }
}

TEST_CASE("ledger tracks live bytes, peaks and class breakdown") {
  MemLedger lg;
  lg.begin_phase(JoinPhase::Transform);
  lg.on_alloc(100, AllocClass::ColumnData);
  lg.on_alloc(40, AllocClass::Scratch);
  CHECK(lg.live_bytes() == 140);
  CHECK(lg.peak_bytes() == 140);
  lg.on_free(40, AllocClass::Scratch);
  CHECK(lg.live_bytes() == 100);
  CHECK(lg.peak_bytes() == 140);  // monotone
  lg.end_phase(JoinPhase::Transform);

  auto peak = lg.phase_peak(JoinPhase::Transform);
  CHECK(peak.total_bytes == 140);
  CHECK(peak.column_bytes == 100);
  CHECK(peak.scratch_bytes == 40);

  // carried live counts toward the next phase even without new allocations
  lg.begin_phase(JoinPhase::FindMatches);
  lg.end_phase(JoinPhase::FindMatches);
  CHECK(lg.phase_peak(JoinPhase::FindMatches).total_bytes == 100);
}

TEST_CASE("ledger enforces phase order and release pairing") {
  MemLedger lg;
  CHECK_THROWS_AS(lg.begin_phase(JoinPhase::Materialize), PhaseOrderViolation);
  lg.begin_phase(JoinPhase::Transform);
  CHECK_THROWS_AS(lg.begin_phase(JoinPhase::Transform), PhaseOrderViolation);
  lg.end_phase(JoinPhase::Transform);
  CHECK_THROWS_AS(lg.end_phase(JoinPhase::Transform), PhaseOrderViolation);
  CHECK_THROWS_AS(lg.on_free(1, AllocClass::Scratch), SpecInvalid);
}

TEST_CASE("scoped allocations pair with exactly one release") {
  MemLedger lg;
  {
    ScopedAlloc a(&lg, 64, AllocClass::ColumnData);
    CHECK(lg.live_bytes() == 64);
    ScopedAlloc b = std::move(a);
    CHECK(lg.live_bytes() == 64);
  }
  CHECK(lg.live_bytes() == 0);
  CHECK(lg.peak_bytes() == 64);
}

TEST_CASE("work columns return to the pool when one is attached") {
  BufferPool pool;
  pool.put(Column(ValueKind::u32, 16));
  MemLedger lg;
  Workspace ws{&lg, &pool};
  {
    WorkColumn c(ws, ValueKind::u32, 16, AllocClass::ColumnData);
    CHECK(pool.count() == 0);
    CHECK(lg.live_bytes() == 0);  // pooled draw is pre-accounted
    WorkColumn moved = std::move(c);
    CHECK(moved.col().size() == 16);
  }
  CHECK(pool.count() == 1);
}

TEST_CASE("pass plans are deterministic with a final smaller pass") {
  auto plan = partition_pass_plan(16, 8);
  REQUIRE(plan.size() == 2);
  CHECK(plan[0] == std::pair<unsigned, unsigned>{0, 8});
  CHECK(plan[1] == std::pair<unsigned, unsigned>{8, 16});

  auto odd = partition_pass_plan(13, 8);
  REQUIRE(odd.size() == 2);
  CHECK(odd[1] == std::pair<unsigned, unsigned>{8, 13});

  CHECK(partition_pass_plan(0, 8).empty());
  CHECK_THROWS_AS(partition_pass_plan(16, 9), FanoutTooLarge);
}

TEST_CASE("default partition bits track the build size") {
  CHECK(default_total_radix_bits(0) == 0);
  CHECK(default_total_radix_bits(1024) == 0);
  CHECK(default_total_radix_bits(2048) == 1);
  CHECK(default_total_radix_bits(100000) == 7);
  CHECK(default_total_radix_bits(1ull << 20) == 10);
  CHECK(default_total_radix_bits((1ull << 20) + 1) == 16);
  CHECK(default_total_radix_bits(1ull << 28) == 16);
}

TEST_CASE("phase report total is the sum of the phases") {
  PhaseReport rep;
  rep.transform_ns = 5;
  rep.find_ns = 7;
  rep.materialize_ns = 11;
  CHECK(rep.total_ns() == 23);
}
