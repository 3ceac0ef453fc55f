#include <algorithm>

#include "doctest.h"

#include "coljoin/hash_match.hpp"
#include "coljoin/join_engine.hpp"
#include "coljoin/merge_match.hpp"
#include "coljoin/oracle.hpp"
#include "coljoin/workloads.hpp"
#include "test_util.hpp"

using namespace coljoin;

namespace {

const JoinAlgo kAlgos[] = {JoinAlgo::SMJ, JoinAlgo::PHJ};
const JoinPattern kPatterns[] = {JoinPattern::GFUR, JoinPattern::GFTR};

JoinOutput run(const Relation& r, const Relation& s, JoinAlgo a, JoinPattern p,
               JoinOptions opt = {}) {
  JoinTask task;
  task.algorithm = a;
  task.pattern = p;
  task.build = &r;
  task.probe = &s;
  task.options = opt;
  return run_join(task);
}

std::vector<uint64_t> flat_columns(const Relation& rel) {
  std::vector<uint64_t> flat;
  flat.reserve(rel.rows() * rel.column_count());
  for (size_t i = 0; i < rel.rows(); ++i) flat.push_back(rel.key.at(i));
  for (const auto& p : rel.payloads)
    for (size_t i = 0; i < p.size(); ++i) flat.push_back(p.at(i));
  return flat;
}

}  // namespace

TEST_CASE("all four variants produce the inner join") {
  auto r = make_relation(tu::col32({1, 2, 3}), {tu::col32({11, 12, 13})}, "r", true);
  auto s = make_relation(tu::col32({3, 1}), {tu::col32({21, 22})}, "s");
  auto expect = oracle::nested_loop_join(r, s);
  REQUIRE(expect.rows() == 2);
  for (auto a : kAlgos) {
    for (auto p : kPatterns) {
      auto out = run(r, s, a, p);
      CHECK(out.relation.rows() == 2);
      CHECK(out.relation.column_count() == 3);
      CHECK(oracle::same_rows(out.relation, expect));
      CHECK(out.stats.matches == 2);
    }
  }
}

TEST_CASE("empty inputs yield empty output of full arity") {
  auto r = make_relation(tu::col32({}), {tu::col32({}), tu::col32({})}, "r", true);
  auto s = make_relation(tu::col32({1, 2}), {tu::col32({5, 6})}, "s");
  for (auto a : kAlgos) {
    for (auto p : kPatterns) {
      auto out = run(r, s, a, p);
      CHECK(out.relation.rows() == 0);
      CHECK(out.relation.column_count() == 4);
    }
  }
}

TEST_CASE("variants agree with the oracle over a randomized grid") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    for (double match : {0.0, 0.5, 1.0}) {
      for (double zipf : {0.0, 1.5}) {
        workloads::WorkloadSpec spec;
        spec.r_rows = 700 + seed * 131;
        spec.s_rows = 1100 + seed * 57;
        spec.r_payloads = 2;
        spec.s_payloads = 1;
        spec.match_ratio = match;
        spec.zipf_factor = zipf;
        spec.seed = seed;
        auto [r, s] = workloads::gen_pk_fk(spec);
        auto expect = oracle::nested_loop_join(r, s);
        for (auto a : kAlgos) {
          for (auto p : kPatterns) {
            auto out = run(r, s, a, p);
            CHECK(oracle::same_rows(out.relation, expect));
          }
        }
      }
    }
  }
}

TEST_CASE("64-bit keys and payloads run through every variant") {
  workloads::WorkloadSpec spec;
  spec.r_rows = 900;
  spec.s_rows = 1400;
  spec.key_kind = ValueKind::u64;
  spec.payload_kind = ValueKind::u64;
  spec.seed = 9;
  auto [r, s] = workloads::gen_pk_fk(spec);
  auto expect = oracle::nested_loop_join(r, s);
  for (auto a : kAlgos)
    for (auto p : kPatterns) CHECK(oracle::same_rows(run(r, s, a, p).relation, expect));
}

TEST_CASE("worker count never changes the output bytes") {
  workloads::WorkloadSpec spec;
  spec.r_rows = 1 << 12;
  spec.s_rows = 1 << 13;
  spec.r_payloads = 2;
  spec.s_payloads = 2;
  spec.seed = 31;
  auto [r, s] = workloads::gen_pk_fk(spec);
  for (auto a : kAlgos) {
    for (auto p : kPatterns) {
      JoinOptions opt;
      opt.worker_count = 1;
      auto base = run(r, s, a, p, opt);
      auto base_flat = flat_columns(base.relation);
      for (unsigned workers : {2u, 4u, 8u, 16u}) {
        opt.worker_count = workers;
        auto out = run(r, s, a, p, opt);
        CHECK(flat_columns(out.relation) == base_flat);
      }
    }
  }
}

TEST_CASE("per-phase ledger peaks follow the closed forms") {
  const uint64_t rows = 4096;
  workloads::WorkloadSpec spec;
  spec.r_rows = rows;
  spec.s_rows = rows;  // |R| = |S| = |T| at full match
  spec.seed = 77;
  auto [r, s] = workloads::gen_pk_fk(spec);
  const uint64_t mc = rows * 4;

  for (auto a : kAlgos) {
    auto gfur = run(r, s, a, JoinPattern::GFUR);
    REQUIRE(gfur.relation.rows() == rows);
    CHECK(gfur.report.peak(JoinPhase::Transform).column_bytes == 5 * mc);
    CHECK(gfur.report.peak(JoinPhase::FindMatches).column_bytes == 6 * mc);
    CHECK(gfur.report.peak(JoinPhase::Materialize).column_bytes == 2 * mc);
    // transform scratch (the reported intermediate term) exists
    CHECK(gfur.report.peak(JoinPhase::Transform).scratch_bytes > 0);

    auto gftr = run(r, s, a, JoinPattern::GFTR);
    CHECK(gftr.report.peak(JoinPhase::Transform).column_bytes == 4 * mc);
    CHECK(gftr.report.peak(JoinPhase::FindMatches).column_bytes == 6 * mc);
    CHECK(gftr.report.peak(JoinPhase::Materialize).column_bytes == 4 * mc);
    // single payload per side: no on-demand transform in materialize
    // (PHJ keeps its partition layout vectors alive, nothing column-sized)
    if (a == JoinAlgo::SMJ) {
      CHECK(gftr.report.peak(JoinPhase::Materialize).scratch_bytes == 0);
    } else {
      CHECK(gftr.report.peak(JoinPhase::Materialize).scratch_bytes < mc);
    }

    CHECK(gftr.report.overall_peak_bytes() <= gfur.report.overall_peak_bytes());
  }
}

TEST_CASE("two payloads per side raise the GFTR materialize peak by M_t") {
  const uint64_t rows = 2048;
  workloads::WorkloadSpec spec;
  spec.r_rows = rows;
  spec.s_rows = rows;
  spec.r_payloads = 2;
  spec.s_payloads = 2;
  spec.seed = 78;
  auto [r, s] = workloads::gen_pk_fk(spec);
  const uint64_t mc = rows * 4;
  for (auto a : kAlgos) {
    auto out = run(r, s, a, JoinPattern::GFTR);
    // ids (2) + on-demand transformed pair (2), plus scratch
    CHECK(out.report.peak(JoinPhase::Materialize).column_bytes == 4 * mc);
    CHECK(out.report.peak(JoinPhase::Materialize).scratch_bytes > 0);
    auto gfur = run(r, s, a, JoinPattern::GFUR);
    CHECK(out.report.overall_peak_bytes() <= gfur.report.overall_peak_bytes());
  }
}

TEST_CASE("zero-row joins report zero column peaks") {
  auto r = make_relation(tu::col32({}), {tu::col32({})}, "r", true);
  auto s = make_relation(tu::col32({}), {tu::col32({})}, "s");
  auto out = run(r, s, JoinAlgo::PHJ, JoinPattern::GFTR);
  CHECK(out.report.peak(JoinPhase::Transform).column_bytes == 0);
  CHECK(out.report.peak(JoinPhase::Materialize).column_bytes == 0);
}

TEST_CASE("gfur materialization gathers from the original relations") {
  auto r = make_relation(tu::col32({7, 8, 9}), {tu::col32({10, 20, 30})}, "r");
  auto s = make_relation(tu::col32({7, 9}), {}, "s");
  MatchSet m;
  m.id_semantics = TupleIdSemantics::Physical;
  m.keys = tu::col32({9, 7});
  m.ids_r = {2, 0};
  m.ids_s = {1, 0};
  Relation out = make_join_output_shell(m, r, s);
  materialize_gfur(m, r, s, out);
  CHECK(tu::widened(out.payloads[0]) == std::vector<uint64_t>{30, 10});

  MatchSet empty;
  empty.id_semantics = TupleIdSemantics::Physical;
  empty.keys = tu::col32({});
  Relation eout = make_join_output_shell(empty, r, s);
  materialize_gfur(empty, r, s, eout);
  CHECK(eout.rows() == 0);
  CHECK(eout.column_count() == 2);
}

TEST_CASE("gftr materialization gathers from transformed payloads") {
  // keys [3,1,2] with payload [c,a,b] sorts to payload [a,b,c]
  auto r = make_relation(tu::col32({3, 1, 2}), {tu::col32({30, 10, 20})}, "r", true);
  auto s = make_relation(tu::col32({1, 3}), {}, "s");
  Column tk, tp;
  primitives::sort_pairs(r.key, r.payloads[0], tk, tp);
  CHECK(tu::widened(tp) == std::vector<uint64_t>{10, 20, 30});

  MatchSet m;
  m.id_semantics = TupleIdSemantics::Virtual;
  m.keys = tu::col32({1, 3});
  m.ids_r = {0, 2};  // positions in the sorted relation
  m.ids_s = {0, 1};
  Relation out = make_join_output_shell(m, r, s);
  GftrContext ctx;
  ctx.algorithm = JoinAlgo::SMJ;
  materialize_gftr(m, r, s, std::move(tp), Column(), ctx, out);
  CHECK(tu::widened(out.payloads[0]) == std::vector<uint64_t>{10, 30});
}

TEST_CASE("on-demand transforms must reproduce the key layout") {
  auto r = make_relation(tu::col32({5, 2, 7, 0}),
                         {tu::col32({1, 2, 3, 4}), tu::col32({9, 9, 8, 8})}, "r");
  auto s = make_relation(tu::col32({5}), {tu::col32({6})}, "s");
  Column tk, tp;
  auto lay = hashjoin::partition_relation(r.key, r.payloads[0], tk, tp, 2, 8);
  MatchSet m;
  m.id_semantics = TupleIdSemantics::Virtual;
  m.keys = tu::col32({5});
  m.ids_r = {2};
  m.ids_s = {0};
  Relation out = make_join_output_shell(m, r, s);
  GftrContext ctx;
  ctx.algorithm = JoinAlgo::PHJ;
  ctx.total_bits = 2;
  ctx.layout_r = &lay;
  // forge a layout that disagrees with the on-demand partition
  primitives::PartitionLayout wrong = lay;
  wrong.offsets[1] += 1;
  ctx.layout_r = &wrong;
  CHECK_THROWS_AS(
      materialize_gftr(m, r, s, std::move(tp), tu::col32({6}), ctx, out),
      TransformMismatch);
}

TEST_CASE("phase scope wiring enforces order and records times") {
  MemLedger lg;
  PhaseReport rep;
  {
    PhaseScope t(lg, rep, JoinPhase::Transform);
  }
  CHECK_THROWS_AS(PhaseScope(lg, rep, JoinPhase::Materialize), PhaseOrderViolation);
  {
    PhaseScope f(lg, rep, JoinPhase::FindMatches);
  }
  {
    PhaseScope m(lg, rep, JoinPhase::Materialize);
  }
  CHECK(rep.total_ns() == rep.transform_ns + rep.find_ns + rep.materialize_ns);
}

TEST_CASE("engine stats expose clusteredness of the final gather maps") {
  workloads::WorkloadSpec spec;
  spec.r_rows = 1 << 12;
  spec.s_rows = 1 << 12;
  spec.seed = 5;
  auto [r, s] = workloads::gen_pk_fk(spec);
  // SMJ GFTR at full match: probe map is exactly 0..n-1
  auto om = run(r, s, JoinAlgo::SMJ, JoinPattern::GFTR);
  CHECK(om.stats.clusteredness_s == doctest::Approx(1.0));
  auto um = run(r, s, JoinAlgo::SMJ, JoinPattern::GFUR);
  CHECK(um.stats.clusteredness_s > om.stats.clusteredness_s);
}

TEST_CASE("mismatched key kinds are rejected") {
  auto r = make_relation(tu::col32({1}), {}, "r");
  auto s = make_relation(tu::col64({1}), {}, "s");
  CHECK_THROWS_AS(run(r, s, JoinAlgo::PHJ, JoinPattern::GFTR), KindError);
}

TEST_CASE("preallocation mode produces identical results") {
  workloads::WorkloadSpec spec;
  spec.r_rows = 3000;
  spec.s_rows = 5000;
  spec.r_payloads = 2;
  spec.s_payloads = 2;
  spec.seed = 12;
  auto [r, s] = workloads::gen_pk_fk(spec);
  for (auto a : kAlgos) {
    for (auto p : kPatterns) {
      auto plain = run(r, s, a, p);
      JoinOptions opt;
      opt.preallocate = true;
      auto pre = run(r, s, a, p, opt);
      CHECK(flat_columns(pre.relation) == flat_columns(plain.relation));
    }
  }
}

TEST_CASE("validation mode passes on well-formed tasks") {
  workloads::WorkloadSpec spec;
  spec.r_rows = 2000;
  spec.s_rows = 3000;
  spec.r_payloads = 2;
  spec.s_payloads = 1;
  spec.seed = 13;
  auto [r, s] = workloads::gen_pk_fk(spec);
  JoinOptions opt;
  opt.validate = true;
  for (auto a : kAlgos)
    for (auto p : kPatterns) CHECK_NOTHROW(run(r, s, a, p, opt));
}
