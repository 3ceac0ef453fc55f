// Acceptance suite: prints one line per criterion and exits with the number
// of hard failures. Criterion 5 is directional and machine dependent; it
// warns instead of failing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "coljoin/join_engine.hpp"
#include "coljoin/merge_match.hpp"
#include "coljoin/oracle.hpp"
#include "coljoin/primitives.hpp"
#include "coljoin/reference.hpp"
#include "coljoin/selector.hpp"
#include "coljoin/sequence.hpp"
#include "coljoin/stats.hpp"
#include "coljoin/workloads.hpp"

using namespace coljoin;
namespace wl = coljoin::workloads;

namespace {

struct Outcome {
  bool pass = true;
  bool advisory = false;
  std::string detail;

  void fail(const std::string& msg) {
    pass = false;
    if (detail.empty()) detail = msg;
  }
};

const JoinAlgo kAlgos[] = {JoinAlgo::SMJ, JoinAlgo::PHJ};
const JoinPattern kPatterns[] = {JoinPattern::GFUR, JoinPattern::GFTR};

JoinOutput run_variant(const Relation& r, const Relation& s, JoinAlgo a,
                       JoinPattern p, unsigned workers = 0,
                       bool preallocate = false) {
  JoinTask task;
  task.algorithm = a;
  task.pattern = p;
  task.build = &r;
  task.probe = &s;
  task.options.worker_count = workers;
  task.options.preallocate = preallocate;
  return run_join(task);
}

struct GridCell {
  uint64_t r_rows, s_rows;
  double match, zipf;
  ValueKind kind;
  uint64_t seed;
};

std::vector<GridCell> oracle_grid() {
  std::vector<GridCell> cells;
  uint64_t seed = 1;
  for (uint64_t rows : {1024ull, 16384ull}) {
    for (double match : {0.0, 0.25, 0.5, 1.0}) {
      for (double zipf : {0.0, 1.0, 2.0}) {
        for (ValueKind kind : {ValueKind::u32, ValueKind::u64}) {
          cells.push_back({rows, 2 * rows, match, zipf, kind, seed++});
        }
      }
    }
  }
  // spot cells at the 1e5-row edge of the grid
  cells.push_back({100000, 100000, 1.0, 0.0, ValueKind::u32, seed++});
  cells.push_back({100000, 100000, 0.25, 2.0, ValueKind::u64, seed++});
  cells.push_back({100000, 100000, 0.0, 1.0, ValueKind::u32, seed++});
  return cells;
}

std::pair<Relation, Relation> gen_cell(const GridCell& c, unsigned r_pay = 2,
                                       unsigned s_pay = 1) {
  wl::WorkloadSpec spec;
  spec.r_rows = c.r_rows;
  spec.s_rows = c.s_rows;
  spec.r_payloads = r_pay;
  spec.s_payloads = s_pay;
  spec.key_kind = c.kind;
  spec.payload_kind = c.kind;
  spec.match_ratio = c.match;
  spec.zipf_factor = c.zipf;
  spec.seed = c.seed;
  return wl::gen_pk_fk(spec);
}

std::vector<uint64_t> flat_columns(const Relation& rel) {
  std::vector<uint64_t> flat;
  flat.reserve(rel.rows() * rel.column_count());
  for (size_t i = 0; i < rel.rows(); ++i) flat.push_back(rel.key.at(i));
  for (const auto& p : rel.payloads)
    for (size_t i = 0; i < p.size(); ++i) flat.push_back(p.at(i));
  return flat;
}

// --- criterion 1: oracle equivalence, zero tolerance ---
Outcome criterion_oracle() {
  Outcome out;
  size_t cells = 0;
  for (const auto& cell : oracle_grid()) {
    auto [r, s] = gen_cell(cell);
    auto expect = oracle::nested_loop_join(r, s);
    for (auto a : kAlgos) {
      for (auto p : kPatterns) {
        auto got = run_variant(r, s, a, p);
        if (!oracle::same_rows(got.relation, expect)) {
          out.fail(std::string("variant ") + variant_name(a, p) + " diverges at rows=" +
                   std::to_string(cell.r_rows) + " match=" + std::to_string(cell.match) +
                   " zipf=" + std::to_string(cell.zipf) +
                   " seed=" + std::to_string(cell.seed));
          return out;
        }
      }
    }
    ++cells;
  }
  out.detail = std::to_string(cells) + " workloads x 4 variants equal the oracle";
  return out;
}

// --- criterion 2: determinism across workers + stability properties ---
Outcome criterion_determinism() {
  Outcome out;
  wl::WorkloadSpec spec;
  spec.r_rows = 1 << 16;
  spec.s_rows = 1 << 17;
  spec.r_payloads = 2;
  spec.s_payloads = 2;
  spec.seed = 7;
  auto [r, s] = wl::gen_pk_fk(spec);
  for (auto a : kAlgos) {
    for (auto p : kPatterns) {
      auto base = flat_columns(run_variant(r, s, a, p, 1).relation);
      for (unsigned workers : {2u, 4u, 8u, 16u}) {
        if (flat_columns(run_variant(r, s, a, p, workers).relation) != base) {
          out.fail(std::string(variant_name(a, p)) + " output changed at workers=" +
                   std::to_string(workers));
          return out;
        }
      }
    }
  }

  // stability over 1e4 randomized duplicate-heavy cases
  for (uint64_t case_id = 0; case_id < 10000; ++case_id) {
    CounterRng rng(case_id * 2654435761ull + 17);
    const size_t n = 2 + rng.below(0, 254);
    std::vector<uint32_t> keys(n);
    for (size_t i = 0; i < n; ++i)
      keys[i] = static_cast<uint32_t>(rng.below(i + 1, 13));  // heavy duplicates
    Column kc = Column::of_u32(keys);
    Column tags = iota_u32(n);
    const unsigned workers = 1 + case_id % 16;

    Column pk, pv;
    primitives::radix_partition(kc, tags, pk, pv, 0, 3, workers);
    auto [rk, rv] = reference::stable_partition_pairs(kc, tags, 0, 3);
    if (!(pk == rk && pv == rv)) {
      out.fail("radix_partition stability broke at case " + std::to_string(case_id));
      return out;
    }

    Column sk, sv;
    primitives::sort_pairs(kc, tags, sk, sv, workers);
    auto [ek, ev] = reference::stable_sort_pairs(kc, tags);
    if (!(sk == ek && sv == ev)) {
      out.fail("sort_pairs stability broke at case " + std::to_string(case_id));
      return out;
    }
  }

  // full-match wide join at 2^20 x 2^21: all four variants, one row multiset
  {
    wl::WorkloadSpec big;
    big.r_rows = 1 << 20;
    big.s_rows = 1 << 21;
    big.r_payloads = 2;
    big.s_payloads = 2;
    big.seed = 8;
    auto [r, s] = wl::gen_pk_fk(big);
    std::vector<uint64_t> first;
    for (auto a : kAlgos) {
      for (auto p : kPatterns) {
        auto canon = oracle::canonical_rows(run_variant(r, s, a, p).relation);
        if (first.empty()) {
          first = std::move(canon);
          if (first.size() != big.s_rows * 5) {
            out.fail("2^20 x 2^21 join lost rows");
            return out;
          }
        } else if (canon != first) {
          out.fail(std::string(variant_name(a, p)) + " disagrees at 2^20 x 2^21");
          return out;
        }
      }
    }
  }
  out.detail =
      "4 variants x workers {1,2,4,8,16} bit-identical; 10^4 stability cases; "
      "2^20 x 2^21 cross-variant agreement";
  return out;
}

// --- criterion 3: memory ledger closed forms ---
Outcome criterion_ledger() {
  Outcome out;
  char buf[160];
  for (uint64_t rows : {4096ull, 65536ull}) {
    wl::WorkloadSpec spec;
    spec.r_rows = rows;
    spec.s_rows = rows;  // |R| = |S| = |T| at full match
    spec.seed = 11;
    auto [r, s] = wl::gen_pk_fk(spec);
    const uint64_t mc = rows * 4;
    for (auto a : kAlgos) {
      auto gfur = run_variant(r, s, a, JoinPattern::GFUR);
      auto gftr = run_variant(r, s, a, JoinPattern::GFTR);
      auto check = [&](const char* what, uint64_t got, uint64_t want) {
        if (got != want) {
          std::snprintf(buf, sizeof(buf), "%s %s: %llu != %llu M_c-eq at rows=%llu",
                        algo_name(a), what, (unsigned long long)got,
                        (unsigned long long)want, (unsigned long long)rows);
          out.fail(buf);
        }
      };
      check("gfur transform", gfur.report.peak(JoinPhase::Transform).column_bytes, 5 * mc);
      check("gfur find", gfur.report.peak(JoinPhase::FindMatches).column_bytes, 6 * mc);
      check("gfur materialize", gfur.report.peak(JoinPhase::Materialize).column_bytes, 2 * mc);
      check("gftr transform", gftr.report.peak(JoinPhase::Transform).column_bytes, 4 * mc);
      check("gftr find", gftr.report.peak(JoinPhase::FindMatches).column_bytes, 6 * mc);
      check("gftr materialize", gftr.report.peak(JoinPhase::Materialize).column_bytes, 4 * mc);
      if (!out.pass) return out;
      // measured M_t is reported, not asserted
      std::printf("    [info] %s rows=%llu measured M_t: gfur=%llu B, gftr=%llu B\n",
                  algo_name(a), (unsigned long long)rows,
                  (unsigned long long)gfur.report.peak(JoinPhase::Transform).scratch_bytes,
                  (unsigned long long)gftr.report.peak(JoinPhase::Transform).scratch_bytes);
    }
  }

  // GFTR never exceeds GFUR on the all-4-byte grid
  for (uint64_t rows : {4096ull, 65536ull}) {
    for (unsigned pay : {1u, 2u, 3u}) {
      wl::WorkloadSpec spec;
      spec.r_rows = rows;
      spec.s_rows = rows;
      spec.r_payloads = pay;
      spec.s_payloads = pay;
      spec.seed = 12;
      auto [r, s] = wl::gen_pk_fk(spec);
      for (auto a : kAlgos) {
        auto gfur = run_variant(r, s, a, JoinPattern::GFUR);
        auto gftr = run_variant(r, s, a, JoinPattern::GFTR);
        if (gftr.report.overall_peak_bytes() > gfur.report.overall_peak_bytes()) {
          std::snprintf(buf, sizeof(buf),
                        "%s gftr peak %llu > gfur peak %llu (rows=%llu payloads=%u)",
                        algo_name(a),
                        (unsigned long long)gftr.report.overall_peak_bytes(),
                        (unsigned long long)gfur.report.overall_peak_bytes(),
                        (unsigned long long)rows, pay);
          out.fail(buf);
          return out;
        }
      }
    }
  }

  // mixed widths measured and reported only: 4-byte ids break the
  // same-type assumption behind the closed forms
  for (auto kinds : {std::pair{ValueKind::u32, ValueKind::u64},
                     std::pair{ValueKind::u64, ValueKind::u64}}) {
    wl::WorkloadSpec spec;
    spec.r_rows = 16384;
    spec.s_rows = 16384;
    spec.r_payloads = 2;
    spec.s_payloads = 2;
    spec.key_kind = kinds.first;
    spec.payload_kind = kinds.second;
    spec.seed = 13;
    auto [r, s] = wl::gen_pk_fk(spec);
    for (auto a : kAlgos) {
      auto gfur = run_variant(r, s, a, JoinPattern::GFUR);
      auto gftr = run_variant(r, s, a, JoinPattern::GFTR);
      std::printf("    [info] %s key%zuB/payload%zuB peaks: gfur=%llu B, gftr=%llu B\n",
                  algo_name(a), value_bytes(kinds.first), value_bytes(kinds.second),
                  (unsigned long long)gfur.report.overall_peak_bytes(),
                  (unsigned long long)gftr.report.overall_peak_bytes());
    }
  }
  out.detail = "per-phase peaks match the closed-form M_c coefficients; gftr <= gfur on 4B grid";
  return out;
}

// --- criterion 4: clustered-id invariants ---
Outcome criterion_clustered_ids() {
  Outcome out;
  for (const auto& cell : oracle_grid()) {
    if (cell.r_rows > 20000) continue;  // structural checks, small grid suffices
    auto [r, s] = gen_cell(cell);

    // SMJ-OM probe ids through the merge path must strictly increase
    Column r_sorted, s_sorted;
    primitives::sort_keys(r.key, r_sorted, 4);
    primitives::sort_keys(s.key, s_sorted, 4);
    auto m = mergejoin::merge_find_matches(r_sorted, s_sorted, /*pk_fk=*/true, 8, 4);
    for (size_t i = 1; i < m.size(); ++i) {
      if (m.ids_s[i - 1] >= m.ids_s[i]) {
        out.fail("SMJ-OM probe ids not strictly increasing at seed " +
                 std::to_string(cell.seed));
        return out;
      }
    }
    if (cell.match == 1.0 && m.size() > 1) {
      const double c = primitives::gather_clusteredness(m.ids_s);
      if (c != 1.0) {
        out.fail("full-match SMJ-OM clusteredness " + std::to_string(c) + " != 1.0");
        return out;
      }
    }

    // PHJ-OM probe map never less clustered than PHJ-UM's
    auto om = run_variant(r, s, JoinAlgo::PHJ, JoinPattern::GFTR);
    auto um = run_variant(r, s, JoinAlgo::PHJ, JoinPattern::GFUR);
    if (om.stats.clusteredness_s > um.stats.clusteredness_s) {
      out.fail("PHJ-OM clusteredness " + std::to_string(om.stats.clusteredness_s) +
               " > PHJ-UM " + std::to_string(um.stats.clusteredness_s) + " at seed " +
               std::to_string(cell.seed));
      return out;
    }
  }
  out.detail = "strict probe order for SMJ-OM; PHJ-OM <= PHJ-UM clusteredness on the grid";
  return out;
}

uint64_t llc_bytes() {
  // level-3 unified cache of cpu0, when the kernel exposes it
  FILE* f = std::fopen("/sys/devices/system/cpu/cpu0/cache/index3/size", "r");
  if (!f) return 0;
  char buf[32] = {0};
  const bool ok = std::fgets(buf, sizeof(buf), f) != nullptr;
  std::fclose(f);
  if (!ok) return 0;
  uint64_t kb = std::strtoull(buf, nullptr, 10);
  return kb * 1024;
}

// --- criterion 5: directional performance (advisory) ---
Outcome criterion_directional_perf() {
  Outcome out;
  out.advisory = true;
  const uint64_t rows = 1ull << 24;

  const uint64_t llc = llc_bytes();
  if (llc > 0 && rows * 4 <= llc) {
    std::printf("    [info] last-level cache is %llu MiB; a %llu MiB gather column "
                "fits inside it, so the out-of-cache premise does not hold here\n",
                (unsigned long long)(llc >> 20), (unsigned long long)(rows * 4 >> 20));
  }
  wl::WorkloadSpec spec;
  spec.r_rows = rows;
  spec.s_rows = rows;
  spec.r_payloads = 2;
  spec.s_payloads = 2;
  spec.seed = 3;
  auto [r, s] = wl::gen_pk_fk(spec);

  // pre-allocation mode keeps buffer page faults out of the timed phases,
  // matching how the measurements are defined; reps interleave the two
  // variants so machine drift hits both sides equally
  std::vector<uint64_t> um_times, om_times;
  for (int rep = 0; rep < 5; ++rep) {
    um_times.push_back(
        run_variant(r, s, JoinAlgo::PHJ, JoinPattern::GFUR, 0, true).report.materialize_ns);
    om_times.push_back(
        run_variant(r, s, JoinAlgo::PHJ, JoinPattern::GFTR, 0, true).report.materialize_ns);
  }
  std::sort(um_times.begin(), um_times.end());
  std::sort(om_times.begin(), om_times.end());
  const uint64_t unclustered = um_times[um_times.size() / 2];
  const uint64_t clustered = om_times[om_times.size() / 2];
  const double ratio = clustered == 0
                           ? 0.0
                           : static_cast<double>(unclustered) / static_cast<double>(clustered);

  // supporting evidence at a size the cache cannot hold: the raw gather
  // direction over a 4x-LLC table
  {
    const uint64_t items = llc > 0 ? std::max<uint64_t>(rows, llc) : (rows * 4);
    Column table(ValueKind::u32, items);
    auto tv = table.u32();
    for (uint64_t i = 0; i < items; ++i) tv[i] = static_cast<uint32_t>(i);
    std::vector<uint32_t> map(items);
    for (uint64_t i = 0; i < items; ++i) map[i] = static_cast<uint32_t>(i);
    CounterRng rng(99);
    for (uint64_t i = items; i > 1; --i) std::swap(map[i - 1], map[rng.below(i, i)]);
    Column dst(ValueKind::u32, items);
    const auto t0 = std::chrono::steady_clock::now();
    primitives::gather(table, map, dst, 1);
    const auto t1 = std::chrono::steady_clock::now();
    for (uint64_t i = 0; i < items; ++i) map[i] = static_cast<uint32_t>(i);
    const auto t2 = std::chrono::steady_clock::now();
    primitives::gather(table, map, dst, 1);
    const auto t3 = std::chrono::steady_clock::now();
    const double random_s = std::chrono::duration<double>(t1 - t0).count();
    const double unit_s = std::chrono::duration<double>(t3 - t2).count();
    std::printf("    [info] raw gather over a %llu MiB table: shuffled map %.3f s vs "
                "unit-stride %.3f s (%.1fx)\n",
                (unsigned long long)(items * 4 >> 20), random_s, unit_s,
                unit_s > 0 ? random_s / unit_s : 0.0);
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "PHJ materialize: unclustered %.3f s vs clustered %.3f s, ratio %.2fx "
                "(threshold 1.2x)",
                unclustered * 1e-9, clustered * 1e-9, ratio);
  out.detail = buf;
  if (ratio < 1.2) out.pass = false;
  return out;
}

// --- criterion 6: zipf generator fidelity ---
Outcome criterion_zipf() {
  Outcome out;
  const uint64_t n = 1 << 10;
  const uint64_t draws = 1'000'000;
  for (double factor : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    wl::ZipfSampler sampler(n, factor, 90210);
    std::vector<uint64_t> counts(n, 0);
    for (uint64_t i = 0; i < draws; ++i) ++counts[sampler(i)];
    std::vector<double> expected(n);
    for (uint64_t k = 0; k < n; ++k) expected[k] = sampler.pmf(k) * draws;
    auto gof = stats::chi_square_gof(counts, expected);
    if (!(gof.p_value > 0.001)) {
      char buf[120];
      std::snprintf(buf, sizeof(buf), "factor %.1f: chi2=%.1f dof=%u p=%.5f <= 0.001",
                    factor, gof.statistic, gof.dof, gof.p_value);
      out.fail(buf);
      return out;
    }
  }
  out.detail = "chi-square p > 0.001 at factors {0, 0.5, 1, 1.5, 2}, 1e6 draws";
  return out;
}

// --- criterion 7: star-schema harness ---
Outcome criterion_star() {
  Outcome out;
  for (unsigned n_joins : {2u, 4u, 8u}) {
    wl::StarSchemaSpec spec;
    spec.fact_rows = 1 << 18;
    spec.dims = n_joins;
    spec.dim_rows = 1 << 16;
    spec.seed = 40 + n_joins;
    auto star = wl::gen_star(spec);
    for (auto variant : {std::pair{JoinAlgo::PHJ, JoinPattern::GFTR},
                         std::pair{JoinAlgo::SMJ, JoinPattern::GFUR}}) {
      auto steps = run_join_sequence(star.fact, star.dims, variant.first,
                                     variant.second, {});
      for (size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].rows != spec.fact_rows) {
          out.fail("join " + std::to_string(i + 1) + " of " + std::to_string(n_joins) +
                   " lost rows: " + std::to_string(steps[i].rows));
          return out;
        }
        if (steps[i].output_columns != i + 3) {  // (i+1)-th join -> (i+1)+2 columns
          out.fail("join " + std::to_string(i + 1) + " materialized " +
                   std::to_string(steps[i].output_columns) + " columns, wanted " +
                   std::to_string(i + 3));
          return out;
        }
      }
    }
  }
  out.detail = "N in {2,4,8}: every chained join keeps fact cardinality, i-th join has i+2 columns";
  return out;
}

// --- criterion 8: selector conformance ---
Outcome criterion_selector() {
  Outcome out;
  namespace sel = coljoin::selector;
  auto features = [](bool narrow, double match, double zipf, unsigned kb, unsigned pb) {
    sel::WorkloadFeatures f;
    f.is_narrow = narrow;
    f.match_ratio = match;
    f.zipf_factor = zipf;
    f.key_bytes = kb;
    f.payload_bytes = pb;
    f.r_payload_cols = narrow ? 1 : 2;
    f.s_payload_cols = narrow ? 1 : 2;
    return f;
  };
  auto expect = [&](sel::WorkloadFeatures f, JoinAlgo a, const char* why) {
    auto c = sel::choose(f);
    if (c.algorithm != a) out.fail(std::string("selector broke: ") + why);
  };
  // narrow -> PHJ family, any skew
  for (double z : {0.0, 1.0, 2.0}) expect(features(true, 1.0, z, 4, 4), JoinAlgo::PHJ, "narrow->PHJ");
  // low match -> PHJ-UM
  {
    auto c = sel::choose(features(false, 0.1, 0.0, 4, 4));
    if (!(c.algorithm == JoinAlgo::PHJ && c.pattern == JoinPattern::GFUR))
      out.fail("match<0.25 must pick PHJ-UM");
  }
  // wide + uniform + high match -> PHJ-OM
  {
    auto c = sel::choose(features(false, 1.0, 0.0, 4, 4));
    if (!(c.algorithm == JoinAlgo::PHJ && c.pattern == JoinPattern::GFTR))
      out.fail("wide uniform high-match must pick PHJ-OM");
  }
  // 8-byte-heavy never SMJ-OM
  for (double match : {0.0, 0.5, 1.0}) {
    for (double zipf : {0.0, 1.5}) {
      auto c = sel::choose(features(false, match, zipf, 8, 8));
      if (c.algorithm == JoinAlgo::SMJ && c.pattern == JoinPattern::GFTR)
        out.fail("8-byte workload selected SMJ-OM");
    }
  }
  if (out.pass) out.detail = "scenario table reproduced";
  return out;
}

// --- criterion 9: join-shape cardinalities at 1/128 scale ---
Outcome criterion_tpc_shapes() {
  Outcome out;
  const double scale = 1.0 / 128.0;
  for (auto shape : {wl::TpcShape::J1, wl::TpcShape::J2, wl::TpcShape::J3,
                     wl::TpcShape::J4, wl::TpcShape::J5}) {
    auto info = wl::tpc_shape_info(shape, scale);
    auto [r, s] = wl::gen_tpc_shape(shape, scale, ValueKind::u32, ValueKind::u32, 5);
    auto got = run_variant(r, s, JoinAlgo::PHJ, JoinPattern::GFTR);
    const double rel = std::fabs(static_cast<double>(got.relation.rows()) -
                                 static_cast<double>(info.out_rows)) /
                       static_cast<double>(info.out_rows);
    std::printf("    [info] %s at 1/128: measured %llu rows, target %llu (%.3f%% off)\n",
                wl::tpc_shape_name(shape), (unsigned long long)got.relation.rows(),
                (unsigned long long)info.out_rows, rel * 100.0);
    if (rel >= 0.02) {
      out.fail(std::string(wl::tpc_shape_name(shape)) + " cardinality off by " +
               std::to_string(rel * 100.0) + "%");
      return out;
    }
  }
  out.detail = "J1..J5 cardinalities within 2% of the scaled targets";
  return out;
}

int run_criterion(int id, const char* name, Outcome (*fn)()) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  const char* tag = out.pass ? "PASS" : (out.advisory ? "WARN" : "FAIL");
  std::printf("[%s] criterion %d: %s (%.1fs) %s\n", tag, id, name, secs,
              out.detail.c_str());
  std::fflush(stdout);
  return out.pass || out.advisory ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select criteria by number, e.g. ./acceptance 3 5
  auto wanted = [&](int id) {
    if (argc <= 1) return true;
    for (int i = 1; i < argc; ++i)
      if (std::atoi(argv[i]) == id) return true;
    return false;
  };
  int failures = 0;
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "oracle equivalence over the seeded grid", criterion_oracle},
      {2, "determinism and stability", criterion_determinism},
      {3, "memory ledger closed forms", criterion_ledger},
      {4, "clustered-id invariants", criterion_clustered_ids},
      {5, "directional materialization speedup (advisory)", criterion_directional_perf},
      {6, "zipf generator fidelity", criterion_zipf},
      {7, "star-schema harness", criterion_star},
      {8, "selector conformance", criterion_selector},
      {9, "join-shape cardinalities", criterion_tpc_shapes},
  };
  for (const auto& e : entries)
    if (wanted(e.id)) failures += run_criterion(e.id, e.name, e.fn);
  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria failed\n", failures);
  }
  return failures;
}
