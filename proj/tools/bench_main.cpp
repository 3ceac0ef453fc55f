// bench: microbenchmark and verification harness for the columnar join
// engine. Subcommands: join, gather, sequence, primitives, verify, report,
// gen, selector. Measurement rows stream out as CSV (see bench_io.hpp for
// the schema); `report` turns CSVs into markdown tables.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "coljoin/bench_io.hpp"
#include "coljoin/join_engine.hpp"
#include "coljoin/merge_match.hpp"
#include "coljoin/oracle.hpp"
#include "coljoin/primitives.hpp"
#include "coljoin/reference.hpp"
#include "coljoin/relation_io.hpp"
#include "coljoin/selector.hpp"
#include "coljoin/sequence.hpp"
#include "coljoin/workloads.hpp"

using namespace coljoin;
namespace bio = coljoin::benchio;
namespace wl = coljoin::workloads;

namespace {

struct CommonOpts {
  uint64_t r_rows = 1 << 20;
  uint64_t s_rows = 1 << 21;
  unsigned payloads = 1;
  double match = 1.0;
  double zipf = 0.0;
  unsigned key_bytes = 4;
  unsigned payload_bytes = 4;
  unsigned workers = 0;
  bool workers_from_flag = false;
  uint64_t seed = 42;
  unsigned reps = 7;
  int radix_bits = -1;
  uint32_t sub_limit = 4096;
  bool prealloc = false;
  std::string algo = "phj";
  std::string pattern = "gftr";
  std::string out_path;
};

ValueKind kind_of(unsigned bytes) {
  if (bytes == 4) return ValueKind::u32;
  if (bytes == 8) return ValueKind::u64;
  throw SpecInvalid("value width must be 4 or 8 bytes");
}

JoinAlgo parse_algo(const std::string& s) {
  if (s == "smj") return JoinAlgo::SMJ;
  if (s == "phj") return JoinAlgo::PHJ;
  throw SpecInvalid("--algo must be smj or phj");
}

JoinPattern parse_pattern(const std::string& s) {
  if (s == "gfur") return JoinPattern::GFUR;
  if (s == "gftr") return JoinPattern::GFTR;
  throw SpecInvalid("--pattern must be gfur or gftr");
}

// flag wins over COLJOIN_WORKERS; the env only replaces the default
unsigned resolve_workers(const CommonOpts& o) {
  if (o.workers_from_flag) return o.workers;
  if (const char* env = std::getenv("COLJOIN_WORKERS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw SpecInvalid("COLJOIN_WORKERS is not a number");
    }
  }
  return o.workers;
}

JoinOptions join_options(const CommonOpts& o) {
  JoinOptions opt;
  opt.worker_count = resolve_workers(o);
  opt.seed = o.seed;
  opt.total_radix_bits = o.radix_bits;
  opt.sub_partition_limit = o.sub_limit;
  opt.preallocate = o.prealloc;
  return opt;
}

class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw SpecInvalid("cannot open output file " + path);
    }
    stream() << bio::csv_header() << "\n";
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void add(const bio::BenchRow& row) { bio::write_csv_row(stream(), row); }

 private:
  std::ofstream file_;
};

bio::BenchRow base_row(const CommonOpts& o, const std::string& experiment) {
  bio::BenchRow row;
  row.experiment = experiment;
  row.algo = o.algo;
  row.pattern = o.pattern;
  row.r_rows = o.r_rows;
  row.s_rows = o.s_rows;
  row.r_payloads = o.payloads;
  row.s_payloads = o.payloads;
  row.key_bytes = o.key_bytes;
  row.payload_bytes = o.payload_bytes;
  row.match_ratio = o.match;
  row.zipf = o.zipf;
  row.workers = resolve_workers(o);
  row.seed = o.seed;
  return row;
}

void fill_measurements(bio::BenchRow& row, const JoinOutput& out) {
  row.transform_ns = out.report.transform_ns;
  row.find_ns = out.report.find_ns;
  row.materialize_ns = out.report.materialize_ns;
  row.total_ns = out.report.total_ns();
  row.peak_transform_b = out.report.peak(JoinPhase::Transform).total_bytes;
  row.peak_find_b = out.report.peak(JoinPhase::FindMatches).total_bytes;
  row.peak_materialize_b = out.report.peak(JoinPhase::Materialize).total_bytes;
  row.clusteredness_s = out.stats.clusteredness_s;
  row.clusteredness_r = out.stats.clusteredness_r;
  bio::finalize_throughput(row);
}

// ---------------------------------------------------------------- join ---
int cmd_join(const CommonOpts& o, const std::string& in_r, const std::string& in_s) {
  Relation r, s;
  if (!in_r.empty() || !in_s.empty()) {
    if (in_r.empty() || in_s.empty())
      throw SpecInvalid("--in-r and --in-s must both be given");
    r = wl::import_relation(in_r);
    s = wl::import_relation(in_s);
  } else {
    wl::WorkloadSpec spec;
    spec.r_rows = o.r_rows;
    spec.s_rows = o.s_rows;
    spec.r_payloads = o.payloads;
    spec.s_payloads = o.payloads;
    spec.key_kind = kind_of(o.key_bytes);
    spec.payload_kind = kind_of(o.payload_bytes);
    spec.match_ratio = o.match;
    spec.zipf_factor = o.zipf;
    spec.seed = o.seed;
    std::tie(r, s) = wl::gen_pk_fk(spec);
  }

  JoinTask task;
  task.algorithm = parse_algo(o.algo);
  task.pattern = parse_pattern(o.pattern);
  task.build = &r;
  task.probe = &s;
  task.options = join_options(o);

  CsvSink sink(o.out_path);
  for (unsigned rep = 0; rep < o.reps; ++rep) {
    auto out = run_join(task);
    auto row = base_row(o, "join");
    row.r_rows = r.rows();
    row.s_rows = s.rows();
    row.r_payloads = static_cast<unsigned>(r.payloads.size());
    row.s_payloads = static_cast<unsigned>(s.payloads.size());
    row.rep = rep;
    fill_measurements(row, out);
    sink.add(row);
  }
  return 0;
}

// -------------------------------------------------------------- gather ---
int cmd_gather(CommonOpts o, uint64_t items, const std::string& mode) {
  if (mode != "clustered" && mode != "unclustered")
    throw SpecInvalid("--mode must be clustered or unclustered");
  const unsigned workers = std::max(1u, resolve_workers(o));
  Column in(kind_of(o.payload_bytes), items);
  {
    CounterRng rng(o.seed);
    if (in.kind() == ValueKind::u32) {
      auto v = in.u32();
      for (uint64_t i = 0; i < items; ++i) v[i] = static_cast<uint32_t>(rng.at(i));
    } else {
      auto v = in.u64();
      for (uint64_t i = 0; i < items; ++i) v[i] = rng.at(i);
    }
  }
  std::vector<uint32_t> map(items);
  for (uint64_t i = 0; i < items; ++i) map[i] = static_cast<uint32_t>(i);
  if (mode == "unclustered") {
    CounterRng rng(o.seed + 1);
    for (uint64_t i = items; i > 1; --i)
      std::swap(map[i - 1], map[rng.below(i, i)]);
  }

  CsvSink sink(o.out_path);
  Column out_col(in.kind(), items);
  for (unsigned rep = 0; rep < o.reps; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    primitives::gather(in, map, out_col, workers);
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    auto row = base_row(o, "gather-" + mode);
    row.algo = "-";
    row.pattern = "-";
    row.r_rows = items;
    row.s_rows = 0;
    row.r_payloads = row.s_payloads = 0;
    row.rep = rep;
    row.materialize_ns = static_cast<uint64_t>(ns);
    row.total_ns = row.materialize_ns;
    row.clusteredness_s = primitives::gather_clusteredness(map);
    row.clusteredness_r = row.clusteredness_s;
    bio::finalize_throughput(row);
    sink.add(row);
  }
  return 0;
}

// ------------------------------------------------------------ sequence ---
int cmd_sequence(const CommonOpts& o, unsigned joins, uint64_t fact_rows,
                 uint64_t dim_rows) {
  wl::StarSchemaSpec spec;
  spec.fact_rows = fact_rows;
  spec.dims = joins;
  spec.dim_rows = dim_rows;
  spec.seed = o.seed;
  spec.key_kind = kind_of(o.key_bytes);
  spec.payload_kind = kind_of(o.payload_bytes);
  auto star = wl::gen_star(spec);

  CsvSink sink(o.out_path);
  for (unsigned rep = 0; rep < o.reps; ++rep) {
    auto steps = run_join_sequence(star.fact, star.dims, parse_algo(o.algo),
                                   parse_pattern(o.pattern), join_options(o));
    for (size_t i = 0; i < steps.size(); ++i) {
      auto row = base_row(o, "sequence-" + std::to_string(i + 1));
      row.r_rows = dim_rows;
      row.s_rows = fact_rows;
      row.r_payloads = 1;
      row.s_payloads = static_cast<unsigned>(i + 1);  // ID + carried payloads
      row.rep = rep;
      row.transform_ns = steps[i].report.transform_ns;
      row.find_ns = steps[i].report.find_ns;
      row.materialize_ns = steps[i].report.materialize_ns;
      row.total_ns = steps[i].report.total_ns();
      row.peak_transform_b = steps[i].report.peak(JoinPhase::Transform).total_bytes;
      row.peak_find_b = steps[i].report.peak(JoinPhase::FindMatches).total_bytes;
      row.peak_materialize_b = steps[i].report.peak(JoinPhase::Materialize).total_bytes;
      bio::finalize_throughput(row);
      sink.add(row);
    }
  }
  return 0;
}

// ---------------------------------------------------------- primitives ---
int cmd_primitives(const CommonOpts& o, uint64_t items) {
  const unsigned workers = std::max(1u, resolve_workers(o));
  CounterRng rng(o.seed);
  std::vector<uint32_t> keys_v(items), vals_v(items);
  for (uint64_t i = 0; i < items; ++i) {
    keys_v[i] = static_cast<uint32_t>(rng.at(i));
    vals_v[i] = static_cast<uint32_t>(i);
  }
  Column keys = Column::of_u32(keys_v);
  Column vals = Column::of_u32(vals_v);

  auto time_ms = [](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  std::cout << "op,serial_reference_ms,omp_workers" << workers << "_ms,speedup\n";
  {
    Column ko, vo;
    const double omp_ms =
        time_ms([&] { primitives::radix_partition(keys, vals, ko, vo, 0, 8, workers); });
    const double ref_ms =
        time_ms([&] { reference::stable_partition_pairs(keys, vals, 0, 8); });
    std::printf("radix_partition,%.3f,%.3f,%.2f\n", ref_ms, omp_ms, ref_ms / omp_ms);
  }
  {
    Column ko, vo;
    const double omp_ms = time_ms([&] { primitives::sort_pairs(keys, vals, ko, vo, workers); });
    const double ref_ms = time_ms([&] { reference::stable_sort_pairs(keys, vals); });
    std::printf("sort_pairs,%.3f,%.3f,%.2f\n", ref_ms, omp_ms, ref_ms / omp_ms);
  }
  {
    std::vector<uint32_t> map(items);
    CounterRng mrng(o.seed + 9);
    for (uint64_t i = 0; i < items; ++i) map[i] = static_cast<uint32_t>(mrng.below(i, items));
    Column out_col(keys.kind(), items);
    const double omp_ms = time_ms([&] { primitives::gather(keys, map, out_col, workers); });
    const double ref_ms = time_ms([&] { reference::gather(keys, map); });
    std::printf("gather,%.3f,%.3f,%.2f\n", ref_ms, omp_ms, ref_ms / omp_ms);
  }
  return 0;
}

// -------------------------------------------------------------- verify ---
struct VerifyFailure {
  std::string what;
  uint64_t seed = 0;
  std::string spec;
};

int cmd_verify(const CommonOpts& o, const std::vector<std::string>& tpc,
               double scale, bool inject_fault) {
  const JoinAlgo algos[] = {JoinAlgo::SMJ, JoinAlgo::PHJ};
  const JoinPattern patterns[] = {JoinPattern::GFUR, JoinPattern::GFTR};
  size_t cells = 0;

  auto fail = [&](const VerifyFailure& f) {
    std::cerr << "verify: FAILED: " << f.what << "\n  seed: " << f.seed
              << "\n  spec: " << f.spec << "\n";
    return 1;
  };

  auto run_one = [&](const Relation& r, const Relation& s, JoinAlgo a, JoinPattern p) {
    JoinTask task;
    task.algorithm = a;
    task.pattern = p;
    task.build = &r;
    task.probe = &s;
    task.options = join_options(o);
    task.options.validate = true;
    return run_join(task);
  };

  if (!tpc.empty()) {
    for (const auto& id : tpc) {
      auto shape = wl::parse_tpc_shape(id);
      auto [r, s] = wl::gen_tpc_shape(shape, scale, kind_of(o.key_bytes),
                                      kind_of(o.payload_bytes), o.seed);
      auto first = run_one(r, s, JoinAlgo::SMJ, JoinPattern::GFUR);
      auto base = oracle::canonical_rows(first.relation);
      for (auto a : algos) {
        for (auto p : patterns) {
          if (a == JoinAlgo::SMJ && p == JoinPattern::GFUR) continue;
          auto out = run_one(r, s, a, p);
          if (oracle::canonical_rows(out.relation) != base) {
            return fail({std::string("variants disagree on ") + id, o.seed,
                         "tpc shape " + id + " scale " + std::to_string(scale)});
          }
        }
      }
      std::cout << "verify: " << id << " ok (" << first.relation.rows()
                << " rows, 4 variants agree)\n";
      ++cells;
    }
    std::cout << "verify: " << cells << " shape checks passed\n";
    return 0;
  }

  // stability: parallel kernels against the serial references on
  // duplicate-heavy inputs
  for (uint64_t case_id = 0; case_id < 500; ++case_id) {
    CounterRng rng(o.seed * 7919 + case_id);
    const size_t n = 2 + rng.below(0, 300);
    std::vector<uint32_t> keys(n);
    for (size_t i = 0; i < n; ++i)
      keys[i] = static_cast<uint32_t>(rng.below(i + 1, 11));
    Column kc = Column::of_u32(keys);
    Column tags = iota_u32(n);
    const unsigned workers = 1 + case_id % 8;
    Column pk, pv, sk, sv;
    primitives::radix_partition(kc, tags, pk, pv, 0, 3, workers);
    auto [rk, rv] = reference::stable_partition_pairs(kc, tags, 0, 3);
    if (!(pk == rk && pv == rv))
      return fail({"radix_partition lost stability", o.seed * 7919 + case_id,
                   "duplicate-heavy partition case"});
    primitives::sort_pairs(kc, tags, sk, sv, workers);
    auto [ek, ev] = reference::stable_sort_pairs(kc, tags);
    if (!(sk == ek && sv == ev))
      return fail({"sort_pairs lost stability", o.seed * 7919 + case_id,
                   "duplicate-heavy sort case"});
  }

  for (uint64_t rows : {1024ull, 16384ull, 131072ull}) {
    for (double match : {0.0, 0.25, 0.5, 1.0}) {
      for (double zipf : {0.0, 1.0, 2.0}) {
        for (unsigned kb : {4u, 8u}) {
          wl::WorkloadSpec spec;
          spec.r_rows = rows;
          spec.s_rows = 2 * rows;
          spec.r_payloads = 2;
          spec.s_payloads = 1;
          spec.key_kind = kind_of(kb);
          spec.payload_kind = kind_of(kb);
          spec.match_ratio = match;
          spec.zipf_factor = zipf;
          spec.seed = o.seed + cells;
          auto [r, s] = wl::gen_pk_fk(spec);
          std::ostringstream desc;
          desc << "rows=" << rows << " match=" << match << " zipf=" << zipf
               << " key_bytes=" << kb;

          // oracle equivalence where the quadratic oracle is affordable;
          // cross-variant agreement above that
          std::vector<uint64_t> base;
          bool have_oracle = rows <= 16384;
          if (have_oracle) base = oracle::canonical_rows(oracle::nested_loop_join(r, s));
          bool first = true;
          std::vector<uint64_t> first_rows;
          for (auto a : algos) {
            for (auto p : patterns) {
              auto out = run_one(r, s, a, p);
              if (inject_fault && rows == 1024 && match == 1.0 && zipf == 0.0 &&
                  kb == 4 && a == JoinAlgo::PHJ && p == JoinPattern::GFTR &&
                  out.relation.rows() > 0) {
                out.relation.key.set(0, out.relation.key.at(0) ^ 1);  // self-test
              }
              auto canon = oracle::canonical_rows(out.relation);
              if (have_oracle && canon != base)
                return fail({std::string(variant_name(a, p)) + " diverges from oracle",
                             spec.seed, desc.str()});
              if (first) {
                first_rows = std::move(canon);
                first = false;
              } else if (canon != first_rows) {
                return fail({std::string(variant_name(a, p)) + " disagrees with first variant",
                             spec.seed, desc.str()});
              }

              // determinism spot check
              auto again = run_one(r, s, a, p);
              if (oracle::canonical_rows(again.relation) != first_rows)
                return fail({"nondeterministic rerun", spec.seed, desc.str()});

              // ledger sanity on the |R|=|S| shape is covered by acceptance;
              // here every run must keep total == sum of phases
              if (out.report.total_ns() != out.report.transform_ns + out.report.find_ns +
                                               out.report.materialize_ns)
                return fail({"phase times do not sum", spec.seed, desc.str()});
            }
          }

          // clusteredness direction between the hash patterns
          auto om = run_one(r, s, JoinAlgo::PHJ, JoinPattern::GFTR);
          auto um = run_one(r, s, JoinAlgo::PHJ, JoinPattern::GFUR);
          if (om.stats.clusteredness_s > um.stats.clusteredness_s)
            return fail({"PHJ-OM probe map less clustered than PHJ-UM", spec.seed,
                         desc.str()});
          ++cells;
        }
      }
    }
  }
  std::cout << "verify: 500 stability cases and " << cells << " grid cells passed\n";
  return 0;
}

// -------------------------------------------------------------- report ---
int cmd_report(const std::string& csv_path, const std::string& out_path) {
  std::vector<bio::BenchRow> rows;
  if (csv_path == "-") {
    rows = bio::read_csv(std::cin);
  } else {
    std::ifstream in(csv_path);
    if (!in) throw SchemaError("cannot open " + csv_path);
    rows = bio::read_csv(in);
  }
  const std::string md = bio::render_report(rows);
  if (out_path.empty()) {
    std::cout << md;
  } else {
    std::ofstream out(out_path);
    out << md;
  }
  return 0;
}

// ----------------------------------------------------------------- gen ---
int cmd_gen(const CommonOpts& o, const std::string& shape, const std::string& out_dir,
            double scale, unsigned star_joins) {
  if (out_dir.empty()) throw SpecInvalid("--out-dir is required");
  const std::filesystem::path dir(out_dir);
  if (shape == "pkfk") {
    wl::WorkloadSpec spec;
    spec.r_rows = o.r_rows;
    spec.s_rows = o.s_rows;
    spec.r_payloads = o.payloads;
    spec.s_payloads = o.payloads;
    spec.key_kind = kind_of(o.key_bytes);
    spec.payload_kind = kind_of(o.payload_bytes);
    spec.match_ratio = o.match;
    spec.zipf_factor = o.zipf;
    spec.seed = o.seed;
    auto [r, s] = wl::gen_pk_fk(spec);
    wl::export_relation(r, dir / "R");
    wl::export_relation(s, dir / "S");
  } else if (shape == "star") {
    wl::StarSchemaSpec spec;
    spec.fact_rows = o.r_rows;
    spec.dims = star_joins;
    spec.dim_rows = o.s_rows;
    spec.seed = o.seed;
    auto star = wl::gen_star(spec);
    wl::export_relation(star.fact, dir / "fact");
    for (size_t d = 0; d < star.dims.size(); ++d)
      wl::export_relation(star.dims[d], dir / star.dims[d].name);
  } else {
    auto id = wl::parse_tpc_shape(shape);
    auto [r, s] = wl::gen_tpc_shape(id, scale, kind_of(o.key_bytes),
                                    kind_of(o.payload_bytes), o.seed);
    wl::export_relation(r, dir / "R");
    wl::export_relation(s, dir / "S");
  }
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

// ------------------------------------------------------------ selector ---
int cmd_selector(bool dump, const CommonOpts& o, bool narrow, bool smj_only) {
  namespace sel = coljoin::selector;
  if (dump) {
    std::cout << sel::rules_text();
    return 0;
  }
  sel::WorkloadFeatures f;
  f.is_narrow = narrow || o.payloads <= 1;
  f.match_ratio = o.match;
  f.zipf_factor = o.zipf;
  f.key_bytes = o.key_bytes;
  f.payload_bytes = o.payload_bytes;
  f.r_payload_cols = o.payloads;
  f.s_payload_cols = o.payloads;
  const auto choice = smj_only ? sel::choose_smj_only(f) : sel::choose(f);
  std::cout << variant_name(choice.algorithm, choice.pattern) << "\n";
  return 0;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--r-rows", o.r_rows, "build-side rows");
  cmd->add_option("--s-rows", o.s_rows, "probe-side rows");
  cmd->add_option("--payloads", o.payloads, "payload columns per side");
  cmd->add_option("--match", o.match, "match ratio in [0,1]");
  cmd->add_option("--zipf", o.zipf, "zipf factor for foreign keys");
  cmd->add_option("--key-bytes", o.key_bytes, "key width (4 or 8)");
  cmd->add_option("--payload-bytes", o.payload_bytes, "payload width (4 or 8)");
  auto* w = cmd->add_option("--workers", o.workers, "worker count (0 = hw default)");
  w->each([&o](const std::string&) { o.workers_from_flag = true; });
  cmd->add_option("--seed", o.seed, "workload seed");
  cmd->add_option("--reps", o.reps, "repetitions per cell");
  cmd->add_option("--radix-bits", o.radix_bits, "total partition bits (-1 = auto)");
  cmd->add_option("--sub-limit", o.sub_limit, "build rows per work unit");
  cmd->add_flag("--prealloc", o.prealloc, "pre-allocate size-known buffers");
  cmd->add_option("--out", o.out_path, "CSV output file (default stdout)");
  cmd->add_option("--algo", o.algo, "smj or phj");
  cmd->add_option("--pattern", o.pattern, "gfur or gftr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"columnar equi-join microbenchmark harness"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* join = app.add_subcommand("join", "run one join workload cell");
  add_common(join, o);
  std::string in_r, in_s;
  join->add_option("--in-r", in_r, "import build relation from a manifest dir");
  join->add_option("--in-s", in_s, "import probe relation from a manifest dir");

  auto* gather = app.add_subcommand("gather", "time clustered vs unclustered gathers");
  add_common(gather, o);
  uint64_t items = 1 << 24;
  std::string mode = "unclustered";
  gather->add_option("--items", items, "elements to gather");
  gather->add_option("--mode", mode, "clustered or unclustered");

  auto* sequence = app.add_subcommand("sequence", "chained star-schema joins");
  add_common(sequence, o);
  unsigned joins = 4;
  uint64_t fact_rows = 1 << 20, dim_rows = 1 << 18;
  sequence->add_option("--joins", joins, "number of chained joins");
  sequence->add_option("--fact-rows", fact_rows, "fact table rows");
  sequence->add_option("--dim-rows", dim_rows, "rows per dimension table");

  auto* prims = app.add_subcommand("primitives",
                                   "compare OpenMP kernels against the serial reference");
  add_common(prims, o);
  uint64_t prim_items = 1 << 22;
  prims->add_option("--items", prim_items, "elements per primitive");

  auto* verify = app.add_subcommand("verify", "correctness suites over a seeded grid");
  add_common(verify, o);
  std::vector<std::string> tpc;
  double scale = 1.0 / 128.0;
  bool inject_fault = false;
  verify->add_option("--tpc", tpc, "join shapes to cross-check (J1..J5)");
  verify->add_option("--scale", scale, "shape scale factor");
  verify->add_flag("--inject-fault", inject_fault,
                   "flip one output byte to prove the checker notices");

  auto* report = app.add_subcommand("report", "render a bench CSV as markdown");
  std::string csv_path, report_out;
  report->add_option("csv", csv_path, "input CSV path or - for stdin")->required();
  report->add_option("--out", report_out, "markdown output file");

  auto* gen = app.add_subcommand("gen", "write relations as manifest + raw columns");
  add_common(gen, o);
  std::string gen_shape = "pkfk", out_dir;
  unsigned star_joins = 4;
  gen->add_option("--shape", gen_shape, "pkfk, star, or J1..J5");
  gen->add_option("--out-dir", out_dir, "output directory");
  gen->add_option("--star-joins", star_joins, "dimensions for --shape star");
  gen->add_option("--scale", scale, "scale for J1..J5 shapes");

  auto* selector = app.add_subcommand("selector", "variant recommendation / rule dump");
  add_common(selector, o);
  bool dump = false, narrow = false, smj_only = false;
  selector->add_flag("--dump", dump, "print the decision rules");
  selector->add_flag("--narrow", narrow, "treat the workload as narrow");
  selector->add_flag("--smj-only", smj_only, "restrict to sort-merge variants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (join->parsed()) return cmd_join(o, in_r, in_s);
    if (gather->parsed()) return cmd_gather(o, items, mode);
    if (sequence->parsed()) return cmd_sequence(o, joins, fact_rows, dim_rows);
    if (prims->parsed()) return cmd_primitives(o, prim_items);
    if (verify->parsed()) return cmd_verify(o, tpc, scale, inject_fault);
    if (report->parsed()) return cmd_report(csv_path, report_out);
    if (gen->parsed()) return cmd_gen(o, gen_shape, out_dir, scale, star_joins);
    if (selector->parsed()) return cmd_selector(dump, o, narrow, smj_only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
