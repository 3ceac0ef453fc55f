#include "coljoin/join_engine.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

#include "coljoin/hash_match.hpp"
#include "coljoin/merge_match.hpp"

namespace coljoin {

namespace {

inline int thread_request(unsigned workers) {
  return static_cast<int>(std::clamp(workers, 1u, 64u));
}

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const int hw = omp_get_max_threads();
  return hw > 0 ? static_cast<unsigned>(hw) : 1;
}

void fill_iota(Column& c, unsigned workers) {
  auto v = c.u32();
  const size_t n = v.size();
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
  for (unsigned w = 0; w < workers; ++w) {
    const size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    for (size_t i = lo; i < hi; ++i) v[i] = static_cast<uint32_t>(i);
  }
}

// ids[i] <- lookup[ids[i]]; in place, turns virtual positions into the
// physical ids carried through the transform.
void resolve_ids(std::span<uint32_t> ids, std::span<const uint32_t> lookup,
                 unsigned workers) {
  const size_t n = ids.size();
#pragma omp parallel for schedule(static) num_threads(thread_request(workers))
  for (unsigned w = 0; w < workers; ++w) {
    const size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    for (size_t i = lo; i < hi; ++i) ids[i] = lookup[ids[i]];
  }
}

double map_clusteredness(std::span<const uint32_t> ids) {
  if (ids.size() <= 1) return 1.0;
  return primitives::gather_clusteredness(ids);
}

struct TransformedSide {
  WorkColumn keys;
  WorkColumn carried;  // GFUR: physical ids; GFTR: first payload
  bool has_carried = false;
  primitives::PartitionLayout layout;  // PHJ
  ScopedAlloc layout_acc;
};

struct EnginePlan {
  unsigned workers = 1;
  unsigned total_bits = 0;
  unsigned bits_per_pass = 8;
  bool pk_fk = false;
  bool validate = false;
};

TransformedSide transform_side(const Relation& rel, JoinAlgo algo,
                               JoinPattern pattern, const EnginePlan& plan,
                               Workspace ws) {
  const size_t n = rel.rows();
  TransformedSide side;
  side.keys = WorkColumn(ws, rel.key.kind(), n, AllocClass::ColumnData);

  if (pattern == JoinPattern::GFUR) {
    WorkColumn ids(ws, ValueKind::u32, n, AllocClass::ColumnData);
    fill_iota(ids.col(), plan.workers);
    side.carried = WorkColumn(ws, ValueKind::u32, n, AllocClass::ColumnData);
    side.has_carried = true;
    if (algo == JoinAlgo::SMJ) {
      primitives::sort_pairs(rel.key, ids.col(), side.keys.col(),
                             side.carried.col(), plan.workers, ws);
    } else {
      side.layout = hashjoin::partition_relation(
          rel.key, ids.col(), side.keys.col(), side.carried.col(),
          plan.total_bits, plan.bits_per_pass, plan.workers, ws);
    }
  } else if (!rel.payloads.empty()) {
    side.carried = WorkColumn(ws, rel.payloads[0].kind(), n, AllocClass::ColumnData);
    side.has_carried = true;
    if (algo == JoinAlgo::SMJ) {
      primitives::sort_pairs(rel.key, rel.payloads[0], side.keys.col(),
                             side.carried.col(), plan.workers, ws);
    } else {
      side.layout = hashjoin::partition_relation(
          rel.key, rel.payloads[0], side.keys.col(), side.carried.col(),
          plan.total_bits, plan.bits_per_pass, plan.workers, ws);
    }
  } else {
    if (algo == JoinAlgo::SMJ) {
      primitives::sort_keys(rel.key, side.keys.col(), plan.workers, ws);
    } else {
      side.layout = hashjoin::partition_relation_keys(
          rel.key, side.keys.col(), plan.total_bits, plan.bits_per_pass,
          plan.workers, ws);
    }
  }
  if (algo == JoinAlgo::PHJ) {
    side.layout_acc = ScopedAlloc(ws.ledger, side.layout.offsets.size() * 8,
                                  AllocClass::Scratch);
  }
  return side;
}

Relation make_output_shell(uint64_t rows, const Relation& r, const Relation& s) {
  Relation out;
  out.name = r.name.empty() && s.name.empty() ? "join" : r.name + "_" + s.name;
  out.key = Column(r.key.kind(), rows);
  out.payloads.reserve(r.payloads.size() + s.payloads.size());
  for (const auto& p : r.payloads) out.payloads.emplace_back(p.kind(), rows);
  for (const auto& p : s.payloads) out.payloads.emplace_back(p.kind(), rows);
  return out;
}

// Size-known buffers grabbed before the timed phases; match-count-sized
// buffers (ids, output) still allocate inside the phases.
void prefill_pool(BufferPool& pool, const JoinTask& task, const EnginePlan& plan,
                  MemLedger& ledger, std::vector<ScopedAlloc>& holds) {
  (void)plan;
  auto add = [&](ValueKind kind, size_t n) {
    Column c(kind, n);
    holds.emplace_back(&ledger, c.byte_size(), AllocClass::Scratch);
    pool.put(std::move(c));
  };
  for (const Relation* rel : {task.build, task.probe}) {
    const size_t n = rel->rows();
    const ValueKind kk = rel->key.kind();
    add(kk, n);  // transformed keys
    add(kk, n);  // key ping-pong
    if (task.pattern == JoinPattern::GFUR) {
      add(ValueKind::u32, n);  // iota ids
      add(ValueKind::u32, n);  // carried ids
      add(ValueKind::u32, n);  // id ping-pong
    } else if (!rel->payloads.empty()) {
      // on-demand transforms recycle these through the pool
      add(rel->payloads[0].kind(), n);
      add(rel->payloads[0].kind(), n);
    }
  }
}

}  // namespace

Relation make_join_output_shell(const MatchSet& match, const Relation& r,
                                const Relation& s) {
  Relation out = make_output_shell(match.size(), r, s);
  out.key = match.keys;
  return out;
}

void materialize_gfur(std::span<const uint32_t> ids_r,
                      std::span<const uint32_t> ids_s, const Relation& r,
                      const Relation& s, Relation& out, unsigned workers) {
  for (size_t c = 0; c < r.payloads.size(); ++c)
    primitives::gather(r.payloads[c], ids_r, out.payloads[c], workers);
  for (size_t c = 0; c < s.payloads.size(); ++c)
    primitives::gather(s.payloads[c], ids_s, out.payloads[r.payloads.size() + c],
                       workers);
}

void materialize_gfur(const MatchSet& match, const Relation& r,
                      const Relation& s, Relation& out, unsigned workers) {
  if (match.id_semantics != TupleIdSemantics::Physical)
    throw SpecInvalid("gfur materialization needs physical tuple ids");
  materialize_gfur(match.ids_r, match.ids_s, r, s, out, workers);
}

namespace {

void gftr_side_remaining(const Relation& rel, std::span<const uint32_t> ids,
                         size_t out_base, const GftrContext& ctx,
                         const primitives::PartitionLayout* key_layout,
                         Relation& out) {
  const size_t n = rel.rows();
  for (size_t c = 1; c < rel.payloads.size(); ++c) {
    WorkColumn tk(ctx.ws, rel.key.kind(), n, AllocClass::ColumnData);
    WorkColumn tp(ctx.ws, rel.payloads[c].kind(), n, AllocClass::ColumnData);
    if (ctx.algorithm == JoinAlgo::SMJ) {
      primitives::sort_pairs(rel.key, rel.payloads[c], tk.col(), tp.col(),
                             ctx.workers, ctx.ws);
      if (ctx.validate) {
        bool sorted = true;
        visit_kind(tk.col().kind(), [&](auto tag) {
          using K = decltype(tag);
          auto v = values<K>(tk.col());
          for (size_t i = 1; i < v.size(); ++i)
            if (v[i - 1] > v[i]) sorted = false;
        });
        if (!sorted)
          throw TransformMismatch("payload transform disagrees with key sort");
      }
    } else {
      auto lay = hashjoin::partition_relation(rel.key, rel.payloads[c], tk.col(),
                                              tp.col(), ctx.total_bits,
                                              ctx.bits_per_pass, ctx.workers, ctx.ws);
      if (key_layout != nullptr && lay.offsets != key_layout->offsets)
        throw TransformMismatch("payload partition disagrees with key layout");
    }
    tk.release();
    primitives::gather(tp.col(), ids, out.payloads[out_base + c], ctx.workers);
    tp.release();
  }
}

}  // namespace

void materialize_gftr(std::span<const uint32_t> ids_r,
                      std::span<const uint32_t> ids_s, const Relation& r,
                      const Relation& s, WorkColumn first_r, WorkColumn first_s,
                      const GftrContext& ctx, Relation& out) {
  // both already-transformed first payloads go first and are freed before
  // any on-demand transform allocates
  if (!r.payloads.empty()) {
    primitives::gather(first_r.col(), ids_r, out.payloads[0], ctx.workers);
    first_r.release();
  }
  if (!s.payloads.empty()) {
    primitives::gather(first_s.col(), ids_s, out.payloads[r.payloads.size()],
                       ctx.workers);
    first_s.release();
  }
  gftr_side_remaining(r, ids_r, 0, ctx, ctx.layout_r, out);
  gftr_side_remaining(s, ids_s, r.payloads.size(), ctx, ctx.layout_s, out);
}

void materialize_gftr(const MatchSet& match, const Relation& r,
                      const Relation& s, Column transformed_first_r,
                      Column transformed_first_s, const GftrContext& ctx,
                      Relation& out) {
  if (match.id_semantics != TupleIdSemantics::Virtual)
    throw SpecInvalid("gftr materialization needs virtual tuple ids");
  WorkColumn fr, fs;
  if (!r.payloads.empty()) {
    fr = WorkColumn(ctx.ws, transformed_first_r.kind(), 0, AllocClass::ColumnData);
    fr.col() = std::move(transformed_first_r);
  }
  if (!s.payloads.empty()) {
    fs = WorkColumn(ctx.ws, transformed_first_s.kind(), 0, AllocClass::ColumnData);
    fs.col() = std::move(transformed_first_s);
  }
  materialize_gftr(match.ids_r, match.ids_s, r, s, std::move(fr), std::move(fs),
                   ctx, out);
}

JoinOutput run_join(const JoinTask& task) {
  if (task.build == nullptr || task.probe == nullptr)
    throw SpecInvalid("join task needs both input relations");
  const Relation& r = *task.build;
  const Relation& s = *task.probe;
  if (r.key.kind() != s.key.kind())
    throw KindError("build and probe key kinds differ");
  if (task.options.radix_bits_per_pass == 0 || task.options.radix_bits_per_pass > 8)
    throw FanoutTooLarge("radix bits per pass must be in [1, 8]");

  EnginePlan plan;
  plan.workers = resolve_workers(task.options.worker_count);
  plan.bits_per_pass = task.options.radix_bits_per_pass;
  plan.total_bits = task.options.total_radix_bits >= 0
                        ? static_cast<unsigned>(task.options.total_radix_bits)
                        : default_total_radix_bits(r.rows());
  plan.pk_fk = r.key_unique;
  plan.validate = task.options.validate;

  JoinOutput result;
  MemLedger ledger;
  BufferPool pool;
  Workspace ws{&ledger, task.options.preallocate ? &pool : nullptr};
  std::vector<ScopedAlloc> pool_holds;
  if (task.options.preallocate) prefill_pool(pool, task, plan, ledger, pool_holds);

  TransformedSide tr, ts;
  WorkColumn ids_r, ids_s;

  {
    PhaseScope phase(ledger, result.report, JoinPhase::Transform);
    tr = transform_side(r, task.algorithm, task.pattern, plan, ws);
    ts = transform_side(s, task.algorithm, task.pattern, plan, ws);
  }

  {
    PhaseScope phase(ledger, result.report, JoinPhase::FindMatches);
    uint64_t total = 0;
    if (task.algorithm == JoinAlgo::SMJ) {
      const unsigned parts = std::max(1u, plan.workers * 4);
      auto counts = mergejoin::merge_match_count(tr.keys.col(), ts.keys.col(),
                                                 plan.pk_fk, parts, plan.workers,
                                                 plan.validate);
      total = counts.total();
      result.relation = make_output_shell(total, r, s);
      ids_r = WorkColumn(ws, ValueKind::u32, total, AllocClass::ColumnData);
      ids_s = WorkColumn(ws, ValueKind::u32, total, AllocClass::ColumnData);
      mergejoin::merge_match_fill(tr.keys.col(), ts.keys.col(), counts,
                                  result.relation.key, ids_r.col().u32(),
                                  ids_s.col().u32(), plan.workers);
      if (task.pattern == JoinPattern::GFUR) {
        resolve_ids(ids_r.col().u32(), tr.carried.col().u32(), plan.workers);
        resolve_ids(ids_s.col().u32(), ts.carried.col().u32(), plan.workers);
      }
    } else {
      hashjoin::PartitionedRelationView bv{&tr.keys.col(), &tr.layout,
                                           tr.has_carried ? &tr.carried.col() : nullptr};
      hashjoin::PartitionedRelationView pv{&ts.keys.col(), &ts.layout,
                                           ts.has_carried ? &ts.carried.col() : nullptr};
      auto subplan = hashjoin::plan_subpartitions(bv, pv, task.options.sub_partition_limit);
      auto counts = hashjoin::hash_match_count(bv, pv, subplan, plan.workers);
      total = counts.total();
      result.relation = make_output_shell(total, r, s);
      ids_r = WorkColumn(ws, ValueKind::u32, total, AllocClass::ColumnData);
      ids_s = WorkColumn(ws, ValueKind::u32, total, AllocClass::ColumnData);
      const auto mode = task.pattern == JoinPattern::GFUR
                            ? TupleIdSemantics::Physical
                            : TupleIdSemantics::Virtual;
      hashjoin::hash_match_fill(bv, pv, subplan, counts, mode, result.relation.key,
                                ids_r.col().u32(), ids_s.col().u32(), plan.workers);
    }
    result.stats.matches = total;
    tr.keys.release();
    ts.keys.release();
    if (task.pattern == JoinPattern::GFUR) {
      tr.carried.release();
      ts.carried.release();
    }
  }

  {
    PhaseScope phase(ledger, result.report, JoinPhase::Materialize);
    if (task.pattern == JoinPattern::GFUR) {
      materialize_gfur(ids_r.col().u32(), ids_s.col().u32(), r, s,
                       result.relation, plan.workers);
    } else {
      GftrContext ctx;
      ctx.algorithm = task.algorithm;
      ctx.total_bits = plan.total_bits;
      ctx.bits_per_pass = plan.bits_per_pass;
      ctx.layout_r = &tr.layout;
      ctx.layout_s = &ts.layout;
      ctx.workers = plan.workers;
      ctx.ws = ws;
      ctx.validate = plan.validate;
      materialize_gftr(ids_r.col().u32(), ids_s.col().u32(), r, s,
                       std::move(tr.carried), std::move(ts.carried), ctx,
                       result.relation);
    }
  }

  result.stats.clusteredness_r = map_clusteredness(ids_r.col().u32());
  result.stats.clusteredness_s = map_clusteredness(ids_s.col().u32());
  ids_r.release();
  ids_s.release();
  return result;
}

}  // namespace coljoin
