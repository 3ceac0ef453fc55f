#include "coljoin/sequence.hpp"

#include <chrono>

#include "coljoin/primitives.hpp"

namespace coljoin {

std::vector<SequenceStep> run_join_sequence(const Relation& fact,
                                            const std::vector<Relation>& dims,
                                            JoinAlgo algorithm, JoinPattern pattern,
                                            const JoinOptions& options) {
  const size_t n_joins = dims.size();
  if (fact.payloads.size() < n_joins)
    throw SpecInvalid("fact table needs one FK column per dimension");
  if (fact.key.kind() != ValueKind::u32)
    throw SpecInvalid("fact tuple ids must be a 4-byte column");

  std::vector<SequenceStep> steps;
  steps.reserve(n_joins);

  // probe for join 1: (FK_1, ID)
  Relation probe;
  probe.name = fact.name;
  probe.key = fact.payloads[0];
  probe.payloads.push_back(fact.key);

  const unsigned workers = options.worker_count == 0 ? 1 : options.worker_count;
  for (size_t i = 0; i < n_joins; ++i) {
    JoinTask task;
    task.algorithm = algorithm;
    task.pattern = pattern;
    task.build = &dims[i];
    task.probe = &probe;
    task.options = options;
    JoinOutput out = run_join(task);

    SequenceStep step;
    step.rows = out.relation.rows();
    step.output_columns = static_cast<unsigned>(out.relation.column_count());
    step.report = out.report;

    if (i + 1 < n_joins) {
      // output payloads are build-side first: (P_i, ID, P_1..P_{i-1});
      // the next probe needs (ID, P_1..P_i)
      const size_t dim_pay = dims[i].payloads.size();
      const Column& ids = out.relation.payloads[dim_pay];
      if (ids.kind() != ValueKind::u32)
        throw SpecInvalid("sequence id column must be 4-byte");
      const auto t0 = std::chrono::steady_clock::now();
      Column next_fk = primitives::gather_copy(fact.payloads[i + 1], ids.u32(), workers);
      step.fk_fetch_ns = static_cast<uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(
              std::chrono::steady_clock::now() - t0)
              .count());
      probe = Relation{};
      probe.key = std::move(next_fk);
      for (size_t c = dim_pay; c < out.relation.payloads.size(); ++c)
        probe.payloads.push_back(std::move(out.relation.payloads[c]));
      for (size_t c = 0; c < dim_pay; ++c)
        probe.payloads.push_back(std::move(out.relation.payloads[c]));
      probe.name = fact.name;
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace coljoin
