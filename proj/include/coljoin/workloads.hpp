#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coljoin/column.hpp"
#include "coljoin/rng.hpp"

namespace coljoin::workloads {

struct WorkloadSpec {
  uint64_t r_rows = 0;
  uint64_t s_rows = 0;
  unsigned r_payloads = 1;
  unsigned s_payloads = 1;
  ValueKind key_kind = ValueKind::u32;
  ValueKind payload_kind = ValueKind::u32;
  double match_ratio = 1.0;  // fraction of primary keys kept matchable
  double zipf_factor = 0.0;  // 0 = uniform foreign keys
  uint64_t seed = 0;
};

/// R gets a shuffled dense primary key domain [0, |R|); S draws foreign
/// keys from it (uniform or Zipf over permuted ranks). A (1 - match_ratio)
/// fraction of primary keys is then displaced to values >= |R| that no
/// foreign key can hit. Deterministic in the seed.
std::pair<Relation, Relation> gen_pk_fk(const WorkloadSpec& spec);

/// Inverse-CDF sampler over P(rank k) proportional to (k+1)^-factor.
/// Draw i is a pure function of (spec, seed, i).
class ZipfSampler {
 public:
  ZipfSampler(uint64_t n_distinct, double factor, uint64_t seed);
  uint64_t operator()(uint64_t i) const;  // rank of draw i
  double pmf(uint64_t rank) const;
  uint64_t n() const { return n_; }

 private:
  uint64_t n_;
  double factor_;
  CounterRng rng_;
  std::vector<double> cdf_;  // empty for factor 0 (uniform shortcut)
};

struct StarSchemaSpec {
  uint64_t fact_rows = 0;
  unsigned dims = 1;  // N foreign keys / dimension tables
  uint64_t dim_rows = 0;
  uint64_t seed = 0;
  ValueKind key_kind = ValueKind::u32;
  ValueKind payload_kind = ValueKind::u32;
};

struct StarSchema {
  Relation fact;                // key = tuple ids, payloads = FK_1..FK_N
  std::vector<Relation> dims;   // shuffled dense PK + one payload each
};

StarSchema gen_star(const StarSchemaSpec& spec);

/// Join shapes mirroring the benchmark queries: row counts, output
/// cardinality and payload layout scale with `scale`.
enum class TpcShape { J1, J2, J3, J4, J5 };

TpcShape parse_tpc_shape(const std::string& id);  // "J1".."J5"
const char* tpc_shape_name(TpcShape shape);

struct TpcShapeInfo {
  uint64_t r_rows = 0;
  uint64_t s_rows = 0;
  uint64_t out_rows = 0;  // target join cardinality
  unsigned r_key_attrs = 0, r_nonkey_attrs = 0;
  unsigned s_key_attrs = 0, s_nonkey_attrs = 0;
  bool self_join = false;
};

TpcShapeInfo tpc_shape_info(TpcShape shape, double scale);

/// Key-attribute payload columns take key_kind, non-key ones payload_kind.
std::pair<Relation, Relation> gen_tpc_shape(TpcShape shape, double scale,
                                            ValueKind key_kind,
                                            ValueKind payload_kind,
                                            uint64_t seed);

}  // namespace coljoin::workloads
