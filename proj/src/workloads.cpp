#include "coljoin/workloads.hpp"

#include <algorithm>
#include <cmath>

namespace coljoin::workloads {

namespace {

constexpr uint64_t kTagRKeys = 0x52000001;
constexpr uint64_t kTagSKeys = 0x53000001;

Column random_column(ValueKind kind, uint64_t n, const CounterRng& rng) {
  Column c(kind, n);
  if (kind == ValueKind::u32) {
    auto v = c.u32();
    for (uint64_t i = 0; i < n; ++i) v[i] = static_cast<uint32_t>(rng.at(i));
  } else {
    auto v = c.u64();
    for (uint64_t i = 0; i < n; ++i) v[i] = rng.at(i);
  }
  return c;
}

// Fisher-Yates over [0, n); deterministic in rng.
std::vector<uint32_t> permutation(uint64_t n, const CounterRng& rng) {
  std::vector<uint32_t> p(n);
  for (uint64_t i = 0; i < n; ++i) p[i] = static_cast<uint32_t>(i);
  for (uint64_t i = n; i > 1; --i) {
    const uint64_t j = rng.below(i, i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

Column keys_from(const std::vector<uint32_t>& vals, ValueKind kind) {
  Column c(kind, vals.size());
  if (kind == ValueKind::u32) {
    std::copy(vals.begin(), vals.end(), c.u32().begin());
  } else {
    std::copy(vals.begin(), vals.end(), c.u64().begin());
  }
  return c;
}

void check_spec(const WorkloadSpec& spec) {
  if (spec.match_ratio < 0.0 || spec.match_ratio > 1.0)
    throw SpecInvalid("match ratio must lie in [0, 1]");
  if (spec.zipf_factor < 0.0) throw SpecInvalid("zipf factor must be >= 0");
  if (spec.r_rows > kMaxRows || spec.s_rows > kMaxRows)
    throw SpecInvalid("row count exceeds the 2^31-1 cap");
}

}  // namespace

ZipfSampler::ZipfSampler(uint64_t n_distinct, double factor, uint64_t seed)
    : n_(n_distinct), factor_(factor), rng_(CounterRng(seed).stream(0x5a1bf001)) {
  if (n_ == 0) throw SpecInvalid("zipf sampler needs at least one value");
  if (factor_ < 0.0) throw SpecInvalid("zipf factor must be >= 0");
  if (factor_ > 0.0) {
    cdf_.resize(n_);
    double acc = 0.0;
    for (uint64_t k = 0; k < n_; ++k) {
      acc += std::pow(static_cast<double>(k + 1), -factor_);
      cdf_[k] = acc;
    }
    const double norm = 1.0 / acc;
    for (auto& v : cdf_) v *= norm;
    cdf_.back() = 1.0;
  }
}

uint64_t ZipfSampler::operator()(uint64_t i) const {
  const double u = rng_.u01(i);
  if (cdf_.empty()) {
    const uint64_t r = static_cast<uint64_t>(u * static_cast<double>(n_));
    return r >= n_ ? n_ - 1 : r;
  }
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return it == cdf_.end() ? n_ - 1 : static_cast<uint64_t>(it - cdf_.begin());
}

double ZipfSampler::pmf(uint64_t rank) const {
  if (rank >= n_) return 0.0;
  if (cdf_.empty()) return 1.0 / static_cast<double>(n_);
  return cdf_[rank] - (rank == 0 ? 0.0 : cdf_[rank - 1]);
}

std::pair<Relation, Relation> gen_pk_fk(const WorkloadSpec& spec) {
  check_spec(spec);
  const CounterRng master(spec.seed);

  // R: shuffled dense primary keys
  auto perm = permutation(spec.r_rows, master.stream(kTagRKeys));
  Column r_key = keys_from(perm, spec.key_kind);

  // S: foreign keys over [0, |R|), skew mapped through a second permutation
  // so rank never correlates with key magnitude
  Column s_key(spec.key_kind, spec.s_rows);
  if (spec.r_rows > 0 && spec.s_rows > 0) {
    ZipfSampler sampler(spec.r_rows, spec.zipf_factor, spec.seed);
    std::vector<uint32_t> rank_to_key;
    if (spec.zipf_factor > 0.0)
      rank_to_key = permutation(spec.r_rows, master.stream(kTagSKeys));
    for (uint64_t j = 0; j < spec.s_rows; ++j) {
      const uint64_t rank = sampler(j);
      const uint64_t key = rank_to_key.empty() ? rank : rank_to_key[rank];
      s_key.set(j, key);
    }
  }

  // displace non-matching primary keys above the foreign-key domain
  const uint64_t keep = static_cast<uint64_t>(
      std::llround(spec.match_ratio * static_cast<double>(spec.r_rows)));
  if (keep < spec.r_rows) {
    for (uint64_t i = 0; i < spec.r_rows; ++i) {
      const uint64_t v = r_key.at(i);
      if (v >= keep) r_key.set(i, v + spec.r_rows);
    }
  }

  Relation r, s;
  std::vector<Column> r_pay, s_pay;
  for (unsigned c = 0; c < spec.r_payloads; ++c)
    r_pay.push_back(random_column(spec.payload_kind, spec.r_rows,
                                  master.stream(0x7000 + c)));
  for (unsigned c = 0; c < spec.s_payloads; ++c)
    s_pay.push_back(random_column(spec.payload_kind, spec.s_rows,
                                  master.stream(0x8000 + c)));
  r = make_relation(std::move(r_key), std::move(r_pay), "R", /*key_unique=*/true);
  s = make_relation(std::move(s_key), std::move(s_pay), "S", /*key_unique=*/false);
  return {std::move(r), std::move(s)};
}

StarSchema gen_star(const StarSchemaSpec& spec) {
  if (spec.dims < 1) throw SpecInvalid("star schema needs at least one dimension");
  if (spec.dim_rows == 0) throw SpecInvalid("dimension tables cannot be empty");
  const CounterRng master(spec.seed);

  StarSchema star;
  star.fact.name = "fact";
  star.fact.key = iota_u32(spec.fact_rows);  // physical tuple ids
  for (unsigned d = 0; d < spec.dims; ++d) {
    const CounterRng fk_rng = master.stream(0x46b00000 + d);
    Column fk(spec.key_kind, spec.fact_rows);
    for (uint64_t i = 0; i < spec.fact_rows; ++i)
      fk.set(i, fk_rng.below(i, spec.dim_rows));
    star.fact.payloads.push_back(std::move(fk));

    auto perm = permutation(spec.dim_rows, master.stream(0xd1a00000 + d));
    Relation dim;
    dim.key = keys_from(perm, spec.key_kind);
    dim.payloads.push_back(random_column(spec.payload_kind, spec.dim_rows,
                                         master.stream(0xd1a08000 + d)));
    dim.name = "dim" + std::to_string(d + 1);
    dim.key_unique = true;
    star.dims.push_back(std::move(dim));
  }
  return star;
}

TpcShape parse_tpc_shape(const std::string& id) {
  if (id == "J1" || id == "j1") return TpcShape::J1;
  if (id == "J2" || id == "j2") return TpcShape::J2;
  if (id == "J3" || id == "j3") return TpcShape::J3;
  if (id == "J4" || id == "j4") return TpcShape::J4;
  if (id == "J5" || id == "j5") return TpcShape::J5;
  throw UnknownShape("unknown join shape: " + id);
}

const char* tpc_shape_name(TpcShape shape) {
  switch (shape) {
    case TpcShape::J1: return "J1";
    case TpcShape::J2: return "J2";
    case TpcShape::J3: return "J3";
    case TpcShape::J4: return "J4";
    default: return "J5";
  }
}

TpcShapeInfo tpc_shape_info(TpcShape shape, double scale) {
  if (scale <= 0.0 || scale > 1.0) throw SpecInvalid("scale must lie in (0, 1]");
  auto scaled = [&](double base) {
    return static_cast<uint64_t>(std::llround(base * scale));
  };
  TpcShapeInfo info;
  switch (shape) {
    case TpcShape::J1:
      info = {scaled(15e6), scaled(18.2e6), scaled(18.2e6), 1, 3, 0, 1, false};
      break;
    case TpcShape::J2:
      info = {scaled(15e6), scaled(60e6), scaled(60e6), 1, 2, 0, 1, false};
      break;
    case TpcShape::J3:
      info = {scaled(2e6), scaled(2.1e6), scaled(2.1e6), 0, 3, 0, 3, false};
      break;
    case TpcShape::J4:
      info = {scaled(1.9e6), scaled(58e6), scaled(58e6), 0, 1, 3, 7, false};
      break;
    case TpcShape::J5:
      info = {scaled(72e6), scaled(72e6), scaled(904e6), 0, 1, 0, 1, true};
      break;
  }
  return info;
}

namespace {

std::vector<Column> attr_columns(unsigned key_attrs, unsigned nonkey_attrs,
                                 uint64_t rows, ValueKind key_kind,
                                 ValueKind payload_kind, const CounterRng& rng,
                                 uint64_t tag) {
  std::vector<Column> cols;
  for (unsigned c = 0; c < key_attrs; ++c)
    cols.push_back(random_column(key_kind, rows, rng.stream(tag + c)));
  for (unsigned c = 0; c < nonkey_attrs; ++c)
    cols.push_back(random_column(payload_kind, rows, rng.stream(tag + 64 + c)));
  return cols;
}

// Self narrow join: a mix of multiplicity-12 and multiplicity-13 key groups
// solves 12*d12 + 13*d13 = rows and 144*d12 + 169*d13 ~= target exactly
// enough to land within a handful of rows.
Column self_join_keys(uint64_t rows, uint64_t target_out, ValueKind kind,
                      const CounterRng& rng) {
  const double d_real = (25.0 * static_cast<double>(rows) -
                         static_cast<double>(target_out)) / 156.0;
  uint64_t d = d_real <= 0.0 ? 0 : static_cast<uint64_t>(std::llround(d_real));
  uint64_t d13 = 0;
  if (12 * d > rows) d = rows / 12;
  d13 = rows > 12 * d ? rows - 12 * d : 0;
  if (d13 > d) {  // keep the 13-groups a subset of all groups
    d = (rows + 12) / 13;
    d13 = rows > 12 * d ? rows - 12 * d : 0;
  }
  std::vector<uint32_t> keys;
  keys.reserve(rows);
  uint64_t produced = 0;
  for (uint64_t g = 0; g < d && produced < rows; ++g) {
    const unsigned mult = g < d13 ? 13 : 12;
    for (unsigned m = 0; m < mult && produced < rows; ++m, ++produced)
      keys.push_back(static_cast<uint32_t>(g));
  }
  for (uint64_t g = d; produced < rows; ++g, ++produced)
    keys.push_back(static_cast<uint32_t>(g));  // leftover singletons
  // shuffle the concatenated groups
  for (uint64_t i = keys.size(); i > 1; --i)
    std::swap(keys[i - 1], keys[rng.below(i, i)]);
  return keys_from(keys, kind);
}

}  // namespace

std::pair<Relation, Relation> gen_tpc_shape(TpcShape shape, double scale,
                                            ValueKind key_kind,
                                            ValueKind payload_kind,
                                            uint64_t seed) {
  const TpcShapeInfo info = tpc_shape_info(shape, scale);
  const CounterRng master(seed);

  if (info.self_join) {
    Column keys = self_join_keys(info.r_rows, info.out_rows, key_kind,
                                 master.stream(kTagRKeys));
    Relation r = make_relation(keys, attr_columns(info.r_key_attrs, info.r_nonkey_attrs,
                                                  info.r_rows, key_kind, payload_kind,
                                                  master, 0x7000),
                               std::string(tpc_shape_name(shape)) + "_R", false);
    Relation s = make_relation(std::move(keys),
                               attr_columns(info.s_key_attrs, info.s_nonkey_attrs,
                                            info.s_rows, key_kind, payload_kind,
                                            master, 0x8000),
                               std::string(tpc_shape_name(shape)) + "_S", false);
    return {std::move(r), std::move(s)};
  }

  auto perm = permutation(info.r_rows, master.stream(kTagRKeys));
  Column r_key = keys_from(perm, key_kind);
  Column s_key(key_kind, info.s_rows);
  const CounterRng fk_rng = master.stream(kTagSKeys);
  for (uint64_t j = 0; j < info.s_rows; ++j) s_key.set(j, fk_rng.below(j, info.r_rows));

  Relation r = make_relation(std::move(r_key),
                             attr_columns(info.r_key_attrs, info.r_nonkey_attrs,
                                          info.r_rows, key_kind, payload_kind,
                                          master, 0x7000),
                             std::string(tpc_shape_name(shape)) + "_R", true);
  Relation s = make_relation(std::move(s_key),
                             attr_columns(info.s_key_attrs, info.s_nonkey_attrs,
                                          info.s_rows, key_kind, payload_kind,
                                          master, 0x8000),
                             std::string(tpc_shape_name(shape)) + "_S", false);
  return {std::move(r), std::move(s)};
}

}  // namespace coljoin::workloads
