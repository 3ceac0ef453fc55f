#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace coljoin::benchio {

/// One measurement row. The CSV column order is the wire contract:
/// experiment, algo, pattern, r_rows, s_rows, r_payloads, s_payloads,
/// key_bytes, payload_bytes, match_ratio, zipf, workers, seed, rep,
/// transform_ns, find_ns, materialize_ns, total_ns, throughput_tps,
/// peak_transform_b, peak_find_b, peak_materialize_b, clusteredness_s,
/// clusteredness_r
struct BenchRow {
  std::string experiment;
  std::string algo;
  std::string pattern;
  uint64_t r_rows = 0, s_rows = 0;
  unsigned r_payloads = 0, s_payloads = 0;
  unsigned key_bytes = 4, payload_bytes = 4;
  double match_ratio = 1.0, zipf = 0.0;
  unsigned workers = 1;
  uint64_t seed = 0;
  unsigned rep = 0;
  uint64_t transform_ns = 0, find_ns = 0, materialize_ns = 0, total_ns = 0;
  double throughput_tps = 0.0;  // (r_rows + s_rows) / total seconds
  uint64_t peak_transform_b = 0, peak_find_b = 0, peak_materialize_b = 0;
  double clusteredness_s = 1.0, clusteredness_r = 1.0;
};

std::string csv_header();
void write_csv_row(std::ostream& out, const BenchRow& row);

/// Parses rows produced by write_csv_row; throws SchemaError when the
/// header or a field count disagrees with the schema.
std::vector<BenchRow> read_csv(std::istream& in);

/// Markdown tables per experiment; repetition groups collapse to their
/// median-by-total_ns row, with phase shares in percent.
std::string render_report(const std::vector<BenchRow>& rows);

/// Fills throughput from the row's own size and total time.
void finalize_throughput(BenchRow& row);

}  // namespace coljoin::benchio
