#include "coljoin/bench_io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "coljoin/errors.hpp"

namespace coljoin::benchio {

namespace {

const char* kHeader =
    "experiment,algo,pattern,r_rows,s_rows,r_payloads,s_payloads,key_bytes,"
    "payload_bytes,match_ratio,zipf,workers,seed,rep,transform_ns,find_ns,"
    "materialize_ns,total_ns,throughput_tps,peak_transform_b,peak_find_b,"
    "peak_materialize_b,clusteredness_s,clusteredness_r";

constexpr int kFieldCount = 24;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

uint64_t to_u64(const std::string& s) {
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw SchemaError("expected an integer CSV field, got: " + s);
  }
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw SchemaError("expected a numeric CSV field, got: " + s);
  }
}

// everything but rep and the measured values
std::string group_key(const BenchRow& r) {
  std::ostringstream k;
  k << r.experiment << '|' << r.algo << '|' << r.pattern << '|' << r.r_rows << '|'
    << r.s_rows << '|' << r.r_payloads << '|' << r.s_payloads << '|' << r.key_bytes
    << '|' << r.payload_bytes << '|' << r.match_ratio << '|' << r.zipf << '|'
    << r.workers << '|' << r.seed;
  return k.str();
}

}  // namespace

std::string csv_header() { return kHeader; }

void write_csv_row(std::ostream& out, const BenchRow& r) {
  out << r.experiment << ',' << r.algo << ',' << r.pattern << ',' << r.r_rows << ','
      << r.s_rows << ',' << r.r_payloads << ',' << r.s_payloads << ',' << r.key_bytes
      << ',' << r.payload_bytes << ',' << fmt_double(r.match_ratio) << ','
      << fmt_double(r.zipf) << ',' << r.workers << ',' << r.seed << ',' << r.rep << ','
      << r.transform_ns << ',' << r.find_ns << ',' << r.materialize_ns << ','
      << r.total_ns << ',' << fmt_double(r.throughput_tps) << ',' << r.peak_transform_b
      << ',' << r.peak_find_b << ',' << r.peak_materialize_b << ','
      << fmt_double(r.clusteredness_s) << ',' << fmt_double(r.clusteredness_r) << '\n';
}

std::vector<BenchRow> read_csv(std::istream& in) {
  std::string line;
  std::vector<BenchRow> rows;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kHeader) throw SchemaError("CSV header does not match the schema");
      saw_header = true;
      continue;
    }
    auto f = split_csv(line);
    if (static_cast<int>(f.size()) != kFieldCount)
      throw SchemaError("CSV row has " + std::to_string(f.size()) +
                        " fields, expected " + std::to_string(kFieldCount));
    BenchRow r;
    int i = 0;
    r.experiment = f[i++];
    r.algo = f[i++];
    r.pattern = f[i++];
    r.r_rows = to_u64(f[i++]);
    r.s_rows = to_u64(f[i++]);
    r.r_payloads = static_cast<unsigned>(to_u64(f[i++]));
    r.s_payloads = static_cast<unsigned>(to_u64(f[i++]));
    r.key_bytes = static_cast<unsigned>(to_u64(f[i++]));
    r.payload_bytes = static_cast<unsigned>(to_u64(f[i++]));
    r.match_ratio = to_double(f[i++]);
    r.zipf = to_double(f[i++]);
    r.workers = static_cast<unsigned>(to_u64(f[i++]));
    r.seed = to_u64(f[i++]);
    r.rep = static_cast<unsigned>(to_u64(f[i++]));
    r.transform_ns = to_u64(f[i++]);
    r.find_ns = to_u64(f[i++]);
    r.materialize_ns = to_u64(f[i++]);
    r.total_ns = to_u64(f[i++]);
    r.throughput_tps = to_double(f[i++]);
    r.peak_transform_b = to_u64(f[i++]);
    r.peak_find_b = to_u64(f[i++]);
    r.peak_materialize_b = to_u64(f[i++]);
    r.clusteredness_s = to_double(f[i++]);
    r.clusteredness_r = to_double(f[i++]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void finalize_throughput(BenchRow& row) {
  if (row.total_ns == 0) {
    row.throughput_tps = 0.0;
    return;
  }
  row.throughput_tps = static_cast<double>(row.r_rows + row.s_rows) /
                       (static_cast<double>(row.total_ns) * 1e-9);
}

std::string render_report(const std::vector<BenchRow>& rows) {
  if (rows.empty()) return "";
  // keep first-seen order of groups and experiments
  std::vector<std::string> group_order;
  std::map<std::string, std::vector<BenchRow>> groups;
  for (const auto& r : rows) {
    auto key = group_key(r);
    if (!groups.count(key)) group_order.push_back(key);
    groups[key].push_back(r);
  }

  std::ostringstream out;
  std::string current_experiment;
  for (const auto& key : group_order) {
    auto& g = groups[key];
    std::sort(g.begin(), g.end(),
              [](const BenchRow& a, const BenchRow& b) { return a.total_ns < b.total_ns; });
    const BenchRow& med = g[g.size() / 2];
    if (med.experiment != current_experiment) {
      current_experiment = med.experiment;
      out << "## " << current_experiment << "\n\n";
      out << "| algo | pattern | r_rows | s_rows | payloads | match | zipf | workers "
             "| total_ms | transform% | find% | materialize% | tuples/s | reps |\n";
      out << "|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    }
    const double total = static_cast<double>(med.total_ns);
    auto pct = [&](uint64_t part) {
      return total == 0.0 ? 0.0 : 100.0 * static_cast<double>(part) / total;
    };
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "| %s | %s | %llu | %llu | %u+%u | %.2f | %.2f | %u | %.3f | %.1f | "
                  "%.1f | %.1f | %.3g | %zu |\n",
                  med.algo.c_str(), med.pattern.c_str(),
                  static_cast<unsigned long long>(med.r_rows),
                  static_cast<unsigned long long>(med.s_rows), med.r_payloads,
                  med.s_payloads, med.match_ratio, med.zipf, med.workers,
                  total * 1e-6, pct(med.transform_ns), pct(med.find_ns),
                  pct(med.materialize_ns), med.throughput_tps, g.size());
    out << buf;
  }
  return out.str();
}

}  // namespace coljoin::benchio
