#include "coljoin/relation_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace coljoin::workloads {

namespace {

const char* kind_name(ValueKind k) { return k == ValueKind::u32 ? "u32" : "u64"; }

ValueKind parse_kind(const std::string& s) {
  if (s == "u32") return ValueKind::u32;
  if (s == "u64") return ValueKind::u64;
  throw SchemaError("unknown column kind in manifest: " + s);
}

void write_column(const Column& c, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw SchemaError("cannot write " + file.string());
  if (c.kind() == ValueKind::u32) {
    auto v = c.u32();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size_bytes()));
  } else {
    auto v = c.u64();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size_bytes()));
  }
}

Column read_column(ValueKind kind, uint64_t rows, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + file.string());
  Column c(kind, rows);
  const std::streamsize want = static_cast<std::streamsize>(c.byte_size());
  char* dst = kind == ValueKind::u32 ? reinterpret_cast<char*>(c.u32().data())
                                     : reinterpret_cast<char*>(c.u64().data());
  in.read(dst, want);
  if (in.gcount() != want)
    throw SchemaError("column file shorter than the manifest row count: " + file.string());
  return c;
}

}  // namespace

void export_relation(const Relation& rel, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream mf(dir / "manifest.txt");
  if (!mf) throw SchemaError("cannot write manifest in " + dir.string());
  mf << "name " << (rel.name.empty() ? "relation" : rel.name) << "\n";
  mf << "rows " << rel.rows() << "\n";
  mf << "key_unique " << (rel.key_unique ? 1 : 0) << "\n";
  mf << "column key " << kind_name(rel.key.kind()) << " key.bin\n";
  write_column(rel.key, dir / "key.bin");
  for (size_t c = 0; c < rel.payloads.size(); ++c) {
    const std::string file = "payload" + std::to_string(c) + ".bin";
    mf << "column payload" << c << " " << kind_name(rel.payloads[c].kind()) << " "
       << file << "\n";
    write_column(rel.payloads[c], dir / file);
  }
}

Relation import_relation(const std::filesystem::path& dir) {
  std::ifstream mf(dir / "manifest.txt");
  if (!mf) throw SchemaError("no manifest.txt in " + dir.string());
  Relation rel;
  uint64_t rows = 0;
  bool have_key = false;
  std::string line;
  while (std::getline(mf, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string field;
    ls >> field;
    if (field == "name") {
      ls >> rel.name;
    } else if (field == "rows") {
      ls >> rows;
    } else if (field == "key_unique") {
      int v = 0;
      ls >> v;
      rel.key_unique = v != 0;
    } else if (field == "column") {
      std::string col_name, kind, file;
      ls >> col_name >> kind >> file;
      if (col_name.empty() || kind.empty() || file.empty())
        throw SchemaError("malformed column line: " + line);
      Column c = read_column(parse_kind(kind), rows, dir / file);
      if (col_name == "key") {
        rel.key = std::move(c);
        have_key = true;
      } else {
        rel.payloads.push_back(std::move(c));
      }
    } else {
      throw SchemaError("unknown manifest field: " + field);
    }
  }
  if (!have_key) throw SchemaError("manifest lists no key column");
  return rel;
}

}  // namespace coljoin::workloads
