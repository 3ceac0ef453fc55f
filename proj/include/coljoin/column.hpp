#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coljoin/errors.hpp"

namespace coljoin {

/// Width of the integers held by a column. Values compare as unsigned.
enum class ValueKind : uint8_t { u32, u64 };

inline constexpr size_t value_bytes(ValueKind k) {
  return k == ValueKind::u32 ? 4 : 8;
}

/// Relations are capped so tuple identifiers always fit in 4 bytes.
inline constexpr uint64_t kMaxRows = (1ull << 31) - 1;

/// A contiguous, typed sequence of unsigned integers. The unit every
/// primitive operates on; immutable after construction in normal use.
class Column {
 public:
  Column() = default;
  Column(ValueKind kind, size_t n) : kind_(kind) {
    if (kind == ValueKind::u32) {
      d32_.assign(n, 0);
    } else {
      d64_.assign(n, 0);
    }
  }

  static Column of_u32(std::vector<uint32_t> v) {
    Column c;
    c.kind_ = ValueKind::u32;
    c.d32_ = std::move(v);
    return c;
  }
  static Column of_u64(std::vector<uint64_t> v) {
    Column c;
    c.kind_ = ValueKind::u64;
    c.d64_ = std::move(v);
    return c;
  }

  ValueKind kind() const { return kind_; }
  size_t size() const {
    return kind_ == ValueKind::u32 ? d32_.size() : d64_.size();
  }
  bool empty() const { return size() == 0; }
  size_t byte_size() const { return size() * value_bytes(kind_); }

  std::span<uint32_t> u32() { return d32_; }
  std::span<const uint32_t> u32() const { return d32_; }
  std::span<uint64_t> u64() { return d64_; }
  std::span<const uint64_t> u64() const { return d64_; }

  /// Widened element access; convenient but slow, meant for tests and
  /// reference code, not kernels.
  uint64_t at(size_t i) const {
    if (i >= size()) throw IndexOutOfBounds("Column::at past end");
    return kind_ == ValueKind::u32 ? d32_[i] : d64_[i];
  }
  void set(size_t i, uint64_t v) {
    if (i >= size()) throw IndexOutOfBounds("Column::set past end");
    if (kind_ == ValueKind::u32) {
      d32_[i] = static_cast<uint32_t>(v);
    } else {
      d64_[i] = v;
    }
  }

  bool operator==(const Column& o) const {
    return kind_ == o.kind_ && d32_ == o.d32_ && d64_ == o.d64_;
  }

 private:
  ValueKind kind_ = ValueKind::u32;
  std::vector<uint32_t> d32_;
  std::vector<uint64_t> d64_;
};

template <class T>
std::span<T> values(Column& c);
template <class T>
std::span<const T> values(const Column& c);

template <>
inline std::span<uint32_t> values<uint32_t>(Column& c) { return c.u32(); }
template <>
inline std::span<uint64_t> values<uint64_t>(Column& c) { return c.u64(); }
template <>
inline std::span<const uint32_t> values<uint32_t>(const Column& c) { return c.u32(); }
template <>
inline std::span<const uint64_t> values<uint64_t>(const Column& c) { return c.u64(); }

/// Calls f with a zero value of the column's element type, for kernel
/// dispatch: visit_kind(c.kind(), [&](auto tag){ kernel<decltype(tag)>(...); })
template <class F>
decltype(auto) visit_kind(ValueKind k, F&& f) {
  if (k == ValueKind::u32) return f(uint32_t{0});
  return f(uint64_t{0});
}

inline Column iota_u32(size_t n) {
  std::vector<uint32_t> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = static_cast<uint32_t>(i);
  return Column::of_u32(std::move(v));
}

/// One key column plus payload columns of equal length.
struct Relation {
  Column key;
  std::vector<Column> payloads;
  std::string name;
  bool key_unique = false;  // key-role metadata: true for primary keys

  size_t rows() const { return key.size(); }
  size_t column_count() const { return 1 + payloads.size(); }
};

Relation make_relation(Column key, std::vector<Column> payloads,
                       std::string name, bool key_unique = false);

/// Whether tuple identifiers index the original relation (stored IDs) or
/// are positions in the transformed relation (never stored with the keys).
enum class TupleIdSemantics : uint8_t { Physical, Virtual };

/// Match-finding result: matched keys plus one tuple identifier per side.
struct MatchSet {
  Column keys;
  std::vector<uint32_t> ids_r;
  std::vector<uint32_t> ids_s;
  TupleIdSemantics id_semantics = TupleIdSemantics::Virtual;

  size_t size() const { return ids_r.size(); }
};

}  // namespace coljoin
