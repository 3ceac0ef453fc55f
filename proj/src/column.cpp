#include "coljoin/column.hpp"

namespace coljoin {

Relation make_relation(Column key, std::vector<Column> payloads,
                       std::string name, bool key_unique) {
  if (value_bytes(key.kind()) != 4 && value_bytes(key.kind()) != 8)
    throw KindError("key must be a 4- or 8-byte integer column");
  if (key.size() > kMaxRows)
    throw SpecInvalid("relation exceeds the 2^31-1 row cap");
  for (const auto& p : payloads) {
    if (p.size() != key.size())
      throw LengthMismatch("payload length differs from key length");
  }
  Relation r;
  r.key = std::move(key);
  r.payloads = std::move(payloads);
  r.name = std::move(name);
  r.key_unique = key_unique;
  return r;
}

}  // namespace coljoin
