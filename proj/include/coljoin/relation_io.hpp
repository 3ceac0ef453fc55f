#pragma once

#include <filesystem>

#include "coljoin/column.hpp"

namespace coljoin::workloads {

/// Writes one raw little-endian file per column plus a line-based manifest
/// (name, rows, key role, column order and kinds).
void export_relation(const Relation& rel, const std::filesystem::path& dir);

Relation import_relation(const std::filesystem::path& dir);

}  // namespace coljoin::workloads
