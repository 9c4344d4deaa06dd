#pragma once

#include "specgr/catalog.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace specgr {

struct EmbeddingTable {
  std::vector<std::string> ids;
  Matrix rows;
};

// Little-endian f32 row-major matrix at `path` plus a sidecar `path + ".json"`
// holding {"rows": N, "cols": d, "ids": [...]}.
void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);
EmbeddingTable read_embeddings(const std::filesystem::path& path);

struct SemanticIdRecord {
  std::string id;
  SemanticId digits;
  bool seen = false;
};

// JSON lines {"id": ..., "digits": [...], "seen": ...} in internal index order.
void write_semantic_ids(std::ostream& out, const Catalog& catalog);
std::vector<SemanticIdRecord> read_semantic_ids(std::istream& in);

}  // namespace specgr
