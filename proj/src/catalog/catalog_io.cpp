#include "specgr/catalog_io.hpp"

#include "specgr/binary_io.hpp"
#include "specgr/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>

namespace specgr {

namespace fs = std::filesystem;
using nlohmann::json;

void write_embeddings(const fs::path& path, const EmbeddingTable& table) {
  if (static_cast<std::size_t>(table.rows.rows()) != table.ids.size()) {
    throw UsageError("embedding table ids and rows disagree");
  }
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw FormatError(fmt::format("cannot write {}", path.string()));
  io::write_array(bin, table.rows.data(), table.rows.size());

  json header = {{"rows", table.rows.rows()}, {"cols", table.rows.cols()}, {"ids", table.ids}};
  std::ofstream side(path.string() + ".json");
  side << header.dump() << '\n';
}

EmbeddingTable read_embeddings(const fs::path& path) {
  const fs::path side_path = path.string() + ".json";
  std::ifstream side(side_path);
  if (!side) throw FormatError(fmt::format("missing embedding header {}", side_path.string()));
  json header;
  try {
    header = json::parse(side);
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("{}: {}", side_path.string(), e.what()));
  }
  EmbeddingTable table;
  std::size_t rows = 0, cols = 0;
  try {
    rows = header.at("rows").get<std::size_t>();
    cols = header.at("cols").get<std::size_t>();
    table.ids = header.at("ids").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw FormatError(fmt::format("{}: {}", side_path.string(), e.what()));
  }
  if (table.ids.size() != rows) {
    throw FormatError(fmt::format("{}: header says {} rows but lists {} ids", side_path.string(),
                                  rows, table.ids.size()));
  }

  std::ifstream bin(path, std::ios::binary | std::ios::ate);
  if (!bin) throw FormatError(fmt::format("missing embedding file {}", path.string()));
  const auto size = static_cast<std::uintmax_t>(bin.tellg());
  const std::uintmax_t expected = static_cast<std::uintmax_t>(rows) * cols * sizeof(float);
  if (size != expected) {
    throw FormatError(fmt::format(
        "{}: header declares {}x{} f32 ({} bytes) but data ends at byte offset {}", path.string(),
        rows, cols, expected, size));
  }
  bin.seekg(0);
  table.rows.resize(rows, cols);
  io::read_array(bin, table.rows.data(), table.rows.size());
  return table;
}

void write_semantic_ids(std::ostream& out, const Catalog& catalog) {
  for (ItemIndex i = 0; i < catalog.size(); ++i) {
    const auto digits = catalog.semantic_id(i).digits();
    json rec = {{"id", catalog.external_id(i)},
                {"digits", std::vector<std::uint16_t>(digits.begin(), digits.end())},
                {"seen", catalog.seen_in_training(i)}};
    out << rec.dump() << '\n';
  }
}

std::vector<SemanticIdRecord> read_semantic_ids(std::istream& in) {
  std::vector<SemanticIdRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      const auto digits = rec.at("digits").get<std::vector<std::uint16_t>>();
      records.push_back({rec.at("id").get<std::string>(), SemanticId(std::span(digits)),
                         rec.at("seen").get<bool>()});
    } catch (const std::exception& e) {
      throw FormatError(fmt::format("semantic-id dump line {}: {}", line_no, e.what()));
    }
  }
  return records;
}

}  // namespace specgr
