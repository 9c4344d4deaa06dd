#include "specgr/binary_io.hpp"
#include "specgr/drafter.hpp"
#include "specgr/errors.hpp"

#include <cmath>
#include <fstream>

namespace specgr {

namespace {
constexpr std::string_view kMagic = "SGRDRFT1";
}

std::string_view to_string(DraftMode mode) {
  return mode == DraftMode::kSelf ? "self" : "auxiliary";
}

DraftMode parse_draft_mode(std::string_view text) {
  if (text == "auxiliary") return DraftMode::kAuxiliary;
  if (text == "self") return DraftMode::kSelf;
  throw UsageError(fmt::format("unknown draft mode '{}' (expected auxiliary or self)", text));
}

DraftIndex DraftIndex::build(const Catalog& catalog, DraftMode mode, const Scorer* scorer) {
  DraftIndex index = from_rows(mode, Matrix(0, 0), scorer);
  index.sync(catalog);
  return index;
}

DraftIndex DraftIndex::from_rows(DraftMode mode, Matrix rows, const Scorer* scorer) {
  if (mode == DraftMode::kSelf) {
    if (scorer == nullptr || !scorer->capabilities().encode) {
      throw CapabilityError("self drafting needs a scorer with encode capability; use auxiliary mode");
    }
  }
  DraftIndex index(mode, scorer);
  index.rows_ = std::move(rows);
  return index;
}

std::vector<float> DraftIndex::item_vector(const Catalog& catalog, ItemIndex i) const {
  if (mode_ == DraftMode::kAuxiliary) {
    const auto e = catalog.embedding(i);
    return {e.begin(), e.end()};
  }
  const SemanticId& id = catalog.semantic_id(i);
  return encode_sequence(*scorer_, TokenSequence::from_ids(catalog.layout(), std::span(&id, 1)));
}

void DraftIndex::sync(const Catalog& catalog) {
  const std::size_t old = size();
  if (catalog.size() < old) throw UsageError("catalog is smaller than the draft index");
  if (catalog.size() == old) return;
  const std::size_t d = mode_ == DraftMode::kAuxiliary ? catalog.dim() : scorer_->encode_dim();
  if (old > 0 && d != dim()) throw UsageError("draft index dimension does not match its source");
  Matrix grown(static_cast<Eigen::Index>(catalog.size()), static_cast<Eigen::Index>(d));
  if (old > 0) grown.topRows(static_cast<Eigen::Index>(old)) = rows_;
  for (std::size_t i = old; i < catalog.size(); ++i) {
    const auto v = item_vector(catalog, static_cast<ItemIndex>(i));
    std::copy(v.begin(), v.end(), grown.data() + i * d);
  }
  rows_ = std::move(grown);
}

std::vector<float> DraftIndex::query(const TokenSequence& x, std::span<const ItemIndex> history) const {
  if (mode_ == DraftMode::kSelf) return encode_sequence(*scorer_, x);
  if (history.empty()) throw UsageError("auxiliary drafting needs a non-empty history");
  std::vector<double> acc(dim(), 0.0);
  for (ItemIndex item : history) {
    if (item >= size()) throw UsageError(fmt::format("history item {} is not in the draft index", item));
    const auto r = row(item);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += r[k];
  }
  double norm = 0.0;
  for (double a : acc) norm += a * a;
  norm = std::sqrt(norm);
  std::vector<float> out(acc.size(), 0.0f);
  if (norm > 0.0) {
    for (std::size_t k = 0; k < acc.size(); ++k) out[k] = static_cast<float>(acc[k] / norm);
  }
  return out;
}

void write_draft_index(const std::string& path, const DraftIndex& index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write {}", path));
  io::write_preamble(out, kMagic,
                     {{"mode", std::string(to_string(index.mode()))},
                      {"rows", index.size()},
                      {"cols", index.dim()}});
  io::write_array(out, index.rows().data(), static_cast<std::size_t>(index.rows().size()));
  if (!out) throw DataError(fmt::format("failed writing {}", path));
}

Matrix read_draft_rows(const std::string& path, DraftMode& mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path));
  const auto header = io::read_preamble(in, kMagic);
  std::size_t rows = 0, cols = 0;
  try {
    mode = parse_draft_mode(header.at("mode").get<std::string>());
    rows = header.at("rows").get<std::size_t>();
    cols = header.at("cols").get<std::size_t>();
  } catch (const std::exception& e) {
    throw FormatError(fmt::format("{}: bad header at byte offset 16: {}", path, e.what()));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  io::read_array(in, m.data(), rows * cols);
  return m;
}

}  // namespace specgr
