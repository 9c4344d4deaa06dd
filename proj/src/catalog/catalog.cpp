#include "specgr/catalog.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

namespace specgr {

std::uint16_t CollisionRegistry::claim(const SemanticId& prefix, std::size_t id_vocab) {
  std::uint16_t& next = next_[prefix.key()];
  if (next >= id_vocab) {
    throw CapacityError(fmt::format(
        "semantic prefix {} already holds {} items; identification vocabulary exhausted "
        "(codebook too coarse for this catalog)",
        prefix.to_string(), id_vocab));
  }
  return next++;
}

void CollisionRegistry::reserve(const SemanticId& prefix, std::uint16_t counter) {
  std::uint16_t& next = next_[prefix.key()];
  next = std::max<std::uint16_t>(next, counter + 1);
}

std::uint16_t CollisionRegistry::peek(const SemanticId& prefix) const {
  auto it = next_.find(prefix.key());
  return it == next_.end() ? 0 : it->second;
}

SemanticId assign_semantic_id(std::span<const float> embedding, const Codebooks& codebooks,
                              CollisionRegistry& registry, std::size_t id_vocab) {
  SemanticId id = codebooks.quantize(embedding);
  id.push_back(registry.claim(id, id_vocab));
  return id;
}

Matrix normalize_rows(const Matrix& m) {
  if (!m.allFinite()) throw DataError("embeddings contain non-finite values");
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).cast<double>().norm();
    if (!(norm > 0.0)) throw DataError(fmt::format("embedding row {} has zero norm", i));
    out.row(i) = (out.row(i).cast<double>() / norm).cast<float>();
  }
  return out;
}

Catalog::Catalog(const TokenLayout& layout, Codebooks codebooks)
    : layout_(layout), codebooks_(std::move(codebooks)), dim_(codebooks_.dim()) {
  layout_.validate();
  if (codebooks_.num_levels() != layout_.semantic_levels()) {
    throw UsageError(fmt::format("codebooks have {} levels, layout needs {}",
                                 codebooks_.num_levels(), layout_.semantic_levels()));
  }
  if (codebooks_.codebook_size() != layout_.codebook_size) {
    throw UsageError(fmt::format("codebooks have {} codes per level, layout says {}",
                                 codebooks_.codebook_size(), layout_.codebook_size));
  }
}

Catalog Catalog::fit(std::vector<std::string> ids, const Matrix& embeddings, std::vector<bool> seen,
                     const CatalogOptions& options) {
  options.layout.validate();
  const Matrix normalized = normalize_rows(embeddings);
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) rows.push_back(static_cast<Eigen::Index>(i));
  }
  Matrix fit_rows = normalized;
  if (!rows.empty()) fit_rows = normalized(rows, Eigen::all);
  Codebooks books = fit_codebooks(fit_rows, options.layout.semantic_levels(),
                                  options.layout.codebook_size, options.seed, options.kmeans);
  return build(options.layout, std::move(books), std::move(ids), normalized, std::move(seen));
}

Catalog Catalog::build(const TokenLayout& layout, Codebooks codebooks, std::vector<std::string> ids,
                       const Matrix& embeddings, std::vector<bool> seen) {
  const std::size_t n = ids.size();
  if (static_cast<std::size_t>(embeddings.rows()) != n || seen.size() != n) {
    throw UsageError(fmt::format("catalog inputs disagree: {} ids, {} embedding rows, {} seen flags",
                                 n, embeddings.rows(), seen.size()));
  }
  const Matrix normalized = normalize_rows(embeddings);
  Catalog cat(layout, std::move(codebooks));
  if (n > 0 && static_cast<std::size_t>(normalized.cols()) != cat.dim_) {
    throw UsageError(fmt::format("embeddings have {} dims, codebooks {}", normalized.cols(), cat.dim_));
  }

  std::vector<SemanticId> assigned(n);
  for (bool seen_pass : {true, false}) {
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[i] != seen_pass) continue;
      assigned[i] = assign_semantic_id({normalized.row(i).data(), cat.dim_}, cat.codebooks_,
                                       cat.registry_, layout.id_vocab);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    cat.append(std::move(ids[i]), {normalized.row(i).data(), cat.dim_}, assigned[i], seen[i]);
  }
  return cat;
}

Catalog Catalog::restore(const TokenLayout& layout, Codebooks codebooks, std::vector<std::string> ids,
                         const Matrix& embeddings, std::vector<SemanticId> semantic_ids,
                         std::vector<bool> seen) {
  const std::size_t n = ids.size();
  if (static_cast<std::size_t>(embeddings.rows()) != n || seen.size() != n ||
      semantic_ids.size() != n) {
    throw FormatError("catalog restore inputs disagree in length");
  }
  const Matrix normalized = normalize_rows(embeddings);
  Catalog cat(layout, std::move(codebooks));
  for (std::size_t i = 0; i < n; ++i) {
    const SemanticId& id = semantic_ids[i];
    if (id.size() != layout.digits) {
      throw FormatError(fmt::format("item {} has {} digits, expected {}", ids[i], id.size(), layout.digits));
    }
    for (std::size_t level = 0; level < id.size(); ++level) {
      if (!layout.code_in_level(level, id[level])) {
        throw FormatError(fmt::format("item {} digit {} out of range", ids[i], level));
      }
    }
    cat.registry_.reserve(id.prefix(layout.digits - 1), id[layout.digits - 1]);
    cat.append(std::move(ids[i]), {normalized.row(i).data(), cat.dim_}, id, seen[i]);
  }
  return cat;
}

ItemIndex Catalog::add_item(std::string external_id, std::span<const float> embedding, bool seen) {
  if (embedding.size() != dim_) {
    throw UsageError(fmt::format("new item has {} dims, catalog {}", embedding.size(), dim_));
  }
  Matrix row(1, dim_);
  std::copy(embedding.begin(), embedding.end(), row.data());
  row = normalize_rows(row);
  const SemanticId id = assign_semantic_id({row.data(), dim_}, codebooks_, registry_, layout_.id_vocab);
  append(std::move(external_id), {row.data(), dim_}, id, seen);
  return static_cast<ItemIndex>(size() - 1);
}

void Catalog::append(std::string external_id, std::span<const float> normalized, const SemanticId& id,
                     bool seen) {
  const auto index = static_cast<ItemIndex>(ids_.size());
  if (!by_external_.emplace(external_id, index).second) {
    throw FormatError(fmt::format("duplicate item id '{}'", external_id));
  }
  if (!by_semantic_.emplace(id.key(), index).second) {
    throw FormatError(fmt::format("semantic id {} assigned twice", id.to_string()));
  }
  ids_.push_back(std::move(external_id));
  embeddings_.insert(embeddings_.end(), normalized.begin(), normalized.end());
  semantic_ids_.push_back(id);
  seen_.push_back(seen);
  trie_.insert(id, index);
}

std::optional<ItemIndex> Catalog::find(const std::string& external_id) const {
  auto it = by_external_.find(external_id);
  if (it == by_external_.end()) return std::nullopt;
  return it->second;
}

ItemIndex Catalog::index_of(const std::string& external_id) const {
  auto idx = find(external_id);
  if (!idx) throw UsageError(fmt::format("unknown item '{}'", external_id));
  return *idx;
}

std::size_t Catalog::num_seen() const {
  return static_cast<std::size_t>(std::count(seen_.begin(), seen_.end(), true));
}

std::optional<ItemIndex> Catalog::lookup(const SemanticId& id) const {
  auto it = by_semantic_.find(id.key());
  if (it == by_semantic_.end()) return std::nullopt;
  return it->second;
}

std::span<const ItemIndex> Catalog::items_with_prefix(std::span<const std::uint16_t> prefix) const {
  if (prefix.size() > layout_.digits) return {};
  for (std::size_t level = 0; level < prefix.size(); ++level) {
    if (!layout_.code_in_level(level, prefix[level])) return {};
  }
  return trie_.items_with_prefix(prefix);
}

}  // namespace specgr
