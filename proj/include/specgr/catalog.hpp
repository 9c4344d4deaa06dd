#pragma once

#include "specgr/codebooks.hpp"
#include "specgr/prefix_trie.hpp"
#include "specgr/token_layout.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace specgr {

// Next free identification counter per (l-1)-digit semantic prefix.
class CollisionRegistry {
 public:
  // Returns the counter for `prefix` and advances it. Throws CapacityError
  // when the prefix already holds `id_vocab` items.
  std::uint16_t claim(const SemanticId& prefix, std::size_t id_vocab);
  // Marks `counter` as used for `prefix` (when restoring saved ids).
  void reserve(const SemanticId& prefix, std::uint16_t counter);
  std::uint16_t peek(const SemanticId& prefix) const;

 private:
  std::unordered_map<std::uint64_t, std::uint16_t> next_;
};

// Quantizes `embedding` with the frozen codebooks and appends the next free
// identification counter for the resulting prefix.
SemanticId assign_semantic_id(std::span<const float> embedding, const Codebooks& codebooks,
                              CollisionRegistry& registry, std::size_t id_vocab);

struct CatalogOptions {
  TokenLayout layout;
  std::uint64_t seed = 0;
  KMeansOptions kmeans;
};

// Item registry: external ids, L2-normalized embeddings, semantic ids,
// seen-in-training flags and the semantic-id prefix trie.
//
// Identification counters are handed out to seen items first, then to unseen
// ones, each group in ascending internal index, so items that arrive after
// training never take a counter away from a training item.
class Catalog {
 public:
  // Normalizes the embeddings, fits codebooks on the seen rows (all rows when
  // nothing is marked seen) and assigns every item its semantic id.
  static Catalog fit(std::vector<std::string> ids, const Matrix& embeddings,
                     std::vector<bool> seen, const CatalogOptions& options);

  // Assigns ids with already-fitted codebooks.
  static Catalog build(const TokenLayout& layout, Codebooks codebooks,
                       std::vector<std::string> ids, const Matrix& embeddings,
                       std::vector<bool> seen);

  // Restores a catalog from saved semantic ids (validated, not recomputed).
  static Catalog restore(const TokenLayout& layout, Codebooks codebooks,
                         std::vector<std::string> ids, const Matrix& embeddings,
                         std::vector<SemanticId> semantic_ids, std::vector<bool> seen);

  // Tokenizes a new item on the fly with the frozen codebooks.
  ItemIndex add_item(std::string external_id, std::span<const float> embedding, bool seen = false);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  const TokenLayout& layout() const { return layout_; }
  const Codebooks& codebooks() const { return codebooks_; }

  const std::string& external_id(ItemIndex i) const { return ids_[i]; }
  std::optional<ItemIndex> find(const std::string& external_id) const;
  ItemIndex index_of(const std::string& external_id) const;  // throws UsageError

  std::span<const float> embedding(ItemIndex i) const {
    return {embeddings_.data() + static_cast<std::size_t>(i) * dim_, dim_};
  }
  Eigen::Map<const Matrix> embeddings() const {
    return {embeddings_.data(), static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_)};
  }
  const SemanticId& semantic_id(ItemIndex i) const { return semantic_ids_[i]; }
  bool seen_in_training(ItemIndex i) const { return seen_[i]; }
  std::size_t num_seen() const;

  // Exact full-id lookup.
  std::optional<ItemIndex> lookup(const SemanticId& id) const;
  // Items whose id starts with `prefix`; a digit outside its level yields {}.
  std::span<const ItemIndex> items_with_prefix(std::span<const std::uint16_t> prefix) const;
  const PrefixTrie& trie() const { return trie_; }

 private:
  Catalog(const TokenLayout& layout, Codebooks codebooks);
  void append(std::string external_id, std::span<const float> normalized, const SemanticId& id, bool seen);

  TokenLayout layout_;
  Codebooks codebooks_;
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, ItemIndex> by_external_;
  std::vector<float> embeddings_;
  std::vector<SemanticId> semantic_ids_;
  std::vector<bool> seen_;
  std::unordered_map<std::uint64_t, ItemIndex> by_semantic_;
  CollisionRegistry registry_;
  PrefixTrie trie_;
};

// Row-wise L2 normalization; throws DataError on zero or non-finite rows.
Matrix normalize_rows(const Matrix& m);

}  // namespace specgr
