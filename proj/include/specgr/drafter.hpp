#pragma once

#include "specgr/beam_search.hpp"
#include "specgr/catalog.hpp"
#include "specgr/scorer.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace specgr {

enum class DraftMode { kAuxiliary, kSelf };

std::string_view to_string(DraftMode mode);
DraftMode parse_draft_mode(std::string_view text);  // "auxiliary" | "self"

// One L2-normalized vector per catalog item, searched exhaustively.
// Auxiliary rows are the catalog embeddings; self rows encode [bos, ID_i, eos].
class DraftIndex {
 public:
  // Self mode needs a scorer with the encode capability and keeps a
  // reference to it for query encoding.
  static DraftIndex build(const Catalog& catalog, DraftMode mode, const Scorer* scorer = nullptr);
  // Restores saved rows (see write_draft_index).
  static DraftIndex from_rows(DraftMode mode, Matrix rows, const Scorer* scorer = nullptr);

  // Adds rows for catalog items past size(); existing rows are untouched.
  void sync(const Catalog& catalog);

  DraftMode mode() const { return mode_; }
  std::size_t size() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows_.cols()); }
  const Matrix& rows() const { return rows_; }
  std::span<const float> row(ItemIndex i) const {
    return {rows_.data() + static_cast<std::size_t>(i) * dim(), dim()};
  }

  // Auxiliary: normalized mean of the history rows. Self: encode(x).
  std::vector<float> query(const TokenSequence& x, std::span<const ItemIndex> history) const;

 private:
  DraftIndex(DraftMode mode, const Scorer* scorer) : mode_(mode), scorer_(scorer) {}
  std::vector<float> item_vector(const Catalog& catalog, ItemIndex i) const;

  DraftMode mode_;
  const Scorer* scorer_;
  Matrix rows_;
};

void write_draft_index(const std::string& path, const DraftIndex& index);
Matrix read_draft_rows(const std::string& path, DraftMode& mode);

// Set of equal-length semantic-id prefixes.
class PrefixSet {
 public:
  PrefixSet() = default;
  explicit PrefixSet(std::span<const SemanticId> prefixes);
  static PrefixSet from_beams(std::span<const Beam> beams);

  std::size_t length() const { return length_; }
  std::size_t size() const { return prefixes_.size(); }
  std::span<const SemanticId> prefixes() const { return prefixes_; }
  bool contains(const SemanticId& id) const;  // id's length()-prefix is in the set

 private:
  std::size_t length_ = 0;
  std::vector<SemanticId> prefixes_;  // sorted, unique
};

// Ranking of the eligible items for one query by cosine similarity
// (descending, ties by ascending index). Batches never repeat an item; items
// passed over by a prefix filter stay available to later batches.
class DraftStream {
 public:
  DraftStream(const DraftIndex& index, const Catalog& catalog, std::span<const float> query,
              std::span<const ItemIndex> exclude = {},
              std::optional<std::span<const ItemIndex>> subset = std::nullopt);

  std::vector<ItemIndex> next_batch(std::size_t count, const PrefixSet* prefixes = nullptr);

  float similarity(ItemIndex item) const { return sims_[item]; }
  std::size_t num_eligible() const { return ranking_.size(); }
  std::size_t num_yielded() const { return num_yielded_; }

 private:
  struct Entry {
    float sim;
    ItemIndex item;
  };
  static bool before(const Entry& a, const Entry& b) {
    return a.sim != b.sim ? a.sim > b.sim : a.item < b.item;
  }
  // Makes ranking_[0, n) fully sorted.
  void sort_prefix(std::size_t n);
  std::vector<ItemIndex> scan(std::size_t count, const PrefixSet* prefixes);
  std::vector<ItemIndex> gather(std::size_t count, const PrefixSet& prefixes);

  enum State : std::uint8_t { kIneligible = 0, kOpen = 1, kYielded = 2 };

  const Catalog& catalog_;
  std::vector<float> sims_;
  std::vector<std::uint8_t> state_;
  std::vector<Entry> ranking_;
  std::size_t sorted_ = 0;
  std::size_t cursor_ = 0;  // every ranking_ entry before this is yielded
  std::size_t num_yielded_ = 0;
};

}  // namespace specgr
