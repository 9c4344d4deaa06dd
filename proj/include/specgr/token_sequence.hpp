#pragma once

#include "specgr/catalog.hpp"
#include "specgr/token_layout.hpp"

#include <span>
#include <vector>

namespace specgr {

// Histories longer than this keep only their most recent items.
inline constexpr std::size_t kMaxHistoryItems = 20;

// Model input: bos, the semantic-id digits of each history item in
// chronological order, eos.
class TokenSequence {
 public:
  TokenSequence(const TokenLayout& layout, std::vector<Token> tokens);

  static TokenSequence from_ids(const TokenLayout& layout, std::span<const SemanticId> ids);
  static TokenSequence from_items(const Catalog& catalog, std::span<const ItemIndex> history,
                                  std::size_t max_items = kMaxHistoryItems);

  std::span<const Token> tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t num_items() const { return (tokens_.size() - 2) / digits_; }
  // Digit tokens of the k-th history item.
  std::span<const Token> item_tokens(std::size_t k) const {
    return std::span<const Token>(tokens_).subspan(1 + k * digits_, digits_);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t digits_;
};

}  // namespace specgr
