#include "specgr/token_sequence.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>

namespace specgr {

TokenSequence::TokenSequence(const TokenLayout& layout, std::vector<Token> tokens)
    : tokens_(std::move(tokens)), digits_(layout.digits) {
  if (tokens_.size() < 2 || tokens_.front() != TokenLayout::kBos ||
      tokens_.back() != TokenLayout::kEos) {
    throw UsageError("token sequence must start with bos and end with eos");
  }
  const std::size_t interior = tokens_.size() - 2;
  if (interior % digits_ != 0) {
    throw UsageError(fmt::format("token sequence interior length {} is not a multiple of {}",
                                 interior, digits_));
  }
  for (std::size_t p = 0; p < interior; ++p) {
    const auto level = layout.level_of(tokens_[p + 1]);
    if (!level || *level != p % digits_) {
      throw UsageError(fmt::format("token {} at interior position {} is not a level-{} digit",
                                   tokens_[p + 1], p, p % digits_));
    }
  }
}

TokenSequence TokenSequence::from_ids(const TokenLayout& layout, std::span<const SemanticId> ids) {
  std::vector<Token> tokens;
  tokens.reserve(ids.size() * layout.digits + 2);
  tokens.push_back(TokenLayout::kBos);
  for (const SemanticId& id : ids) layout.append_tokens(id, tokens);
  tokens.push_back(TokenLayout::kEos);
  return TokenSequence(layout, std::move(tokens));
}

TokenSequence TokenSequence::from_items(const Catalog& catalog, std::span<const ItemIndex> history,
                                        std::size_t max_items) {
  if (history.size() > max_items) history = history.last(max_items);
  std::vector<SemanticId> ids;
  ids.reserve(history.size());
  for (ItemIndex item : history) ids.push_back(catalog.semantic_id(item));
  return from_ids(catalog.layout(), ids);
}

}  // namespace specgr
