#pragma once

#include "specgr/token_layout.hpp"

#include <span>

namespace specgr {

// Binary relevance with a single target. Ranks are 1-based.
double recall_at_k(std::span<const ItemIndex> ranked, ItemIndex target, std::size_t k);
double ndcg_at_k(std::span<const ItemIndex> ranked, ItemIndex target, std::size_t k);

}  // namespace specgr
