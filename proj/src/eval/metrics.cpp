#include "specgr/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace specgr {

namespace {

std::size_t rank_of(std::span<const ItemIndex> ranked, ItemIndex target, std::size_t k) {
  const std::size_t n = std::min(k, ranked.size());
  const auto it = std::find(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), target);
  return it == ranked.begin() + static_cast<std::ptrdiff_t>(n) ? 0 : static_cast<std::size_t>(it - ranked.begin()) + 1;
}

}  // namespace

double recall_at_k(std::span<const ItemIndex> ranked, ItemIndex target, std::size_t k) {
  return rank_of(ranked, target, k) > 0 ? 1.0 : 0.0;
}

double ndcg_at_k(std::span<const ItemIndex> ranked, ItemIndex target, std::size_t k) {
  const std::size_t r = rank_of(ranked, target, k);
  return r > 0 ? 1.0 / std::log2(static_cast<double>(r) + 1.0) : 0.0;
}

}  // namespace specgr
