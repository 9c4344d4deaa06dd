#include "specgr/engine.hpp"

#include <algorithm>
#include <numeric>

namespace specgr {

double verification_score(const Scorer& scorer, const TokenSequence& x, const SemanticId& id, bool seen) {
  const auto lp = chain_logprobs(scorer, x, id);
  const std::size_t used = seen ? lp.size() : lp.size() - 1;
  return std::accumulate(lp.begin(), lp.begin() + static_cast<std::ptrdiff_t>(used), 0.0) /
         static_cast<double>(used);
}

std::vector<VerifiedCandidate> verify(const Scorer& scorer, const TokenSequence& x,
                                      std::span<const ItemIndex> candidates, const Catalog& catalog,
                                      double gamma, std::size_t iteration) {
  const TokenLayout& layout = scorer.layout();
  const std::size_t l = layout.digits;

  // Visit candidates in id order so consecutive ones share query prefixes.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return catalog.semantic_id(candidates[a]) < catalog.semantic_id(candidates[b]);
  });

  std::vector<VerifiedCandidate> out(candidates.size());
  std::vector<Token> context(x.tokens().begin(), x.tokens().end());
  const std::size_t base = context.size();
  std::vector<double> lp(l, 0.0);
  SemanticId prev;
  std::size_t valid = 0;  // lp[0, valid) belongs to prev's digits
  for (std::size_t k : order) {
    const ItemIndex item = candidates[k];
    const SemanticId& id = catalog.semantic_id(item);
    const bool seen = catalog.seen_in_training(item);
    const std::size_t used = seen ? l : l - 1;
    std::size_t shared = 0;
    while (shared < valid && shared < used && id[shared] == prev[shared]) ++shared;
    context.resize(base + shared);
    for (std::size_t i = shared; i < used; ++i) {
      const Token t = layout.token(i, id[i]);
      lp[i] = scorer.token_logprob(context, t);
      context.push_back(t);
    }
    valid = used;
    prev = id;
    double sum = 0.0;
    for (std::size_t i = 0; i < used; ++i) sum += lp[i];
    const double score = sum / static_cast<double>(used);
    out[k] = VerifiedCandidate{item, score, score > gamma, iteration};
  }
  return out;
}

}  // namespace specgr
