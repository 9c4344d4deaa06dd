#include "specgr/scorer.hpp"

#include "specgr/errors.hpp"

namespace specgr {

double Scorer::token_logprob(std::span<const Token> context, Token next) const {
  std::vector<double> lp(vocab_size());
  score(context, lp);
  return lp.at(next);
}

std::vector<float> Scorer::encode(std::span<const Token>) const {
  throw CapabilityError("scorer does not support encode");
}

void build_context(const TokenLayout& layout, const TokenSequence& x, const SemanticId& prefix,
                   std::vector<Token>& out) {
  out.assign(x.tokens().begin(), x.tokens().end());
  layout.append_tokens(prefix, out);
}

std::vector<double> chain_logprobs(const Scorer& scorer, const TokenSequence& x,
                                   const SemanticId& candidate) {
  const TokenLayout& layout = scorer.layout();
  std::vector<Token> context(x.tokens().begin(), x.tokens().end());
  std::vector<double> out;
  out.reserve(candidate.size());
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const Token t = layout.token(i, candidate[i]);
    out.push_back(scorer.token_logprob(context, t));
    context.push_back(t);
  }
  return out;
}

std::vector<float> encode_sequence(const Scorer& scorer, const TokenSequence& sequence) {
  if (!scorer.capabilities().encode) {
    throw CapabilityError("scorer does not support encode; use auxiliary drafting");
  }
  return scorer.encode(sequence.tokens());
}

}  // namespace specgr
