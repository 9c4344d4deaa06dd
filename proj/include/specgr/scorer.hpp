#pragma once

#include "specgr/token_layout.hpp"
#include "specgr/token_sequence.hpp"

#include <span>
#include <vector>

namespace specgr {

struct ScorerCapabilities {
  bool score = true;
  bool encode = false;
};

// Autoregressive scorer over semantic-id tokens. Implementations must be
// safe for concurrent const use.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual const TokenLayout& layout() const = 0;
  virtual ScorerCapabilities capabilities() const = 0;
  std::size_t vocab_size() const { return layout().vocab_size(); }

  // Writes log P(token | context) for every token; `logprobs` has
  // vocab_size() entries and exp() of them sums to 1.
  virtual void score(std::span<const Token> context, std::span<double> logprobs) const = 0;

  // log P(next | context). The default evaluates the full distribution;
  // scorers that can answer point queries more cheaply override it.
  virtual double token_logprob(std::span<const Token> context, Token next) const;

  virtual std::size_t encode_dim() const { return 0; }
  // Mean-pooled, L2-normalized representation of a token sequence.
  // Throws CapabilityError unless capabilities().encode.
  virtual std::vector<float> encode(std::span<const Token> sequence) const;
};

// log P(digit_i | x ++ digits_<i) for every digit of `candidate`.
std::vector<double> chain_logprobs(const Scorer& scorer, const TokenSequence& x,
                                   const SemanticId& candidate);

std::vector<float> encode_sequence(const Scorer& scorer, const TokenSequence& sequence);

// Context for the next digit after `x` and an already chosen `prefix`.
void build_context(const TokenLayout& layout, const TokenSequence& x, const SemanticId& prefix,
                   std::vector<Token>& out);

}  // namespace specgr
