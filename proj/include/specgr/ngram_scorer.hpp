#pragma once

#include "specgr/scorer.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

namespace specgr {

struct NGramOptions {
  std::size_t order = 8;     // tokens per n-gram, context is order - 1
  double smoothing = 0.1;    // additive pseudo-count per vocabulary token
  std::size_t embed_dim = 32;
  std::uint64_t seed = 0;
  std::size_t cooc_window = 0;  // 0 means 2 * digits - 1 (adjacent items)

  friend bool operator==(const NGramOptions&, const NGramOptions&) = default;
};

// Interpolated n-gram over semantic-id tokens, trained to predict the digits
// of the next item given [bos, history ids, eos].
//
// For the i-th digit of an item the context is backed off from the longest
// available one down to a floor made of the item's own first i digits:
//
//   P_floor(w) = (c(h_floor, w) + s) / (c(h_floor) + s V)
//   P_m(w)     = (c(h_m, w) + s V P_{m-1}(w)) / (c(h_m) + s V)
//
// A floor context never seen in training gives the uniform distribution.
// Contexts are never shortened past the item prefix, so digit patterns that
// never occurred as training targets only receive smoothing mass.
//
// encode() mean-pools token vectors from a rank-d' factorization of the
// PPMI-weighted token co-occurrence matrix.
class NGramScorer final : public Scorer {
 public:
  static NGramScorer fit(const TokenLayout& layout, std::span<const TokenSequence> corpus,
                         const NGramOptions& options = {});

  const TokenLayout& layout() const override { return layout_; }
  ScorerCapabilities capabilities() const override { return {true, true}; }
  void score(std::span<const Token> context, std::span<double> logprobs) const override;
  double token_logprob(std::span<const Token> context, Token next) const override;
  std::size_t encode_dim() const override { return options_.embed_dim; }
  std::vector<float> encode(std::span<const Token> sequence) const override;

  const NGramOptions& options() const { return options_; }
  std::span<const float> token_vector(Token t) const {
    return {token_vectors_.data() + static_cast<std::size_t>(t) * options_.embed_dim,
            options_.embed_dim};
  }
  // Raw training counts, for inspection and tests.
  std::uint64_t context_count(std::span<const Token> context) const;
  std::uint64_t count(std::span<const Token> context, Token next) const;
  std::size_t num_contexts() const;

  void save(std::ostream& out) const;
  static NGramScorer load(std::istream& in);

 private:
  struct ContextStats {
    std::uint64_t total = 0;
    std::vector<std::pair<Token, std::uint64_t>> followers;  // sorted by token

    std::uint64_t count(Token t) const;
  };
  using Table = std::unordered_map<std::uint64_t, ContextStats>;

  NGramScorer(const TokenLayout& layout, const NGramOptions& options);

  std::uint64_t pack(std::span<const Token> tokens) const;
  // Shortest and longest usable context lengths for this context.
  std::pair<std::size_t, std::size_t> context_range(std::span<const Token> context) const;
  const ContextStats* find(std::span<const Token> context) const;
  void fit_embeddings(std::span<const TokenSequence> corpus);

  TokenLayout layout_;
  NGramOptions options_;
  unsigned key_bits_ = 0;
  std::vector<Table> tables_;  // indexed by context length
  std::vector<float> token_vectors_;  // vocab x embed_dim
};

}  // namespace specgr
