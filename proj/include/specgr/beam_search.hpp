#pragma once

#include "specgr/prefix_trie.hpp"
#include "specgr/scorer.hpp"

#include <optional>
#include <span>
#include <vector>

namespace specgr {

struct Beam {
  SemanticId prefix;
  double score = 0.0;  // sum of per-step log-probabilities
};

// Step-at-a-time beam search over semantic-id digits. Step i only emits
// level-i tokens. With a trie, every prefix kept has at least one item below
// it. Equal scores are ordered by the smaller digit string.
class BeamDecoder {
 public:
  BeamDecoder(const Scorer& scorer, const TokenSequence& x, std::size_t width,
              const PrefixTrie* trie = nullptr);

  // Extends every beam by one digit and keeps the best `width`. Returns false
  // (and does nothing) once all levels are decoded or no beam is left.
  bool step();

  std::span<const Beam> beams() const { return beams_; }
  std::size_t steps_taken() const { return steps_; }
  bool finished() const { return steps_ == scorer_.layout().digits || beams_.empty(); }

 private:
  const Scorer& scorer_;
  const TokenSequence& x_;
  std::size_t width_;
  const PrefixTrie* trie_;
  std::size_t steps_ = 0;
  std::vector<Beam> beams_;
  std::vector<PrefixTrie::NodeId> nodes_;  // parallel to beams_ when constrained
  std::vector<Token> context_;
  std::vector<double> logprobs_;
};

// Runs `steps` decoding steps (at most the number of digits) and returns the
// beams sorted by score descending.
std::vector<Beam> beam_search(const Scorer& scorer, const TokenSequence& x, std::size_t width,
                              std::size_t steps, const PrefixTrie* trie = nullptr);

}  // namespace specgr
