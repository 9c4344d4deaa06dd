#include "specgr/beam_search.hpp"

#include "specgr/errors.hpp"

#include <algorithm>

namespace specgr {

namespace {

bool better(const Beam& a, const Beam& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.prefix < b.prefix;
}

}  // namespace

BeamDecoder::BeamDecoder(const Scorer& scorer, const TokenSequence& x, std::size_t width,
                         const PrefixTrie* trie)
    : scorer_(scorer), x_(x), width_(width), trie_(trie) {
  if (width_ == 0) throw UsageError("beam width must be >= 1");
  beams_.push_back(Beam{});
  if (trie_) {
    if (trie_->num_items() == 0) beams_.clear();
    nodes_.push_back(PrefixTrie::kRoot);
  }
  logprobs_.resize(scorer_.vocab_size());
}

bool BeamDecoder::step() {
  if (finished()) return false;
  const TokenLayout& layout = scorer_.layout();
  const std::size_t level = steps_;
  const Token offset = layout.level_offset(level);
  const std::size_t codes = layout.level_size(level);

  struct Candidate {
    Beam beam;
    PrefixTrie::NodeId node;
  };
  std::vector<Candidate> next;
  next.reserve(beams_.size() * codes);
  for (std::size_t b = 0; b < beams_.size(); ++b) {
    const Beam& beam = beams_[b];
    build_context(layout, x_, beam.prefix, context_);
    scorer_.score(context_, logprobs_);
    auto extend = [&](std::uint16_t code, PrefixTrie::NodeId node) {
      Candidate c{beam, node};
      c.beam.prefix.push_back(code);
      c.beam.score += logprobs_[offset + code];
      next.push_back(c);
    };
    if (trie_) {
      for (const auto& [code, child] : trie_->children(nodes_[b])) extend(code, child);
    } else {
      for (std::size_t code = 0; code < codes; ++code) extend(static_cast<std::uint16_t>(code), 0);
    }
  }

  const std::size_t keep = std::min(width_, next.size());
  auto cmp = [](const Candidate& a, const Candidate& b) { return better(a.beam, b.beam); };
  std::partial_sort(next.begin(), next.begin() + keep, next.end(), cmp);
  beams_.clear();
  nodes_.clear();
  for (std::size_t i = 0; i < keep; ++i) {
    beams_.push_back(next[i].beam);
    if (trie_) nodes_.push_back(next[i].node);
  }
  ++steps_;
  return true;
}

std::vector<Beam> beam_search(const Scorer& scorer, const TokenSequence& x, std::size_t width,
                              std::size_t steps, const PrefixTrie* trie) {
  if (steps > scorer.layout().digits) throw UsageError("beam search steps exceed the id length");
  BeamDecoder decoder(scorer, x, width, trie);
  while (decoder.steps_taken() < steps && decoder.step()) {
  }
  return {decoder.beams().begin(), decoder.beams().end()};
}

}  // namespace specgr
