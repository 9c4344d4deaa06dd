#include "specgr/engine.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace specgr {

void SpecGRConfig::validate(const TokenLayout& layout) const {
  if (K == 0) throw UsageError("K must be >= 1");
  if (delta == 0) throw UsageError("draft size must be >= 1");
  if (beta == 0) throw UsageError("beam width must be >= 1");
  if (std::isnan(gamma)) throw UsageError("threshold must not be NaN");
  if (max_iterations > layout.digits) {
    throw UsageError(fmt::format("max_iterations {} exceeds the id length {}", max_iterations, layout.digits));
  }
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kAccepted: return "accepted";
    case Provenance::kBeamFill: return "beam_fill";
    case Provenance::kHeuristicMix: return "heuristic_mix";
  }
  return "unknown";
}

std::vector<ItemIndex> RecommendationList::items() const {
  std::vector<ItemIndex> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.item);
  return out;
}

Engine::Engine(const Catalog& catalog, const Scorer& scorer, const DraftIndex& index)
    : catalog_(catalog), scorer_(scorer), index_(index) {
  if (!(catalog.layout() == scorer.layout())) throw UsageError("catalog and scorer use different token layouts");
  if (index.size() != catalog.size()) throw UsageError("draft index is out of sync with the catalog");
}

std::span<const ItemIndex> Engine::recent(std::span<const ItemIndex> history) const {
  if (history.empty()) throw UsageError("history must not be empty");
  return history.size() > kMaxHistoryItems ? history.last(kMaxHistoryItems) : history;
}

TokenSequence Engine::input(std::span<const ItemIndex> history) const {
  for (ItemIndex i : history) {
    if (i >= catalog_.size()) throw UsageError(fmt::format("history item {} is not in the catalog", i));
  }
  return TokenSequence::from_items(catalog_, history);
}

template <typename Keep>
void Engine::fill_from_beams(std::span<const Beam> beams, std::size_t K, Keep keep,
                             RecommendationList& out) const {
  std::unordered_set<ItemIndex> taken;
  for (const auto& e : out.entries) taken.insert(e.item);
  // Beams come sorted by score with ties broken by digits.
  for (const Beam& beam : beams) {
    if (out.entries.size() >= K) break;
    if (beam.prefix.size() != catalog_.layout().digits) continue;
    const auto item = catalog_.lookup(beam.prefix);
    if (!item || !keep(*item) || !taken.insert(*item).second) continue;
    out.entries.push_back({*item, beam.score, Provenance::kBeamFill});
  }
}

RecommendationList Engine::recommend(std::span<const ItemIndex> history, const SpecGRConfig& config) const {
  config.validate(catalog_.layout());
  history = recent(history);
  const TokenSequence x = input(history);
  const std::size_t l = catalog_.layout().digits;
  const std::size_t iterations = config.max_iterations == 0 ? l : config.max_iterations;

  std::vector<ItemIndex> subset;
  if (config.subset) {
    subset = *config.subset;
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  }
  const std::vector<float> query = index_.query(x, history);
  DraftStream stream(index_, catalog_, query, {},
                     config.subset ? std::optional<std::span<const ItemIndex>>(subset) : std::nullopt);
  BeamDecoder decoder(scorer_, x, config.beta);

  RecommendationList out;
  std::vector<VerifiedCandidate> pool;
  PrefixSet guide;
  for (std::size_t j = 1; j <= iterations; ++j) {
    const bool guided = j >= 2 && config.guided_redrafting;
    std::vector<ItemIndex> batch;
    if (!guided || guide.size() > 0) batch = stream.next_batch(config.delta, guided ? &guide : nullptr);
    auto verified = verify(scorer_, x, batch, catalog_, config.gamma, j);
    std::size_t accepted = 0;
    for (const auto& v : verified) {
      if (!v.accepted) continue;
      pool.push_back(v);
      ++accepted;
    }
    out.iterations_used = j;
    out.drafted_per_iteration.push_back(batch.size());
    out.accepted_per_iteration.push_back(accepted);
    if (config.record_trace) {
      IterationTrace t;
      if (guided) t.guide.assign(guide.prefixes().begin(), guide.prefixes().end());
      t.drafted = std::move(batch);
      t.accepted = accepted;
      out.trace.push_back(std::move(t));
    }
    if (pool.size() >= config.K) break;
    decoder.step();
    guide = PrefixSet::from_beams(decoder.beams());
  }
  out.decode_steps_used = decoder.steps_taken();

  std::sort(pool.begin(), pool.end(), [](const VerifiedCandidate& a, const VerifiedCandidate& b) {
    return a.score != b.score ? a.score > b.score : a.item < b.item;
  });
  for (const auto& v : pool) {
    if (out.entries.size() >= config.K) break;
    out.entries.push_back({v.item, v.score, Provenance::kAccepted});
  }
  if (out.entries.size() < config.K && decoder.steps_taken() == l) {
    if (config.subset) {
      fill_from_beams(decoder.beams(), config.K,
                      [&](ItemIndex i) { return std::binary_search(subset.begin(), subset.end(), i); }, out);
    } else {
      fill_from_beams(decoder.beams(), config.K, [](ItemIndex) { return true; }, out);
    }
  }
  out.short_list = out.entries.size() < config.K;
  return out;
}

RecommendationList Engine::beam_only(std::span<const ItemIndex> history, std::size_t beta, std::size_t K) const {
  if (K == 0) throw UsageError("K must be >= 1");
  if (beta < K) throw UsageError(fmt::format("beam width {} is smaller than K {}", beta, K));
  const TokenSequence x = input(recent(history));
  const std::size_t l = catalog_.layout().digits;
  const auto beams = beam_search(scorer_, x, beta, l);
  RecommendationList out;
  out.decode_steps_used = l;
  fill_from_beams(beams, K, [](ItemIndex) { return true; }, out);
  out.short_list = out.entries.size() < K;
  return out;
}

RecommendationList Engine::heuristic_mix(std::span<const ItemIndex> history, std::size_t beta,
                                         std::size_t K, double rho) const {
  if (K == 0) throw UsageError("K must be >= 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw UsageError("unseen fraction must be in [0, 1]");
  history = recent(history);
  const TokenSequence x = input(history);
  const std::size_t l = catalog_.layout().digits;
  const auto n_unseen = static_cast<std::size_t>(std::floor(rho * static_cast<double>(K)));
  const std::size_t n_beam = K - n_unseen;

  RecommendationList out;
  if (n_beam > 0) {
    if (beta < n_beam) throw UsageError(fmt::format("beam width {} is smaller than {}", beta, n_beam));
    const auto beams = beam_search(scorer_, x, beta, l);
    out.decode_steps_used = l;
    fill_from_beams(beams, n_beam, [](ItemIndex) { return true; }, out);
  }
  if (n_unseen > 0) {
    std::vector<ItemIndex> exclude;
    std::vector<ItemIndex> unseen;
    for (ItemIndex i = 0; i < catalog_.size(); ++i) {
      if (!catalog_.seen_in_training(i)) unseen.push_back(i);
    }
    for (const auto& e : out.entries) exclude.push_back(e.item);
    const auto query = index_.query(x, history);
    DraftStream stream(index_, catalog_, query, exclude, std::span<const ItemIndex>(unseen));
    for (ItemIndex i : stream.next_batch(n_unseen)) {
      out.entries.push_back({i, static_cast<double>(stream.similarity(i)), Provenance::kHeuristicMix});
    }
  }
  out.short_list = out.entries.size() < K;
  return out;
}

RecommendationList Engine::subset_rank(std::span<const ItemIndex> history, std::span<const ItemIndex> subset,
                                       SpecGRConfig config) const {
  config.subset = std::vector<ItemIndex>(subset.begin(), subset.end());
  return recommend(history, config);
}

RecommendationList Engine::constrained_beam_rank(std::span<const ItemIndex> history,
                                                 std::span<const ItemIndex> subset, std::size_t beta,
                                                 std::size_t K) const {
  if (K == 0) throw UsageError("K must be >= 1");
  if (beta < K) throw UsageError(fmt::format("beam width {} is smaller than K {}", beta, K));
  const TokenSequence x = input(recent(history));
  PrefixTrie trie;
  for (ItemIndex i : subset) {
    if (i >= catalog_.size()) throw UsageError(fmt::format("subset item {} is not in the catalog", i));
    trie.insert(catalog_.semantic_id(i), i);
  }
  const std::size_t l = catalog_.layout().digits;
  const auto beams = beam_search(scorer_, x, beta, l, &trie);
  RecommendationList out;
  out.decode_steps_used = l;
  fill_from_beams(beams, K, [](ItemIndex) { return true; }, out);
  out.short_list = out.entries.size() < K;
  return out;
}

RecommendationList Engine::batch_score_rank(std::span<const ItemIndex> history,
                                            std::span<const ItemIndex> subset, std::size_t K) const {
  if (K == 0) throw UsageError("K must be >= 1");
  const TokenSequence x = input(recent(history));
  std::vector<RecommendationEntry> scored;
  scored.reserve(subset.size());
  std::unordered_set<ItemIndex> seen;
  for (ItemIndex i : subset) {
    if (i >= catalog_.size()) throw UsageError(fmt::format("subset item {} is not in the catalog", i));
    if (!seen.insert(i).second) continue;
    const auto lp = chain_logprobs(scorer_, x, catalog_.semantic_id(i));
    double sum = 0.0;
    for (double v : lp) sum += v;
    scored.push_back({i, sum, Provenance::kBeamFill});
  }
  const std::size_t keep = std::min(K, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    [](const auto& a, const auto& b) { return a.score != b.score ? a.score > b.score : a.item < b.item; });
  scored.resize(keep);
  RecommendationList out;
  out.entries = std::move(scored);
  out.short_list = out.entries.size() < K;
  return out;
}

}  // namespace specgr
