#pragma once

#include "specgr/catalog.hpp"
#include "specgr/drafter.hpp"
#include "specgr/scorer.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace specgr {

struct SpecGRConfig {
  std::size_t K = 50;
  std::size_t delta = 50;
  double gamma = -1.6;  // mean per-digit log-probability
  std::size_t beta = 50;
  std::optional<std::vector<ItemIndex>> subset;
  std::size_t max_iterations = 0;  // 0 means the id length
  bool guided_redrafting = true;   // off only for the ablation
  bool record_trace = false;

  void validate(const TokenLayout& layout) const;
};

inline constexpr double kAcceptAll = -std::numeric_limits<double>::infinity();
inline constexpr double kRejectAll = std::numeric_limits<double>::infinity();

enum class Provenance { kAccepted, kBeamFill, kHeuristicMix };
std::string_view to_string(Provenance p);

struct VerifiedCandidate {
  ItemIndex item = 0;
  double score = 0.0;
  bool accepted = false;
  std::size_t iteration = 0;
};

struct RecommendationEntry {
  ItemIndex item = 0;
  double score = 0.0;
  Provenance provenance = Provenance::kAccepted;
};

struct IterationTrace {
  std::vector<SemanticId> guide;  // prefixes the batch was filtered by; empty when unguided
  std::vector<ItemIndex> drafted;
  std::size_t accepted = 0;
};

struct RecommendationList {
  std::vector<RecommendationEntry> entries;
  std::size_t iterations_used = 0;
  std::size_t decode_steps_used = 0;
  bool short_list = false;  // fewer than K entries
  std::vector<std::size_t> drafted_per_iteration;
  std::vector<std::size_t> accepted_per_iteration;
  std::vector<IterationTrace> trace;  // filled when record_trace is set

  std::vector<ItemIndex> items() const;
};

// Mean log-probability of the candidate's digits given x: all digits for
// items seen in training, all but the identification digit otherwise.
double verification_score(const Scorer& scorer, const TokenSequence& x, const SemanticId& id, bool seen);

// Scores every candidate once. Candidates sharing a prefix share its queries.
std::vector<VerifiedCandidate> verify(const Scorer& scorer, const TokenSequence& x,
                                      std::span<const ItemIndex> candidates, const Catalog& catalog,
                                      double gamma, std::size_t iteration = 1);

// Draft-verify decoding plus the comparison rankers. All entry points take a
// chronological history of catalog items; only the most recent
// kMaxHistoryItems are used.
class Engine {
 public:
  Engine(const Catalog& catalog, const Scorer& scorer, const DraftIndex& index);

  RecommendationList recommend(std::span<const ItemIndex> history, const SpecGRConfig& config) const;

  // Plain beam search over all levels, beams parsed by exact id lookup.
  RecommendationList beam_only(std::span<const ItemIndex> history, std::size_t beta, std::size_t K) const;

  // Beam items truncated to K - floor(rho K), then the top unseen drafter
  // items in the remaining tail slots.
  RecommendationList heuristic_mix(std::span<const ItemIndex> history, std::size_t beta,
                                   std::size_t K, double rho) const;

  // recommend() with drafting and beam fill restricted to `subset`.
  RecommendationList subset_rank(std::span<const ItemIndex> history, std::span<const ItemIndex> subset,
                                 SpecGRConfig config) const;

  // Beam search masked by a trie built from `subset`.
  RecommendationList constrained_beam_rank(std::span<const ItemIndex> history,
                                           std::span<const ItemIndex> subset, std::size_t beta,
                                           std::size_t K) const;

  // Full-path log-probability of every subset item, top K.
  RecommendationList batch_score_rank(std::span<const ItemIndex> history,
                                      std::span<const ItemIndex> subset, std::size_t K) const;

  const Catalog& catalog() const { return catalog_; }
  const Scorer& scorer() const { return scorer_; }
  const DraftIndex& index() const { return index_; }

 private:
  TokenSequence input(std::span<const ItemIndex> history) const;
  std::span<const ItemIndex> recent(std::span<const ItemIndex> history) const;
  // Full-length beams parsed into items, skipping unparseable paths,
  // items in `skip` and items rejected by `keep`.
  template <typename Keep>
  void fill_from_beams(std::span<const Beam> beams, std::size_t K, Keep keep,
                       RecommendationList& out) const;

  const Catalog& catalog_;
  const Scorer& scorer_;
  const DraftIndex& index_;
};

}  // namespace specgr
