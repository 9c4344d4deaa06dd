#pragma once

#include "specgr/engine.hpp"
#include "specgr/interaction_log.hpp"
#include "specgr/split.hpp"

#include <json.hpp>

#include <array>
#include <span>
#include <string>
#include <vector>

namespace specgr {

inline constexpr std::array<double, 5> kGammaGrid = {-1.4, -1.5, -1.6, -1.7, -1.8};

struct ResolvedCase {
  std::vector<ItemIndex> history;
  ItemIndex target = 0;
  bool unseen = false;
};

// Maps external ids to catalog indices; an unknown id is a DataError.
std::vector<ResolvedCase> resolve_cases(const Catalog& catalog, std::span<const EvalCase> cases);

// One token sequence per training user with at least two items.
std::vector<TokenSequence> training_corpus(const Catalog& catalog, const InteractionLog& train);

enum class Method { kSpecGR, kBeamOnly, kHeuristicMix };
std::string_view to_string(Method m);
Method parse_method(std::string_view text);  // specgr | beam_only | heuristic_mix

struct EvalOptions {
  Method method = Method::kSpecGR;
  SpecGRConfig config;  // K is replaced by the largest cut-off
  double rho = 0.0;     // unseen share for heuristic_mix
  std::vector<std::size_t> cutoffs = {10, 50};
};

struct MetricCell {
  double recall = 0.0;
  double ndcg = 0.0;
};

struct SubsetMetrics {
  std::size_t cases = 0;
  std::vector<MetricCell> at;  // parallel to the cut-offs
};

struct EvalReport {
  std::string method;
  std::string draft_mode;
  double gamma = 0.0;
  std::vector<std::size_t> cutoffs;
  SubsetMetrics overall, in_sample, unseen;
  double mean_iterations = 0.0;
  double mean_decode_steps = 0.0;
  std::vector<double> acceptance_rate;  // accepted / drafted, per iteration
  std::size_t short_lists = 0;
  // Wall time, kept out of to_json() so reports stay byte-identical.
  double mean_ms = 0.0;
  double median_ms = 0.0;

  nlohmann::json to_json() const;
  nlohmann::json timing_json() const;
  // Rows: in-sample, unseen, overall; columns: Recall@K and NDCG@K per cut-off.
  std::string table() const;
};

EvalReport evaluate(const Engine& engine, std::span<const ResolvedCase> cases, const EvalOptions& options);

struct GammaChoice {
  double gamma = 0.0;
  std::vector<std::pair<double, double>> recall;  // (gamma, overall Recall at the largest cut-off)
};

// Best threshold on `cases` by overall Recall at the largest cut-off; ties
// keep the earlier grid entry.
GammaChoice select_gamma(const Engine& engine, std::span<const ResolvedCase> cases, EvalOptions options,
                         std::span<const double> grid = kGammaGrid);

}  // namespace specgr
