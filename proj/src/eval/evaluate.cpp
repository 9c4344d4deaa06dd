#include "specgr/evaluate.hpp"

#include "specgr/errors.hpp"
#include "specgr/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>

namespace specgr {

std::vector<ResolvedCase> resolve_cases(const Catalog& catalog, std::span<const EvalCase> cases) {
  std::vector<ResolvedCase> out;
  out.reserve(cases.size());
  auto resolve = [&](const std::string& id) {
    const auto i = catalog.find(id);
    if (!i) throw DataError(fmt::format("item '{}' is not in the catalog", id));
    return *i;
  };
  for (const EvalCase& c : cases) {
    ResolvedCase r;
    for (const auto& id : c.history) r.history.push_back(resolve(id));
    r.target = resolve(c.target);
    r.unseen = c.target_unseen;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TokenSequence> training_corpus(const Catalog& catalog, const InteractionLog& train) {
  std::vector<TokenSequence> corpus;
  for (const auto& seq : user_sequences(train)) {
    if (seq.size() < 2) continue;
    std::vector<SemanticId> ids;
    ids.reserve(seq.size());
    for (const auto& id : seq) ids.push_back(catalog.semantic_id(catalog.index_of(id)));
    corpus.push_back(TokenSequence::from_ids(catalog.layout(), ids));
  }
  return corpus;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kSpecGR: return "specgr";
    case Method::kBeamOnly: return "beam_only";
    case Method::kHeuristicMix: return "heuristic_mix";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "specgr") return Method::kSpecGR;
  if (text == "beam_only") return Method::kBeamOnly;
  if (text == "heuristic_mix") return Method::kHeuristicMix;
  throw UsageError(fmt::format("unknown method '{}' (expected specgr, beam_only or heuristic_mix)", text));
}

namespace {

nlohmann::json subset_json(const SubsetMetrics& m, const std::vector<std::size_t>& cutoffs) {
  nlohmann::json j = {{"cases", m.cases}};
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    j[fmt::format("recall@{}", cutoffs[k])] = m.at[k].recall;
    j[fmt::format("ndcg@{}", cutoffs[k])] = m.at[k].ndcg;
  }
  return j;
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
  return {{"method", method},
          {"draft_mode", draft_mode},
          {"gamma", gamma},
          {"cutoffs", cutoffs},
          {"overall", subset_json(overall, cutoffs)},
          {"in_sample", subset_json(in_sample, cutoffs)},
          {"unseen", subset_json(unseen, cutoffs)},
          {"mean_iterations", mean_iterations},
          {"mean_decode_steps", mean_decode_steps},
          {"acceptance_rate", acceptance_rate},
          {"short_lists", short_lists}};
}

nlohmann::json EvalReport::timing_json() const {
  return {{"method", method}, {"mean_ms", mean_ms}, {"median_ms", median_ms}};
}

std::string EvalReport::table() const {
  std::string header = fmt::format("{:<12} {:>7}", "subset", "cases");
  for (std::size_t k : cutoffs) header += fmt::format(" {:>9} {:>9}", fmt::format("R@{}", k), fmt::format("N@{}", k));
  std::string out = fmt::format("method: {}  draft: {}  gamma: {}\n", method, draft_mode, gamma);
  out += header + "\n";
  const std::size_t total = overall.cases;
  auto row = [&](std::string_view name, const SubsetMetrics& m) {
    const double share = total ? 100.0 * static_cast<double>(m.cases) / static_cast<double>(total) : 0.0;
    std::string line = fmt::format("{:<12} {:>7}", fmt::format("{} {:.0f}%", name, share), m.cases);
    for (const MetricCell& c : m.at) line += fmt::format(" {:>9.4f} {:>9.4f}", c.recall, c.ndcg);
    out += line + "\n";
  };
  row("in-sample", in_sample);
  row("unseen", unseen);
  row("overall", overall);
  return out;
}

EvalReport evaluate(const Engine& engine, std::span<const ResolvedCase> cases, const EvalOptions& options) {
  if (options.cutoffs.empty()) throw UsageError("at least one cut-off is required");
  EvalReport report;
  report.method = std::string(to_string(options.method));
  report.draft_mode = std::string(to_string(engine.index().mode()));
  report.gamma = options.config.gamma;
  report.cutoffs = options.cutoffs;
  const std::size_t n_cut = options.cutoffs.size();
  const std::size_t K = *std::max_element(options.cutoffs.begin(), options.cutoffs.end());
  SpecGRConfig config = options.config;
  config.K = K;

  std::vector<MetricCell> sum_in(n_cut), sum_un(n_cut);
  std::vector<double> drafted, accepted;
  std::vector<double> ms;
  double iterations = 0.0, steps = 0.0;
  for (const ResolvedCase& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    RecommendationList list;
    switch (options.method) {
      case Method::kSpecGR: list = engine.recommend(c.history, config); break;
      case Method::kBeamOnly: list = engine.beam_only(c.history, config.beta, K); break;
      case Method::kHeuristicMix: list = engine.heuristic_mix(c.history, config.beta, K, options.rho); break;
    }
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    const auto items = list.items();
    auto& sums = c.unseen ? sum_un : sum_in;
    for (std::size_t k = 0; k < n_cut; ++k) {
      sums[k].recall += recall_at_k(items, c.target, options.cutoffs[k]);
      sums[k].ndcg += ndcg_at_k(items, c.target, options.cutoffs[k]);
    }
    (c.unseen ? report.unseen : report.in_sample).cases += 1;
    iterations += static_cast<double>(list.iterations_used);
    steps += static_cast<double>(list.decode_steps_used);
    if (list.short_list) ++report.short_lists;
    for (std::size_t j = 0; j < list.drafted_per_iteration.size(); ++j) {
      if (drafted.size() <= j) {
        drafted.resize(j + 1, 0.0);
        accepted.resize(j + 1, 0.0);
      }
      drafted[j] += static_cast<double>(list.drafted_per_iteration[j]);
      accepted[j] += static_cast<double>(list.accepted_per_iteration[j]);
    }
  }

  const std::size_t n = cases.size();
  report.overall.cases = n;
  auto finish = [&](SubsetMetrics& m, const std::vector<MetricCell>& sums) {
    m.at.assign(n_cut, {});
    if (m.cases == 0) return;
    for (std::size_t k = 0; k < n_cut; ++k) {
      m.at[k].recall = sums[k].recall / static_cast<double>(m.cases);
      m.at[k].ndcg = sums[k].ndcg / static_cast<double>(m.cases);
    }
  };
  finish(report.in_sample, sum_in);
  finish(report.unseen, sum_un);
  report.overall.at.assign(n_cut, {});
  if (n > 0) {
    const double w_in = static_cast<double>(report.in_sample.cases) / static_cast<double>(n);
    const double w_un = static_cast<double>(report.unseen.cases) / static_cast<double>(n);
    for (std::size_t k = 0; k < n_cut; ++k) {
      report.overall.at[k].recall = w_in * report.in_sample.at[k].recall + w_un * report.unseen.at[k].recall;
      report.overall.at[k].ndcg = w_in * report.in_sample.at[k].ndcg + w_un * report.unseen.at[k].ndcg;
    }
    report.mean_iterations = iterations / static_cast<double>(n);
    report.mean_decode_steps = steps / static_cast<double>(n);
    double total_ms = 0.0;
    for (double v : ms) total_ms += v;
    report.mean_ms = total_ms / static_cast<double>(n);
    std::nth_element(ms.begin(), ms.begin() + static_cast<std::ptrdiff_t>(n / 2), ms.end());
    report.median_ms = ms[n / 2];
  }
  for (std::size_t j = 0; j < drafted.size(); ++j) {
    report.acceptance_rate.push_back(drafted[j] > 0 ? accepted[j] / drafted[j] : 0.0);
  }
  return report;
}

GammaChoice select_gamma(const Engine& engine, std::span<const ResolvedCase> cases, EvalOptions options,
                         std::span<const double> grid) {
  if (grid.empty()) throw UsageError("gamma grid is empty");
  GammaChoice choice;
  double best = -1.0;
  for (double g : grid) {
    options.config.gamma = g;
    const EvalReport r = evaluate(engine, cases, options);
    const auto largest = std::max_element(r.cutoffs.begin(), r.cutoffs.end()) - r.cutoffs.begin();
    const double recall = r.overall.at[static_cast<std::size_t>(largest)].recall;
    choice.recall.emplace_back(g, recall);
    if (recall > best) {
      best = recall;
      choice.gamma = g;
    }
  }
  return choice;
}

}  // namespace specgr
