#include "specgr/bench.hpp"

#include "specgr/errors.hpp"
#include "specgr/kmeans.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <chrono>
#include <ostream>
#include <random>

namespace specgr {

LatencyStats time_calls(const std::function<void(std::size_t)>& fn, std::size_t warmup, std::size_t reps) {
  if (reps == 0) throw UsageError("at least one timed repetition is required");
  for (std::size_t r = 0; r < warmup; ++r) fn(r);
  std::vector<double> ms;
  ms.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn(warmup + r);
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(ms.begin(), ms.end());
  LatencyStats s;
  s.reps = reps;
  s.median_ms = reps % 2 ? ms[reps / 2] : 0.5 * (ms[reps / 2 - 1] + ms[reps / 2]);
  s.p95_ms = ms[std::min(reps - 1, static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(reps))) - 1)];
  return s;
}

std::vector<ItemIndex> random_subset(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) throw UsageError(fmt::format("subset of {} items requested from {}", k, n));
  std::mt19937_64 rng(seed);
  // Floyd's algorithm: k distinct draws without materializing [0, n).
  std::vector<ItemIndex> out;
  out.reserve(k);
  std::vector<bool> taken(n, false);
  for (std::size_t j = n - k; j < n; ++j) {
    auto t = static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(j + 1));
    t = std::min(t, j);
    if (taken[t]) t = j;
    taken[t] = true;
    out.push_back(static_cast<ItemIndex>(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string_view to_string(SubsetMethod m) {
  switch (m) {
    case SubsetMethod::kSubsetRank: return "subset_rank";
    case SubsetMethod::kConstrainedBeam: return "constrained_beam";
    case SubsetMethod::kBatchScoring: return "batch_scoring";
  }
  return "unknown";
}

std::vector<SubsetBenchRow> bench_subset_latency(const Engine& engine, std::span<const ResolvedCase> cases,
                                                 const SubsetBenchOptions& options) {
  if (cases.empty()) throw UsageError("benchmark needs at least one case");
  const std::size_t n = engine.catalog().size();
  const std::size_t total = options.warmup + options.reps;
  std::vector<SubsetBenchRow> rows;
  for (std::size_t size : options.sizes) {
    std::vector<std::vector<ItemIndex>> subsets;
    for (std::size_t r = 0; r < total; ++r) {
      subsets.push_back(random_subset(n, size, options.seed ^ (size * 0x9E3779B97F4A7C15ull) ^ (r + 1)));
    }
    for (SubsetMethod method : options.methods) {
      SubsetBenchRow row;
      row.subset_size = size;
      row.method = method;
      auto run = [&](std::size_t r) {
        const ResolvedCase& c = cases[r % cases.size()];
        const auto& subset = subsets[r];
        const std::size_t K = options.config.K;
        RecommendationList list;
        switch (method) {
          case SubsetMethod::kSubsetRank: list = engine.subset_rank(c.history, subset, options.config); break;
          case SubsetMethod::kConstrainedBeam:
            list = engine.constrained_beam_rank(c.history, subset, std::max(options.config.beta, K), K);
            break;
          case SubsetMethod::kBatchScoring: list = engine.batch_score_rank(c.history, subset, K); break;
        }
        bool inside = true;
        for (const auto& e : list.entries) inside = inside && std::binary_search(subset.begin(), subset.end(), e.item);
        if (r >= options.warmup) {
          row.contained += inside ? 1 : 0;
          ++row.requests;
        }
      };
      row.latency = time_calls(run, options.warmup, options.reps);
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<SweepRow> sweep(const Engine& engine, std::span<const ResolvedCase> cases, const EvalOptions& base,
                            std::span<const double> gammas, std::span<const std::size_t> sizes) {
  std::vector<SweepRow> rows;
  for (double g : gammas) {
    EvalOptions o = base;
    o.config.gamma = g;
    rows.push_back({"gamma", g, evaluate(engine, cases, o)});
  }
  for (std::size_t d : sizes) {
    EvalOptions o = base;
    o.config.delta = d;
    rows.push_back({"delta", static_cast<double>(d), evaluate(engine, cases, o)});
  }
  for (std::size_t b : sizes) {
    EvalOptions o = base;
    o.config.beta = b;
    rows.push_back({"beta", static_cast<double>(b), evaluate(engine, cases, o)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "parameter,value,recall@10,ndcg@10,recall@50,ndcg@50,unseen_recall@50,mean_iterations,"
         "mean_decode_steps,acceptance_rate_1,mean_ms\n";
  for (const SweepRow& r : rows) {
    const EvalReport& e = r.report;
    auto cell = [&](const SubsetMetrics& m, std::size_t cutoff, bool ndcg) {
      for (std::size_t k = 0; k < e.cutoffs.size(); ++k) {
        if (e.cutoffs[k] == cutoff && k < m.at.size()) return ndcg ? m.at[k].ndcg : m.at[k].recall;
      }
      return 0.0;
    };
    out << fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{:.4f},{:.6f},{:.4f}\n", r.parameter,
                       r.value, cell(e.overall, 10, false), cell(e.overall, 10, true), cell(e.overall, 50, false),
                       cell(e.overall, 50, true), cell(e.unseen, 50, false), e.mean_iterations,
                       e.mean_decode_steps, e.acceptance_rate.empty() ? 0.0 : e.acceptance_rate[0], e.mean_ms);
  }
}

void write_latency_csv(std::ostream& out, const std::vector<SubsetBenchRow>& rows) {
  out << "subset_size,method,median_ms,p95_ms,reps,contained,requests\n";
  for (const SubsetBenchRow& r : rows) {
    out << fmt::format("{},{},{:.6f},{:.6f},{},{},{}\n", r.subset_size, to_string(r.method), r.latency.median_ms,
                       r.latency.p95_ms, r.latency.reps, r.contained, r.requests);
  }
}

}  // namespace specgr
