#pragma once

#include "specgr/evaluate.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace specgr {

struct LatencyStats {
  double median_ms = 0.0;
  double p95_ms = 0.0;
  std::size_t reps = 0;
};

// Calls fn(0 .. warmup-1) untimed, then times fn(warmup .. warmup+reps-1).
LatencyStats time_calls(const std::function<void(std::size_t)>& fn, std::size_t warmup, std::size_t reps);

// k distinct items drawn uniformly from [0, n), sorted.
std::vector<ItemIndex> random_subset(std::size_t n, std::size_t k, std::uint64_t seed);

enum class SubsetMethod { kSubsetRank, kConstrainedBeam, kBatchScoring };
std::string_view to_string(SubsetMethod m);

struct SubsetBenchOptions {
  std::vector<std::size_t> sizes = {100, 1000};
  std::vector<SubsetMethod> methods = {SubsetMethod::kSubsetRank, SubsetMethod::kConstrainedBeam,
                                       SubsetMethod::kBatchScoring};
  std::size_t warmup = 5;
  std::size_t reps = 30;
  SpecGRConfig config;  // K, delta, gamma and beta for every method
  std::uint64_t seed = 0;
};

struct SubsetBenchRow {
  std::size_t subset_size = 0;
  SubsetMethod method = SubsetMethod::kSubsetRank;
  LatencyStats latency;
  std::size_t contained = 0;  // requests whose output lay inside the subset
  std::size_t requests = 0;
};

// Request r uses case r mod |cases| and a subset seeded by (seed, size, r),
// identical across methods.
std::vector<SubsetBenchRow> bench_subset_latency(const Engine& engine, std::span<const ResolvedCase> cases,
                                                 const SubsetBenchOptions& options);

struct SweepRow {
  std::string parameter;  // gamma, delta or beta
  double value = 0.0;
  EvalReport report;
};

// Varies one of gamma, delta and beta at a time around `base`.
std::vector<SweepRow> sweep(const Engine& engine, std::span<const ResolvedCase> cases, const EvalOptions& base,
                            std::span<const double> gammas, std::span<const std::size_t> sizes);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_latency_csv(std::ostream& out, const std::vector<SubsetBenchRow>& rows);

}  // namespace specgr
