#include "specgr/synthetic.hpp"

#include "specgr/errors.hpp"
#include "specgr/kmeans.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

namespace specgr {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXf random_unit(Rng& rng, std::size_t dim) {
  std::normal_distribution<float> normal;
  Eigen::VectorXf v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = normal(rng);
  return v.normalized();
}

std::size_t pick(Rng& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(n)));
}

std::size_t pick_weighted(Rng& rng, const std::vector<double>& cumulative) {
  const double u = uniform_unit(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticOptions& o) {
  if (o.num_items == 0 || o.num_users == 0 || o.dim == 0 || o.clusters == 0 || o.subclusters == 0) {
    throw UsageError("synthetic sizes must be positive");
  }
  if (o.min_length < 2 || o.max_length < o.min_length) throw UsageError("bad synthetic sequence lengths");
  if (!(o.valid_at > 0.0 && o.valid_at < o.test_at && o.test_at < 1.0)) {
    throw UsageError("synthetic cut-offs must satisfy 0 < valid_at < test_at < 1");
  }
  Rng rng(o.seed);
  SyntheticData data;
  const auto h = static_cast<double>(o.horizon);
  data.t_valid = static_cast<std::int64_t>(o.valid_at * h);
  data.t_test = static_cast<std::int64_t>(o.test_at * h);

  std::vector<Eigen::VectorXf> centers, subs;
  for (std::size_t c = 0; c < o.clusters; ++c) centers.push_back(random_unit(rng, o.dim));
  for (std::size_t s = 0; s < o.clusters * o.subclusters; ++s) subs.push_back(random_unit(rng, o.dim));

  const std::size_t n = o.num_items;
  const std::size_t num_new = static_cast<std::size_t>(std::floor(o.new_item_fraction * static_cast<double>(n)));
  data.embeddings.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(o.dim));
  data.is_new.assign(n, false);
  std::vector<std::size_t> cluster_of(n), sub_of(n);
  std::vector<std::int64_t> release(n, 0);
  std::vector<std::vector<std::size_t>> old_in(o.clusters), new_in(o.clusters);
  std::vector<std::vector<std::size_t>> old_in_sub(o.clusters * o.subclusters);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = pick(rng, o.clusters);
    const std::size_t s = c * o.subclusters + pick(rng, o.subclusters);
    cluster_of[i] = c;
    sub_of[i] = s;
    const Eigen::VectorXf e =
        centers[c] + o.subcluster_scale * subs[s] + o.noise * random_unit(rng, o.dim);
    data.embeddings.row(static_cast<Eigen::Index>(i)) = e.transpose();
    data.item_ids.push_back(fmt::format("item{:05d}", i));
  }
  // The last items are the late releases; ids carry no hint of that.
  for (std::size_t i = n - num_new; i < n; ++i) {
    data.is_new[i] = true;
    release[i] = data.t_valid + static_cast<std::int64_t>(uniform_unit(rng) * (o.test_at - o.valid_at) * h);
    new_in[cluster_of[i]].push_back(i);
  }
  for (std::size_t i = 0; i < n - num_new; ++i) {
    old_in[cluster_of[i]].push_back(i);
    old_in_sub[sub_of[i]].push_back(i);
  }

  // Zipf popularity over a random order of each cluster's old items.
  std::vector<std::vector<double>> popularity(o.clusters);
  for (std::size_t c = 0; c < o.clusters; ++c) {
    std::shuffle(old_in[c].begin(), old_in[c].end(), rng);
    double acc = 0.0;
    for (std::size_t r = 0; r < old_in[c].size(); ++r) {
      acc += 1.0 / std::pow(static_cast<double>(r + 1), o.zipf);
      popularity[c].push_back(acc);
    }
  }
  // Companion: another old item from the same subcluster, else the cluster.
  std::vector<std::size_t> companion(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pool = old_in_sub[sub_of[i]].size() > 1 ? old_in_sub[sub_of[i]] : old_in[cluster_of[i]];
    std::size_t j = pool.empty() ? i : pool[pick(rng, pool.size())];
    if (j == i && pool.size() > 1) j = pool[(std::find(pool.begin(), pool.end(), i) - pool.begin() + 1) % pool.size()];
    companion[i] = j;
  }

  auto choose_in_cluster = [&](std::size_t c, std::int64_t t) -> std::optional<std::size_t> {
    std::vector<std::size_t> released;
    for (std::size_t i : new_in[c]) {
      if (release[i] <= t) released.push_back(i);
    }
    if (!released.empty() && uniform_unit(rng) < o.new_item_pull) return released[pick(rng, released.size())];
    if (old_in[c].empty()) return std::nullopt;
    return old_in[c][pick_weighted(rng, popularity[c])];
  };

  for (std::size_t u = 0; u < o.num_users; ++u) {
    const std::string user = fmt::format("user{:05d}", u);
    const std::size_t len = o.min_length + pick(rng, o.max_length - o.min_length + 1);
    std::vector<std::int64_t> times(len);
    for (auto& t : times) t = static_cast<std::int64_t>(uniform_unit(rng) * h);
    std::sort(times.begin(), times.end());
    std::size_t cluster = pick(rng, o.clusters);
    std::optional<std::size_t> prev;
    for (std::size_t k = 0; k < len; ++k) {
      std::optional<std::size_t> item;
      if (prev && uniform_unit(rng) < o.companion) {
        item = companion[*prev];
        cluster = cluster_of[*item];
      } else {
        if (prev && uniform_unit(rng) >= o.stay) cluster = (cluster + 1 + pick(rng, 2)) % o.clusters;
        item = choose_in_cluster(cluster, times[k]);
      }
      if (!item) continue;
      data.log.push_back({user, data.item_ids[*item], times[k]});
      prev = item;
    }
  }
  std::stable_sort(data.log.begin(), data.log.end(),
                   [](const Interaction& a, const Interaction& b) { return a.ts < b.ts; });
  return data;
}

}  // namespace specgr
