#include "reference_kmeans.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace specgr::testing {
namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double dist2(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = double(a[j]) - double(b[j]);
    s += d * d;
  }
  return s;
}

int nearest(const Rows& centroids, const std::vector<float>& p, double& best) {
  int arg = 0;
  best = INFINITY;
  for (int c = 0; c < (int)centroids.size(); ++c) {
    const double d = dist2(centroids[c], p);
    if (d < best) {
      best = d;
      arg = c;
    }
  }
  return arg;
}

}  // namespace

ReferenceKMeans reference_kmeans(const Rows& points, int k, std::uint64_t seed, int max_iter, double tol) {
  const int n = (int)points.size();
  std::mt19937_64 rng(seed);
  ReferenceKMeans r;

  // k-means++
  int first = std::min(n - 1, (int)(unit(rng) * n));
  r.centroids.push_back(points[first]);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = dist2(points[i], r.centroids[0]);
  while ((int)r.centroids.size() < k) {
    double total = 0.0;
    for (double v : d) total += v;
    if (total <= 0.0) throw std::runtime_error("not enough distinct points");
    const double target = unit(rng) * total;
    double cum = 0.0;
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (d[i] <= 0.0) continue;
      cum += d[i];
      pick = i;
      if (cum > target) break;
    }
    r.centroids.push_back(points[pick]);
    for (int i = 0; i < n; ++i) d[i] = std::min(d[i], dist2(points[i], r.centroids.back()));
  }

  r.labels.assign(n, 0);
  auto assign = [&] {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      r.labels[i] = nearest(r.centroids, points[i], d[i]);
      total += d[i];
    }
    return total;
  };
  r.inertia = assign();
  const int dim = (int)points[0].size();
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
    std::vector<int> cnt(k, 0);
    for (int i = 0; i < n; ++i) {
      cnt[r.labels[i]]++;
      for (int j = 0; j < dim; ++j) sum[r.labels[i]][j] += points[i][j];
    }
    std::vector<bool> used(n, false);
    for (int c = 0; c < k; ++c) {
      if (cnt[c]) {
        for (int j = 0; j < dim; ++j) r.centroids[c][j] = (float)(sum[c][j] / cnt[c]);
        continue;
      }
      int far = -1;
      for (int i = 0; i < n; ++i)
        if (!used[i] && (far < 0 || d[i] > d[far])) far = i;
      used[far] = true;
      r.centroids[c] = points[far];
    }
    const double next = assign();
    const bool done = r.inertia - next <= tol * r.inertia;
    r.inertia = next;
    if (done) break;
  }
  return r;
}

ReferenceCodebooks reference_codebooks(const Rows& points, int levels, int k, std::uint64_t seed) {
  ReferenceCodebooks out;
  Rows residual = points;
  out.codes.assign(points.size(), {});
  for (int level = 0; level < levels; ++level) {
    const std::uint64_t s = seed + 0x9E3779B97F4A7C15ull * (std::uint64_t)(level + 1);
    ReferenceKMeans km = reference_kmeans(residual, k, s);
    for (std::size_t i = 0; i < residual.size(); ++i) {
      const auto& c = km.centroids[km.labels[i]];
      for (std::size_t j = 0; j < c.size(); ++j) residual[i][j] -= c[j];
      out.codes[i].push_back(km.labels[i]);
    }
    out.residual_mse.push_back(km.inertia / (double)points.size());
    out.levels.push_back(std::move(km.centroids));
  }
  return out;
}

Rows random_unit_rows(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Rows rows(n, std::vector<float>(d));
  for (auto& row : rows) {
    double norm = 0.0;
    for (int j = 0; j < d; ++j) {
      const double u1 = 1.0 - unit(rng), u2 = unit(rng);
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      row[j] = (float)z;
      norm += z * z;
    }
    norm = std::sqrt(norm);
    for (float& v : row) v = (float)(v / norm);
  }
  return rows;
}

}  // namespace specgr::testing
