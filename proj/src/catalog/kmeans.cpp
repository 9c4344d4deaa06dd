#include "specgr/kmeans.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstring>
#include <limits>
#include <random>
#include <string_view>
#include <unordered_set>

namespace specgr {
namespace {

double squared_distance(const float* a, const float* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double d = static_cast<double>(a[j]) - static_cast<double>(b[j]);
    acc += d * d;
  }
  return acc;
}

Matrix seed_plus_plus(const Matrix& points, std::size_t k, std::mt19937_64& rng) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  Matrix centroids(k, dim);

  std::size_t first = static_cast<std::size_t>(uniform_unit(rng) * n);
  centroids.row(0) = points.row(std::min(first, n - 1));

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(points.row(i).data(), centroids.row(0).data(), dim);
  }
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    if (!(total > 0.0)) {
      throw DataError("k-means++ seeding ran out of distinct points");
    }
    const double target = uniform_unit(rng) * total;
    double cum = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      cum += d2[i];
      pick = i;
      if (cum > target) break;
    }
    centroids.row(c) = points.row(pick);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i).data(), centroids.row(c).data(), dim));
    }
  }
  return centroids;
}

double assign_all(const Matrix& points, const Matrix& centroids,
                  std::vector<std::uint32_t>& assignment, std::vector<double>& dist) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double d = 0.0;
    assignment[i] = nearest_centroid(centroids, {points.row(i).data(), (std::size_t)points.cols()}, &d);
    dist[i] = d;
    inertia += d;
  }
  return inertia;
}

}  // namespace

std::uint32_t nearest_centroid(const Matrix& centroids, std::span<const float> point,
                               double* squared_dist) {
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_idx = 0;
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(centroids.row(c).data(), point.data(), point.size());
    if (d < best) {
      best = d;
      best_idx = static_cast<std::uint32_t>(c);
    }
  }
  if (squared_dist != nullptr) *squared_dist = best;
  return best_idx;
}

std::size_t count_distinct_rows(const Matrix& points) {
  std::unordered_set<std::string_view> seen;
  const std::size_t row_bytes = points.cols() * sizeof(float);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    seen.emplace(reinterpret_cast<const char*>(points.row(i).data()), row_bytes);
  }
  return seen.size();
}

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.cols();
  if (k == 0) throw UsageError("k-means needs k >= 1");
  if (!points.allFinite()) throw DataError("k-means input contains non-finite values");
  const std::size_t distinct = count_distinct_rows(points);
  if (distinct < k) {
    throw DataError(fmt::format("{} distinct points for {} clusters", distinct, k));
  }

  std::mt19937_64 rng(seed);
  KMeansResult result;
  result.centroids = seed_plus_plus(points, k, rng);
  result.assignment.assign(n, 0);
  std::vector<double> dist(n);
  double inertia = assign_all(points, result.centroids, result.assignment, dist);

  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t c = result.assignment[i];
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += points(i, j);
    }
    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < dim; ++j) {
          result.centroids(c, j) = static_cast<float>(sums[c * dim + j] / counts[c]);
        }
        continue;
      }
      // Empty cluster: move it onto the worst-served point.
      std::size_t worst = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i] && (worst == n || dist[i] > dist[worst])) worst = i;
      }
      taken[worst] = true;
      result.centroids.row(c) = points.row(worst);
    }
    const double next = assign_all(points, result.centroids, result.assignment, dist);
    const bool converged = inertia - next <= options.tolerance * inertia;
    inertia = next;
    result.iterations = iter;
    if (converged) break;
  }
  result.inertia = inertia;
  return result;
}

}  // namespace specgr
