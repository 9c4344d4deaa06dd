#pragma once

#include "specgr/token_layout.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace specgr {

struct KMeansOptions {
  std::size_t max_iterations = 25;
  // Stop once the relative inertia improvement of one Lloyd step falls to or
  // below this value.
  double tolerance = 1e-6;
};

struct KMeansResult {
  Matrix centroids;
  std::vector<std::uint32_t> assignment;
  double inertia = 0.0;  // sum of squared distances to assigned centroids
  std::size_t iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed seed.
// Requires at least k distinct rows (throws DataError otherwise).
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

// Index of the closest centroid row; ties go to the lower index.
std::uint32_t nearest_centroid(const Matrix& centroids, std::span<const float> point,
                               double* squared_distance = nullptr);

std::size_t count_distinct_rows(const Matrix& points);

// Uniform double in [0, 1) built from the top 53 bits of a 64-bit draw, so
// seeded streams are identical across standard library implementations.
template <typename Engine>
double uniform_unit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace specgr
