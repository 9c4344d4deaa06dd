#pragma once

#include <cstdint>
#include <vector>

namespace specgr::testing {

using Rows = std::vector<std::vector<float>>;

struct ReferenceKMeans {
  Rows centroids;
  std::vector<int> labels;
  double inertia = 0.0;
};

// Textbook Lloyd iterations with k-means++ seeding, written against plain
// vectors. Seeding draws from mt19937_64 the same way the library does, so
// both land in the same local optimum.
ReferenceKMeans reference_kmeans(const Rows& points, int k, std::uint64_t seed, int max_iter = 25,
                                 double tol = 1e-6);

struct ReferenceCodebooks {
  std::vector<Rows> levels;
  std::vector<double> residual_mse;
  std::vector<std::vector<int>> codes;  // [item][level]
};

ReferenceCodebooks reference_codebooks(const Rows& points, int levels, int k, std::uint64_t seed);

// n unit vectors of dimension d: Box-Muller normals from mt19937_64(seed),
// then scaled to length one.
Rows random_unit_rows(int n, int d, std::uint64_t seed);

}  // namespace specgr::testing
