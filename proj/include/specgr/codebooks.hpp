#pragma once

#include "specgr/kmeans.hpp"
#include "specgr/token_layout.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace specgr {

// Residual k-means codebooks: level i clusters what is left after
// subtracting the chosen centroids of levels 0..i-1.
struct Codebooks {
  std::vector<Matrix> levels;
  // Mean squared norm of the residual after quantizing with levels 0..i,
  // measured on the fitting data.
  std::vector<double> residual_mse;

  std::size_t num_levels() const { return levels.size(); }
  std::size_t dim() const { return levels.empty() ? 0 : levels.front().cols(); }
  std::size_t codebook_size() const { return levels.empty() ? 0 : levels.front().rows(); }

  // Nearest-centroid codes on successive residuals (one digit per level).
  SemanticId quantize(std::span<const float> embedding) const;

  void save(std::ostream& out) const;
  static Codebooks load(std::istream& in);
};

Codebooks fit_codebooks(const Matrix& embeddings, std::size_t levels, std::size_t codebook_size,
                        std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace specgr
