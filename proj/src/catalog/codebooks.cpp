#include "specgr/codebooks.hpp"

#include "specgr/binary_io.hpp"
#include "specgr/errors.hpp"

#include <fmt/format.h>

namespace specgr {
namespace {

constexpr std::string_view kMagic = "SGRCODE1";

std::uint64_t level_seed(std::uint64_t seed, std::size_t level) {
  return seed + 0x9E3779B97F4A7C15ull * (level + 1);
}

}  // namespace

SemanticId Codebooks::quantize(std::span<const float> embedding) const {
  if (embedding.size() != dim()) {
    throw UsageError(fmt::format("embedding has {} dims, codebooks expect {}", embedding.size(), dim()));
  }
  std::vector<float> residual(embedding.begin(), embedding.end());
  SemanticId id;
  for (const Matrix& centroids : levels) {
    const std::uint32_t code = nearest_centroid(centroids, residual);
    for (std::size_t j = 0; j < residual.size(); ++j) residual[j] -= centroids(code, j);
    id.push_back(static_cast<std::uint16_t>(code));
  }
  return id;
}

Codebooks fit_codebooks(const Matrix& embeddings, std::size_t levels, std::size_t codebook_size,
                        std::uint64_t seed, const KMeansOptions& options) {
  if (levels < 1) throw UsageError("fit_codebooks needs at least one semantic level");
  if (codebook_size < 1 || codebook_size > kMaxLevelCodes) {
    throw UsageError(fmt::format("codebook_size must be in [1, {}]", kMaxLevelCodes));
  }
  if (static_cast<std::size_t>(embeddings.rows()) < codebook_size) {
    throw UsageError(fmt::format("{} embeddings for codebook_size {}", embeddings.rows(), codebook_size));
  }
  if (!embeddings.allFinite()) throw DataError("embeddings contain non-finite values");

  Codebooks books;
  Matrix residual = embeddings;
  for (std::size_t level = 0; level < levels; ++level) {
    KMeansResult km;
    try {
      km = kmeans(residual, codebook_size, level_seed(seed, level), options);
    } catch (const DataError& e) {
      throw DataError(fmt::format("codebook level {}: {}", level + 1, e.what()));
    }
    for (Eigen::Index i = 0; i < residual.rows(); ++i) {
      residual.row(i) -= km.centroids.row(km.assignment[i]);
    }
    books.residual_mse.push_back(km.inertia / static_cast<double>(residual.rows()));
    books.levels.push_back(std::move(km.centroids));
  }
  return books;
}

void Codebooks::save(std::ostream& out) const {
  nlohmann::json header = {{"levels", num_levels()},
                           {"codebook_size", codebook_size()},
                           {"dim", dim()},
                           {"residual_mse", residual_mse}};
  io::write_preamble(out, kMagic, header);
  for (const Matrix& m : levels) io::write_array(out, m.data(), m.size());
}

Codebooks Codebooks::load(std::istream& in) {
  const auto header = io::read_preamble(in, kMagic);
  Codebooks books;
  const auto levels = header.at("levels").get<std::size_t>();
  const auto size = header.at("codebook_size").get<std::size_t>();
  const auto dim = header.at("dim").get<std::size_t>();
  books.residual_mse = header.at("residual_mse").get<std::vector<double>>();
  for (std::size_t l = 0; l < levels; ++l) {
    Matrix m(size, dim);
    io::read_array(in, m.data(), m.size());
    books.levels.push_back(std::move(m));
  }
  return books;
}

}  // namespace specgr
