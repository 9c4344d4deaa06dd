// Runs the reference residual k-means once and prints the values that the
// catalog tests compare against. Output goes to tests/golden/.
#include "reference_kmeans.hpp"

#include <json.hpp>

#include <iostream>

int main() {
  using namespace specgr::testing;
  const auto rows = random_unit_rows(256, 16, 7);
  const auto books = reference_codebooks(rows, 3, 32, 7);
  double centroid_sum = 0.0;
  for (const auto& level : books.levels)
    for (const auto& c : level)
      for (float v : c) centroid_sum += v;
  nlohmann::json j = {{"points", 256},     {"dim", 16},
                      {"levels", 3},       {"codebook_size", 32},
                      {"seed", 7},         {"residual_mse", books.residual_mse},
                      {"codes", books.codes}, {"centroid_sum", centroid_sum}};
  std::cout << j.dump() << "\n";
}
