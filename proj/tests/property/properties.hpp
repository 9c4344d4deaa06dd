#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specgr::testing {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double seconds = 0.0;
};

// Runs every randomized invariant check. `scale` multiplies the case counts.
std::vector<PropertyResult> run_properties(std::uint64_t seed, double scale = 1.0);

}  // namespace specgr::testing
