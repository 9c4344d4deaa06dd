#pragma once

#include "specgr/interaction_log.hpp"
#include "specgr/token_layout.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specgr {

// Seeded toy world. Items sit in a cluster / subcluster hierarchy of
// embeddings. Users drift between clusters, often follow a fixed
// "companion" of their previous item, and pick items by a Zipf popularity
// inside the cluster. Some items are only released after t_valid and are
// favoured once out, so the later periods contain many unseen targets.
struct SyntheticOptions {
  std::size_t num_items = 2000;
  std::size_t num_users = 2000;
  std::size_t dim = 32;
  std::size_t clusters = 8;
  std::size_t subclusters = 8;     // per cluster
  double subcluster_scale = 0.6;   // subcluster offset relative to the cluster centre
  double noise = 0.25;             // item offset relative to its subcluster
  double new_item_fraction = 0.12;
  std::size_t min_length = 8;
  std::size_t max_length = 20;
  double stay = 0.9;        // keep the current cluster
  double companion = 0.5;   // jump to the previous item's companion
  double new_item_pull = 0.65;  // pick a released new item when the cluster has one
  double zipf = 1.2;
  std::int64_t horizon = 1000 * 86400;
  double valid_at = 0.8;  // fractions of the horizon
  double test_at = 0.9;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  std::vector<std::string> item_ids;
  Matrix embeddings;  // unnormalized rows
  std::vector<bool> is_new;
  InteractionLog log;  // sorted by timestamp
  std::int64_t t_valid = 0;
  std::int64_t t_test = 0;
};

SyntheticData generate_synthetic(const SyntheticOptions& options);

}  // namespace specgr
