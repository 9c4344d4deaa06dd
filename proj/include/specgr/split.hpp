#pragma once

#include "specgr/interaction_log.hpp"
#include "specgr/token_sequence.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specgr {

struct EvalCase {
  std::string user;
  std::vector<std::string> history;  // chronological, at most kMaxHistoryItems
  std::string target;
  std::int64_t ts = 0;
  bool target_unseen = false;  // target never occurs in the training interactions
};

struct TemporalSplit {
  InteractionLog train;  // ts < t_valid
  std::vector<EvalCase> valid;  // t_valid <= target ts < t_test
  std::vector<EvalCase> test;   // target ts >= t_test
  std::vector<std::string> warnings;
};

// Per user, interactions are ordered by timestamp (stable for ties). Every
// interaction at or after t_valid with at least one earlier interaction
// becomes a case whose history is everything before it.
TemporalSplit temporal_split(const InteractionLog& log, std::int64_t t_valid, std::int64_t t_test);

// Chronological item sequences of each user, users in order of first
// appearance in the log.
std::vector<std::vector<std::string>> user_sequences(const InteractionLog& log);

}  // namespace specgr
