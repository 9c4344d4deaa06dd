#include "specgr/split.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace specgr {

namespace {

// Users in first-appearance order, each with its interactions sorted by time.
std::vector<std::vector<const Interaction*>> group_by_user(const InteractionLog& log) {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::vector<const Interaction*>> users;
  for (const Interaction& r : log) {
    auto [it, fresh] = slot.try_emplace(r.user, users.size());
    if (fresh) users.emplace_back();
    users[it->second].push_back(&r);
  }
  for (auto& u : users) {
    std::stable_sort(u.begin(), u.end(), [](const Interaction* a, const Interaction* b) { return a->ts < b->ts; });
  }
  return users;
}

}  // namespace

TemporalSplit temporal_split(const InteractionLog& log, std::int64_t t_valid, std::int64_t t_test) {
  if (t_valid >= t_test) throw UsageError("t_valid must be earlier than t_test");
  TemporalSplit split;
  std::unordered_set<std::string> train_items;
  for (const Interaction& r : log) {
    if (r.ts < t_valid) {
      split.train.push_back(r);
      train_items.insert(r.item);
    }
  }
  for (const auto& events : group_by_user(log)) {
    for (std::size_t p = 1; p < events.size(); ++p) {
      const Interaction& r = *events[p];
      if (r.ts < t_valid) continue;
      EvalCase c;
      c.user = r.user;
      c.target = r.item;
      c.ts = r.ts;
      c.target_unseen = !train_items.contains(r.item);
      const std::size_t first = p > kMaxHistoryItems ? p - kMaxHistoryItems : 0;
      for (std::size_t q = first; q < p; ++q) c.history.push_back(events[q]->item);
      (r.ts < t_test ? split.valid : split.test).push_back(std::move(c));
    }
  }
  if (split.train.empty()) split.warnings.push_back("training split is empty");
  if (split.valid.empty()) split.warnings.push_back("validation split is empty");
  if (split.test.empty()) split.warnings.push_back("test split is empty");
  return split;
}

std::vector<std::vector<std::string>> user_sequences(const InteractionLog& log) {
  std::vector<std::vector<std::string>> out;
  for (const auto& events : group_by_user(log)) {
    auto& seq = out.emplace_back();
    for (const Interaction* r : events) seq.push_back(r->item);
  }
  return out;
}

}  // namespace specgr
