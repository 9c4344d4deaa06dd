#include "specgr/drafter.hpp"
#include "specgr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace specgr {

PrefixSet::PrefixSet(std::span<const SemanticId> prefixes) : prefixes_(prefixes.begin(), prefixes.end()) {
  if (!prefixes_.empty()) length_ = prefixes_.front().size();
  for (const SemanticId& p : prefixes_) {
    if (p.size() != length_) throw UsageError("prefix set entries must have equal length");
  }
  std::sort(prefixes_.begin(), prefixes_.end());
  prefixes_.erase(std::unique(prefixes_.begin(), prefixes_.end()), prefixes_.end());
}

PrefixSet PrefixSet::from_beams(std::span<const Beam> beams) {
  std::vector<SemanticId> p;
  p.reserve(beams.size());
  for (const Beam& b : beams) p.push_back(b.prefix);
  return PrefixSet(p);
}

bool PrefixSet::contains(const SemanticId& id) const {
  if (id.size() < length_) return false;
  return std::binary_search(prefixes_.begin(), prefixes_.end(), id.prefix(length_));
}

DraftStream::DraftStream(const DraftIndex& index, const Catalog& catalog, std::span<const float> query,
                         std::span<const ItemIndex> exclude,
                         std::optional<std::span<const ItemIndex>> subset)
    : catalog_(catalog) {
  const std::size_t n = catalog.size();
  if (index.size() != n) throw UsageError("draft index is out of sync with the catalog");
  if (query.size() != index.dim()) throw UsageError("query dimension does not match the draft index");
  sims_.assign(n, 0.0f);
  state_.assign(n, subset ? kIneligible : kOpen);
  if (subset) {
    for (ItemIndex i : *subset) {
      if (i >= n) throw UsageError(fmt::format("subset item {} is not in the catalog", i));
      state_[i] = kOpen;
    }
  }
  for (ItemIndex i : exclude) {
    if (i < n) state_[i] = kIneligible;
  }

  // Plain per-row dot products, so a subset run ranks its items exactly
  // like the unrestricted run.
  const Eigen::Map<const Eigen::RowVectorXf> q(query.data(), static_cast<Eigen::Index>(query.size()));
  ranking_.reserve(subset ? subset->size() : n);
  for (ItemIndex i = 0; i < n; ++i) {
    if (state_[i] != kOpen) continue;
    sims_[i] = index.rows().row(i).dot(q);
    ranking_.push_back({sims_[i], i});
  }
}

void DraftStream::sort_prefix(std::size_t n) {
  n = std::min(n, ranking_.size());
  if (n <= sorted_) return;
  const std::size_t upto = std::min(ranking_.size(), std::max({n, 2 * sorted_, std::size_t{256}}));
  auto first = ranking_.begin() + static_cast<std::ptrdiff_t>(sorted_);
  auto mid = ranking_.begin() + static_cast<std::ptrdiff_t>(upto);
  if (mid != ranking_.end()) std::nth_element(first, mid, ranking_.end(), before);
  std::sort(first, mid, before);
  sorted_ = upto;
}

std::vector<ItemIndex> DraftStream::scan(std::size_t count, const PrefixSet* prefixes) {
  std::vector<ItemIndex> out;
  std::size_t pos = cursor_;
  bool contiguous = true;
  while (out.size() < count && pos < ranking_.size()) {
    if (pos >= sorted_) sort_prefix(pos + 1);
    const ItemIndex item = ranking_[pos].item;
    if (state_[item] == kOpen) {
      if (prefixes == nullptr || prefixes->contains(catalog_.semantic_id(item))) {
        state_[item] = kYielded;
        out.push_back(item);
      } else {
        contiguous = false;
      }
    }
    ++pos;
    if (contiguous) cursor_ = pos;
  }
  return out;
}

std::vector<ItemIndex> DraftStream::gather(std::size_t count, const PrefixSet& prefixes) {
  std::vector<Entry> found;
  for (const SemanticId& p : prefixes.prefixes()) {
    for (ItemIndex item : catalog_.items_with_prefix(p.digits())) {
      if (state_[item] == kOpen) found.push_back({sims_[item], item});
    }
  }
  const std::size_t keep = std::min(count, found.size());
  std::partial_sort(found.begin(), found.begin() + static_cast<std::ptrdiff_t>(keep), found.end(), before);
  std::vector<ItemIndex> out;
  out.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    state_[found[k].item] = kYielded;
    out.push_back(found[k].item);
  }
  return out;
}

std::vector<ItemIndex> DraftStream::next_batch(std::size_t count, const PrefixSet* prefixes) {
  if (count == 0) return {};
  std::vector<ItemIndex> out;
  if (prefixes != nullptr && prefixes->length() > 0) {
    if (prefixes->size() == 0) return {};
    std::size_t candidates = 0;
    for (const SemanticId& p : prefixes->prefixes()) candidates += catalog_.items_with_prefix(p.digits()).size();
    out = candidates < ranking_.size() - cursor_ ? gather(count, *prefixes) : scan(count, prefixes);
  } else {
    out = scan(count, nullptr);
  }
  num_yielded_ += out.size();
  return out;
}

}  // namespace specgr
