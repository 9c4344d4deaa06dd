#include "specgr/prefix_trie.hpp"

#include <algorithm>

namespace specgr {
namespace {

void insert_sorted(std::vector<ItemIndex>& items, ItemIndex item) {
  if (items.empty() || items.back() < item) {
    items.push_back(item);
    return;
  }
  auto it = std::lower_bound(items.begin(), items.end(), item);
  if (it == items.end() || *it != item) items.insert(it, item);
}

}  // namespace

PrefixTrie::PrefixTrie() : nodes_(1) {}

void PrefixTrie::insert(const SemanticId& id, ItemIndex item) {
  NodeId node = kRoot;
  insert_sorted(nodes_[node].items, item);
  for (std::uint16_t code : id.digits()) {
    auto& kids = nodes_[node].children;
    auto it = std::lower_bound(kids.begin(), kids.end(), code,
                               [](const auto& kv, std::uint16_t c) { return kv.first < c; });
    NodeId next;
    if (it != kids.end() && it->first == code) {
      next = it->second;
    } else {
      next = static_cast<NodeId>(nodes_.size());
      kids.insert(it, {code, next});
      nodes_.emplace_back();  // invalidates `kids`
    }
    node = next;
    insert_sorted(nodes_[node].items, item);
  }
}

std::optional<PrefixTrie::NodeId> PrefixTrie::child(NodeId node, std::uint16_t code) const {
  const auto& kids = nodes_[node].children;
  auto it = std::lower_bound(kids.begin(), kids.end(), code,
                             [](const auto& kv, std::uint16_t c) { return kv.first < c; });
  if (it == kids.end() || it->first != code) return std::nullopt;
  return it->second;
}

std::optional<PrefixTrie::NodeId> PrefixTrie::find(std::span<const std::uint16_t> prefix) const {
  NodeId node = kRoot;
  for (std::uint16_t code : prefix) {
    auto next = child(node, code);
    if (!next) return std::nullopt;
    node = *next;
  }
  return node;
}

std::span<const ItemIndex> PrefixTrie::items_with_prefix(std::span<const std::uint16_t> prefix) const {
  auto node = find(prefix);
  if (!node) return {};
  return nodes_[*node].items;
}

}  // namespace specgr
