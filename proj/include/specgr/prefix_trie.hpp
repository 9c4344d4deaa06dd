#pragma once

#include "specgr/token_layout.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace specgr {

// Prefix tree over semantic-id digit strings. Every node keeps the sorted
// list of items underneath it, so a prefix lookup is one walk from the root.
class PrefixTrie {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kRoot = 0;

  PrefixTrie();

  void insert(const SemanticId& id, ItemIndex item);

  // Node reached by following `prefix`, or nullopt if no item has it.
  std::optional<NodeId> find(std::span<const std::uint16_t> prefix) const;
  std::optional<NodeId> child(NodeId node, std::uint16_t code) const;

  // Sorted (code, child) pairs below `node`.
  std::span<const std::pair<std::uint16_t, NodeId>> children(NodeId node) const {
    return nodes_[node].children;
  }
  // Items below `node`, ascending.
  std::span<const ItemIndex> items(NodeId node) const { return nodes_[node].items; }

  // Items whose id starts with `prefix`; empty span when there are none.
  std::span<const ItemIndex> items_with_prefix(std::span<const std::uint16_t> prefix) const;

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_items() const { return nodes_[kRoot].items.size(); }

 private:
  struct Node {
    std::vector<std::pair<std::uint16_t, NodeId>> children;
    std::vector<ItemIndex> items;
  };
  std::vector<Node> nodes_;
};

}  // namespace specgr
