#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pfs/domain.hpp"
#include "pfs/focal_heuristics.hpp"

namespace pfs {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct NodeRecord {
  StateKey state = 0;
  double g = 0.0;
  double h = 0.0;
  double f = 0.0;
  NodeId parent = kNoNode;
  ActionIndex action = kNoAction;  // action applied at the parent
  FocalAnnotation annotation;
  std::uint64_t fifo_seq = 0;
};

/// Authoritative per-state bookkeeping for one search run.
class NodeTable {
 public:
  NodeTable() { index_.reserve(1024); }

  std::optional<NodeId> find(StateKey state) const {
    auto it = index_.find(state);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  NodeId add(const NodeRecord& record);

  NodeRecord& operator[](NodeId id) { return nodes_[id]; }
  const NodeRecord& operator[](NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<NodeRecord> nodes_;
  std::unordered_map<StateKey, NodeId> index_;
};

struct PathStep {
  StateKey state;
  ActionIndex action;  // action that produced `state`; kNoAction for the start
};

/// Follows parent links from `terminal` back to the start. Throws
/// CorruptionError on a dangling link or a cycle.
std::vector<PathStep> reconstruct_path(const NodeTable& nodes, NodeId terminal);

}  // namespace pfs
