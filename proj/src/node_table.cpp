#include "pfs/node_table.hpp"

#include <algorithm>

#include "pfs/errors.hpp"

namespace pfs {

NodeId NodeTable::add(const NodeRecord& record) {
  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(record);
  index_.emplace(record.state, id);
  return id;
}

std::vector<PathStep> reconstruct_path(const NodeTable& nodes, NodeId terminal) {
  std::vector<PathStep> path;
  NodeId cur = terminal;
  while (cur != kNoNode) {
    if (cur >= nodes.size())
      throw CorruptionError("parent link points outside the node table (id " +
                            std::to_string(cur) + ")");
    if (path.size() > nodes.size())
      throw CorruptionError("parent chain longer than the node table: cycle");
    const NodeRecord& n = nodes[cur];
    path.push_back({n.state, n.action});
    if (n.parent == kNoNode && n.action != kNoAction)
      throw CorruptionError("node with an incoming action has no parent");
    cur = n.parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace pfs
