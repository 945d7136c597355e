#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "pfs/node_table.hpp"

namespace pfs {

inline constexpr double kBoundTolerance = 1e-9;

struct QueueEntry {
  double f;
  double g;
  double key;
  std::uint64_t seq;
  NodeId node;
  std::uint32_t stamp;
};

/// OPEN, FOCAL and the f-ordered index of OPEN members waiting outside FOCAL.
///
/// Entries are never removed from the heaps directly: each insertion stamps the
/// node, and entries whose stamp no longer matches are dropped when they reach
/// the top. FOCAL holds exactly the live OPEN members with f <= bound().
class FocalQueues {
 public:
  explicit FocalQueues(double initial_bound = 0.0) : bound_(initial_bound) {}

  /// (Re)inserts a node into OPEN, superseding any earlier entry for it.
  void insert(NodeId node, double f, double g, double key, std::uint64_t seq);
  void remove(NodeId node);
  bool contains(NodeId node) const { return node < live_.size() && live_[node] != 0; }
  bool in_focal(NodeId node) const { return contains(node) && focal_flag_[node]; }

  std::optional<QueueEntry> open_top();
  /// Extracts the FOCAL minimum and removes it from OPEN.
  std::optional<QueueEntry> pop_focal();

  /// Moves every OPEN member with bound() < f <= new_bound into FOCAL. The
  /// bound never shrinks; smaller values are ignored.
  void update_lower_bound(double new_bound);

  double bound() const { return bound_; }
  std::size_t open_size() const { return live_count_; }
  bool empty() const { return live_count_ == 0; }

  std::uint64_t stale_open_pops() const { return stale_open_pops_; }
  std::uint64_t stale_focal_pops() const { return stale_focal_pops_; }
  std::uint64_t moved_to_focal() const { return moved_; }

 private:
  struct OpenWorse {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return a.seq > b.seq;
    }
  };
  struct FocalWorse {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (a.key != b.key) return a.key > b.key;
      if (a.f != b.f) return a.f > b.f;
      if (a.g != b.g) return a.g < b.g;
      return a.seq > b.seq;
    }
  };
  struct PendingWorse {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (a.f != b.f) return a.f > b.f;
      return a.seq > b.seq;
    }
  };

  bool live(const QueueEntry& e) const { return contains(e.node) && live_[e.node] == e.stamp; }

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, OpenWorse> open_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, FocalWorse> focal_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, PendingWorse> pending_;
  std::vector<std::uint32_t> live_;  // current stamp per node, 0 when not in OPEN
  std::vector<char> focal_flag_;
  std::uint32_t next_stamp_ = 1;
  std::size_t live_count_ = 0;
  double bound_;
  std::uint64_t stale_open_pops_ = 0;
  std::uint64_t stale_focal_pops_ = 0;
  std::uint64_t moved_ = 0;
};

}  // namespace pfs
