#include "pfs/focal_queues.hpp"

namespace pfs {

void FocalQueues::insert(NodeId node, double f, double g, double key, std::uint64_t seq) {
  if (node >= live_.size()) {
    live_.resize(node + 1, 0);
    focal_flag_.resize(node + 1, 0);
  }
  if (live_[node] == 0) ++live_count_;
  const std::uint32_t stamp = next_stamp_++;
  live_[node] = stamp;
  QueueEntry e{f, g, key, seq, node, stamp};
  open_.push(e);
  if (f <= bound_ + kBoundTolerance) {
    focal_.push(e);
    focal_flag_[node] = 1;
  } else {
    pending_.push(e);
    focal_flag_[node] = 0;
  }
}

void FocalQueues::remove(NodeId node) {
  if (!contains(node)) return;
  live_[node] = 0;
  focal_flag_[node] = 0;
  --live_count_;
}

std::optional<QueueEntry> FocalQueues::open_top() {
  while (!open_.empty()) {
    if (live(open_.top())) return open_.top();
    open_.pop();
    ++stale_open_pops_;
  }
  return std::nullopt;
}

std::optional<QueueEntry> FocalQueues::pop_focal() {
  while (!focal_.empty()) {
    QueueEntry e = focal_.top();
    focal_.pop();
    if (live(e)) {
      remove(e.node);
      return e;
    }
    ++stale_focal_pops_;
  }
  return std::nullopt;
}

void FocalQueues::update_lower_bound(double new_bound) {
  if (new_bound <= bound_) return;
  // Pending entries all have f > the old bound, so draining the f-ordered
  // index up to the new bound visits exactly the half-open range.
  while (!pending_.empty() && pending_.top().f <= new_bound + kBoundTolerance) {
    QueueEntry e = pending_.top();
    pending_.pop();
    if (!live(e)) continue;
    focal_.push(e);
    focal_flag_[e.node] = 1;
    ++moved_;
  }
  bound_ = new_bound;
}

}  // namespace pfs
