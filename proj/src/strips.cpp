#include "pfs/strips.hpp"

#include <limits>
#include <stdexcept>

namespace pfs {

GroundedStrips::GroundedStrips(std::vector<std::string> propositions,
                               std::vector<StripsAction> actions)
    : propositions_(std::move(propositions)), actions_(std::move(actions)) {
  std::vector<std::vector<int>> consumers(propositions_.size());
  for (int a = 0; a < action_count(); ++a) {
    for (int p : actions_[a].pre) {
      if (p < 0 || p >= proposition_count())
        throw std::invalid_argument("precondition index out of range in " + actions_[a].name);
      consumers[p].push_back(a);
    }
    for (int p : actions_[a].add) {
      if (p < 0 || p >= proposition_count())
        throw std::invalid_argument("add effect index out of range in " + actions_[a].name);
    }
  }
  consumer_start_.push_back(0);
  for (const auto& list : consumers) {
    consumer_list_.insert(consumer_list_.end(), list.begin(), list.end());
    consumer_start_.push_back(static_cast<int>(consumer_list_.size()));
  }
  add_start_.push_back(0);
  for (const auto& action : actions_) {
    add_list_.insert(add_list_.end(), action.add.begin(), action.add.end());
    add_start_.push_back(static_cast<int>(add_list_.size()));
    pre_count_.push_back(static_cast<int>(action.pre.size()));
  }
}

bool GroundedStrips::applicable(int a, const std::vector<bool>& state) const {
  for (int p : actions_[a].pre) {
    if (!state[p]) return false;
  }
  return true;
}

std::vector<bool> GroundedStrips::apply(int a, const std::vector<bool>& state) const {
  std::vector<bool> next = state;
  for (int p : actions_[a].del) next[p] = false;
  for (int p : actions_[a].add) next[p] = true;
  return next;
}

double GroundedStrips::hmax(const std::vector<bool>& state, const std::vector<int>& goal) const {
  // Unit costs let a FIFO queue settle propositions in nondecreasing cost order.
  // An action fires when its last precondition settles, and that one carries
  // the maximum precondition cost.
  constexpr int kUnreached = std::numeric_limits<int>::max();
  thread_local std::vector<int> cost;
  thread_local std::vector<int> pending;
  thread_local std::vector<int> queue;
  thread_local std::vector<char> is_goal;

  const int props = proposition_count();
  cost.assign(props, kUnreached);
  is_goal.assign(props, 0);
  pending = pre_count_;
  queue.clear();

  int goals_left = 0;
  for (int p : goal) {
    if (!is_goal[p]) {
      is_goal[p] = 1;
      ++goals_left;
    }
  }
  for (int p = 0; p < props; ++p) {
    if (state[p]) {
      cost[p] = 0;
      queue.push_back(p);
    }
  }
  // Actions without preconditions fire from the start.
  for (std::size_t a = 0; a < actions_.size(); ++a) {
    if (pending[a] != 0) continue;
    for (int k = add_start_[a]; k < add_start_[a + 1]; ++k) {
      const int q = add_list_[k];
      if (cost[q] == kUnreached) {
        cost[q] = 1;
        queue.push_back(q);
      }
    }
  }

  int result = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int p = queue[head];
    if (is_goal[p]) {
      result = cost[p];
      if (--goals_left == 0) return result;
    }
    for (int k = consumer_start_[p]; k < consumer_start_[p + 1]; ++k) {
      const int a = consumer_list_[k];
      if (--pending[a] != 0) continue;
      for (int j = add_start_[a]; j < add_start_[a + 1]; ++j) {
        const int q = add_list_[j];
        if (cost[q] == kUnreached) {
          cost[q] = cost[p] + 1;
          queue.push_back(q);
        }
      }
    }
  }
  return goals_left == 0 ? result : std::numeric_limits<double>::infinity();
}

}  // namespace pfs
