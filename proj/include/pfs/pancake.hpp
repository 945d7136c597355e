#pragma once

#include <vector>

#include "pfs/domain.hpp"

namespace pfs {

/// Pancake sorting over a permutation of 1..n (top of the stack first).
/// Action k reverses the top k + 2 pancakes, so |A| = n - 1.
class PancakeDomain final : public Domain {
 public:
  explicit PancakeDomain(int count);

  std::string id() const override;
  int action_count() const override { return count_ - 1; }
  StateKey goal() const override { return goal_; }
  double heuristic(StateKey state) const override;
  void successors(StateKey state, std::vector<Transition>& out) const override;
  StateKey parse(std::string_view text) const override;
  std::string format(StateKey state) const override;

  int count() const { return count_; }

  std::vector<int> unpack(StateKey key) const;
  StateKey pack(const std::vector<int>& stack) const;
  StateKey flip(StateKey key, ActionIndex action) const;

  /// Gap heuristic: adjacent pairs differing by more than one, with a virtual
  /// pancake n + 1 under the stack.
  static int gaps(const std::vector<int>& stack);

 private:
  int count_;
  StateKey goal_;
};

}  // namespace pfs
