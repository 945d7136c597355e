#pragma once

#include "pfs/domain.hpp"

namespace pfs {

/// A corridor 0..length where exactly one of `arms` actions advances at each
/// state (action i mod arms at state i) and every other action steps back.
/// Used to study how per-step policy accuracy compounds over long unrolls.
class ChainDomain final : public Domain {
 public:
  ChainDomain(int length, int arms);

  std::string id() const override;
  int action_count() const override { return arms_; }
  StateKey goal() const override { return static_cast<StateKey>(length_); }
  double heuristic(StateKey state) const override;
  void successors(StateKey state, std::vector<Transition>& out) const override;
  void predecessors(StateKey state, std::vector<Transition>& out) const override;
  StateKey parse(std::string_view text) const override;
  std::string format(StateKey state) const override;

  ActionIndex advancing_action(StateKey state) const {
    return static_cast<ActionIndex>(state % static_cast<StateKey>(arms_));
  }

 private:
  int length_;
  int arms_;
};

}  // namespace pfs
