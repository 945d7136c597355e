#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pfs/domain.hpp"
#include "pfs/strips.hpp"

namespace pfs {

/// Blocksworld configuration. below[b] is the block under b, or kTable / kHeld.
struct BlocksState {
  static constexpr std::uint8_t kTable = 14;
  static constexpr std::uint8_t kHeld = 15;

  int count = 0;
  std::array<std::uint8_t, 16> below{};

  std::optional<int> holding() const;
  bool clear(int block) const;
};

/// Four-operator blocksworld (pick-up, put-down, stack, unstack) over B blocks
/// named b1..bB. The goal is a single tower with b1 on the table and b(i+1) on
/// b(i). Action indices:
///   pick-up(b)      b
///   put-down(b)     B + b
///   stack(b, c)     2B + b(B-1) + c'     (c' skips b)
///   unstack(b, c)   2B + B(B-1) + b(B-1) + c'
/// giving 2B^2 actions (128 for B = 8). Text form is one line per block,
/// "on bX bY", "on bX table" or "holding bX"; ';' also separates lines.
class BlocksDomain final : public Domain {
 public:
  explicit BlocksDomain(int count);

  std::string id() const override;
  int action_count() const override { return 2 * count_ * count_; }
  StateKey goal() const override { return goal_; }
  double heuristic(StateKey state) const override;
  void successors(StateKey state, std::vector<Transition>& out) const override;
  StateKey parse(std::string_view text) const override;
  std::string format(StateKey state) const override;

  int count() const { return count_; }
  const GroundedStrips& strips() const { return strips_; }
  const std::vector<int>& goal_propositions() const { return goal_props_; }

  BlocksState unpack(StateKey key) const;
  StateKey pack(const BlocksState& state) const;
  std::vector<bool> propositions(const BlocksState& state) const;

  ActionIndex pick_up(int b) const { return b; }
  ActionIndex put_down(int b) const { return count_ + b; }
  ActionIndex stack(int b, int c) const { return 2 * count_ + b * (count_ - 1) + skip(b, c); }
  ActionIndex unstack(int b, int c) const {
    return 2 * count_ + count_ * (count_ - 1) + b * (count_ - 1) + skip(b, c);
  }

  int prop_on(int b, int c) const { return b * (count_ - 1) + skip(b, c); }
  int prop_ontable(int b) const { return count_ * (count_ - 1) + b; }
  int prop_clear(int b) const { return count_ * (count_ - 1) + count_ + b; }
  int prop_holding(int b) const { return count_ * (count_ - 1) + 2 * count_ + b; }
  int prop_handempty() const { return count_ * (count_ - 1) + 3 * count_; }

  /// Forest check: no cycles, at most one block on each block, at most one held.
  static bool valid(const BlocksState& state);

 private:
  static int skip(int b, int c) { return c < b ? c : c - 1; }
  GroundedStrips build_strips() const;

  int count_;
  GroundedStrips strips_;
  StateKey goal_;
  std::vector<int> goal_props_;
};

}  // namespace pfs
