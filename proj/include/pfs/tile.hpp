#pragma once

#include <array>
#include <cstdint>

#include "pfs/domain.hpp"

namespace pfs {

/// Unpacked sliding-tile board. cells[c] is the tile at cell c, 0 is the blank.
struct TileState {
  int size = 0;  // board width N
  std::array<std::uint8_t, 16> cells{};
  int blank = 0;

  int cell_count() const { return size * size; }
};

/// N x N sliding-tile puzzle (N = 3 or 4). Goal has the blank at cell 0 and
/// tiles 1..N*N-1 in reading order. Actions move the blank:
/// Up = 0, Down = 1, Left = 2, Right = 3.
class TileDomain final : public Domain {
 public:
  enum Move : ActionIndex { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

  explicit TileDomain(int size);

  std::string id() const override;
  int action_count() const override { return 4; }
  StateKey goal() const override { return goal_; }
  double heuristic(StateKey state) const override;
  void successors(StateKey state, std::vector<Transition>& out) const override;
  StateKey parse(std::string_view text) const override;
  std::string format(StateKey state) const override;

  int size() const { return size_; }

  TileState unpack(StateKey key) const;
  StateKey pack(const TileState& state) const;

  static int manhattan(const TileState& state);
  /// Manhattan distance plus two moves for every tile that must leave its goal
  /// row or column to let the others in that line pass.
  static int linear_conflicts(const TileState& state);
  /// Parity test against the blank-first goal.
  static bool solvable(const TileState& state);

 private:
  int size_;
  StateKey goal_;
};

}  // namespace pfs
