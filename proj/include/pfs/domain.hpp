#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfs {

/// Every built-in domain packs its states into 64 bits.
using StateKey = std::uint64_t;
using ActionIndex = std::int32_t;

inline constexpr ActionIndex kNoAction = -1;

struct Transition {
  ActionIndex action;
  StateKey state;
  double cost;
};

/// A search graph with an indexed action set and an admissible heuristic.
///
/// Successors of a state carry distinct action indices and are reported in
/// ascending action order. Implementations are immutable after construction
/// and may be shared across threads.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual std::string id() const = 0;
  virtual int action_count() const = 0;
  virtual StateKey goal() const = 0;

  /// Admissible estimate of the cost to the goal; +inf marks a dead end.
  virtual double heuristic(StateKey state) const = 0;

  /// Clears `out` and fills it with the applicable transitions of `state`.
  virtual void successors(StateKey state, std::vector<Transition>& out) const = 0;

  /// Clears `out` and fills it with (predecessor, action at predecessor, cost).
  /// The default assumes every edge has a reverse edge of equal cost.
  virtual void predecessors(StateKey state, std::vector<Transition>& out) const;

  virtual StateKey parse(std::string_view text) const = 0;
  virtual std::string format(StateKey state) const = 0;

  bool is_goal(StateKey state) const { return state == goal(); }
  std::vector<ActionIndex> applicable_actions(StateKey state) const;
  std::optional<StateKey> successor(StateKey state, ActionIndex action) const;
  /// Throws std::invalid_argument when the action is inapplicable.
  double edge_cost(StateKey state, ActionIndex action) const;
};

/// Builds a domain from its id: tile8, tile15, pancakeN, blocksN.
/// Throws ConfigError listing the valid ids on unknown input.
std::unique_ptr<Domain> make_domain(std::string_view id);

std::string valid_domain_ids();

StateKey parse_instance(const Domain& domain, std::string_view text);

}  // namespace pfs
