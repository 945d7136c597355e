#include "pfs/domain.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "pfs/blocks.hpp"
#include "pfs/errors.hpp"
#include "pfs/pancake.hpp"
#include "pfs/tile.hpp"

namespace pfs {

void Domain::predecessors(StateKey state, std::vector<Transition>& out) const {
  out.clear();
  std::vector<Transition> forward;
  std::vector<Transition> back;
  successors(state, forward);
  for (const Transition& t : forward) {
    successors(t.state, back);
    for (const Transition& r : back) {
      if (r.state == state) out.push_back({r.action, t.state, r.cost});
    }
  }
}

std::vector<ActionIndex> Domain::applicable_actions(StateKey state) const {
  std::vector<Transition> succ;
  successors(state, succ);
  std::vector<ActionIndex> actions;
  actions.reserve(succ.size());
  for (const Transition& t : succ) actions.push_back(t.action);
  return actions;
}

std::optional<StateKey> Domain::successor(StateKey state, ActionIndex action) const {
  std::vector<Transition> succ;
  successors(state, succ);
  for (const Transition& t : succ) {
    if (t.action == action) return t.state;
  }
  return std::nullopt;
}

double Domain::edge_cost(StateKey state, ActionIndex action) const {
  std::vector<Transition> succ;
  successors(state, succ);
  for (const Transition& t : succ) {
    if (t.action == action) return t.cost;
  }
  throw std::invalid_argument("action " + std::to_string(action) + " is not applicable");
}

namespace {

std::optional<int> numeric_suffix(std::string_view id, std::string_view prefix) {
  if (id.substr(0, prefix.size()) != prefix || id.size() == prefix.size()) return std::nullopt;
  std::string_view digits = id.substr(prefix.size());
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string valid_domain_ids() { return "tile8, tile15, pancakeN (N in 2..15), blocksN (N in 1..12)"; }

std::unique_ptr<Domain> make_domain(std::string_view id) {
  if (id == "tile8") return std::make_unique<TileDomain>(3);
  if (id == "tile15") return std::make_unique<TileDomain>(4);
  if (auto n = numeric_suffix(id, "pancake"); n && *n >= 2 && *n <= 15)
    return std::make_unique<PancakeDomain>(*n);
  if (auto n = numeric_suffix(id, "blocks"); n && *n >= 1 && *n <= 12)
    return std::make_unique<BlocksDomain>(*n);
  throw ConfigError("unknown domain '" + std::string(id) + "'; valid: " + valid_domain_ids());
}

StateKey parse_instance(const Domain& domain, std::string_view text) { return domain.parse(text); }

}  // namespace pfs
