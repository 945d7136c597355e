#include "pfs/chain.hpp"

#include <stdexcept>

#include "text_scan.hpp"

namespace pfs {

ChainDomain::ChainDomain(int length, int arms) : length_(length), arms_(arms) {
  if (length < 1 || arms < 2) throw std::invalid_argument("chain needs length >= 1 and arms >= 2");
}

std::string ChainDomain::id() const {
  return "chain" + std::to_string(length_) + "x" + std::to_string(arms_);
}

double ChainDomain::heuristic(StateKey state) const {
  return static_cast<double>(length_) - static_cast<double>(state);
}

void ChainDomain::successors(StateKey state, std::vector<Transition>& out) const {
  out.clear();
  if (state >= static_cast<StateKey>(length_)) return;
  const ActionIndex advance = advancing_action(state);
  for (ActionIndex a = 0; a < arms_; ++a) {
    StateKey next = a == advance ? state + 1 : (state == 0 ? 0 : state - 1);
    out.push_back({a, next, 1.0});
  }
}

void ChainDomain::predecessors(StateKey state, std::vector<Transition>& out) const {
  out.clear();
  auto back_steps_from = [&](StateKey from) {
    for (ActionIndex a = 0; a < arms_; ++a)
      if (a != advancing_action(from)) out.push_back({a, from, 1.0});
  };
  if (state > 0) out.push_back({advancing_action(state - 1), state - 1, 1.0});
  if (state == 0) back_steps_from(0);
  if (state + 1 < static_cast<StateKey>(length_)) back_steps_from(state + 1);
}

StateKey ChainDomain::parse(std::string_view text) const {
  auto tokens = detail::tokenize(text);
  if (tokens.size() != 1) throw ParseError("expected a single position", 1, 1);
  int v = detail::to_int(tokens[0]);
  if (v < 0 || v > length_) throw ParseError("position out of range", tokens[0].line, tokens[0].column);
  return static_cast<StateKey>(v);
}

std::string ChainDomain::format(StateKey state) const { return std::to_string(state); }

}  // namespace pfs
