#include "pfs/pancake.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "pfs/errors.hpp"
#include "text_scan.hpp"

namespace pfs {

PancakeDomain::PancakeDomain(int count) : count_(count), goal_(0) {
  if (count < 2 || count > 15) throw std::invalid_argument("pancake count must be 2..15");
  std::vector<int> identity(count);
  for (int i = 0; i < count; ++i) identity[i] = i + 1;
  goal_ = pack(identity);
}

std::string PancakeDomain::id() const { return "pancake" + std::to_string(count_); }

std::vector<int> PancakeDomain::unpack(StateKey key) const {
  std::vector<int> stack(count_);
  for (int i = 0; i < count_; ++i) stack[i] = static_cast<int>((key >> (4 * i)) & 0xF);
  return stack;
}

StateKey PancakeDomain::pack(const std::vector<int>& stack) const {
  StateKey key = 0;
  for (int i = 0; i < count_; ++i) key |= static_cast<StateKey>(stack[i]) << (4 * i);
  return key;
}

StateKey PancakeDomain::flip(StateKey key, ActionIndex action) const {
  const int length = action + 2;
  StateKey next = key;
  for (int i = 0; i < length; ++i) {
    StateKey value = (key >> (4 * i)) & 0xF;
    int j = length - 1 - i;
    next &= ~(StateKey{0xF} << (4 * j));
    next |= value << (4 * j);
  }
  return next;
}

int PancakeDomain::gaps(const std::vector<int>& stack) {
  const int n = static_cast<int>(stack.size());
  int count = 0;
  for (int i = 0; i < n; ++i) {
    int below = i + 1 < n ? stack[i + 1] : n + 1;
    if (std::abs(stack[i] - below) > 1) ++count;
  }
  return count;
}

double PancakeDomain::heuristic(StateKey state) const {
  int count = 0;
  for (int i = 0; i < count_; ++i) {
    int here = static_cast<int>((state >> (4 * i)) & 0xF);
    int below = i + 1 < count_ ? static_cast<int>((state >> (4 * (i + 1))) & 0xF) : count_ + 1;
    if (std::abs(here - below) > 1) ++count;
  }
  return count;
}

void PancakeDomain::successors(StateKey state, std::vector<Transition>& out) const {
  out.clear();
  for (ActionIndex a = 0; a < count_ - 1; ++a) out.push_back({a, flip(state, a), 1.0});
}

StateKey PancakeDomain::parse(std::string_view text) const {
  auto tokens = detail::tokenize(text);
  if (static_cast<int>(tokens.size()) != count_) {
    std::size_t line = tokens.empty() ? 1 : tokens.back().line;
    std::size_t column = tokens.empty() ? 1 : tokens.back().column;
    throw ParseError("expected " + std::to_string(count_) + " pancakes, got " +
                         std::to_string(tokens.size()),
                     line, column);
  }
  std::vector<int> stack(count_);
  std::vector<bool> seen(count_ + 1, false);
  for (int i = 0; i < count_; ++i) {
    int v = detail::to_int(tokens[i]);
    if (v < 1 || v > count_ || seen[v])
      throw ParseError("pancake " + std::to_string(v) + " is out of range or repeated",
                       tokens[i].line, tokens[i].column);
    seen[v] = true;
    stack[i] = v;
  }
  return pack(stack);
}

std::string PancakeDomain::format(StateKey state) const {
  std::ostringstream out;
  auto stack = unpack(state);
  for (int i = 0; i < count_; ++i) {
    if (i) out << ' ';
    out << stack[i];
  }
  return out.str();
}

}  // namespace pfs
