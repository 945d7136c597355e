#include "pfs/blocks.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "pfs/errors.hpp"
#include "text_scan.hpp"

namespace pfs {

std::optional<int> BlocksState::holding() const {
  for (int b = 0; b < count; ++b) {
    if (below[b] == kHeld) return b;
  }
  return std::nullopt;
}

bool BlocksState::clear(int block) const {
  if (below[block] == kHeld) return false;
  for (int c = 0; c < count; ++c) {
    if (below[c] == block) return false;
  }
  return true;
}

bool BlocksDomain::valid(const BlocksState& s) {
  int held = 0;
  std::array<int, 16> support{};
  for (int b = 0; b < s.count; ++b) {
    std::uint8_t v = s.below[b];
    if (v == BlocksState::kHeld) {
      ++held;
    } else if (v != BlocksState::kTable) {
      if (v >= s.count || v == b) return false;
      if (s.below[v] == BlocksState::kHeld) return false;
      if (++support[v] > 1) return false;
    }
  }
  if (held > 1) return false;
  // Every chain must end on the table or in the hand within count steps.
  for (int b = 0; b < s.count; ++b) {
    int cur = b;
    int steps = 0;
    while (s.below[cur] != BlocksState::kTable && s.below[cur] != BlocksState::kHeld) {
      cur = s.below[cur];
      if (++steps > s.count) return false;
    }
  }
  return true;
}

BlocksDomain::BlocksDomain(int count) : count_(count), strips_(GroundedStrips({}, {})), goal_(0) {
  if (count < 1 || count > 12) throw std::invalid_argument("block count must be 1..12");
  strips_ = build_strips();
  BlocksState g;
  g.count = count;
  g.below[0] = BlocksState::kTable;
  for (int b = 1; b < count; ++b) g.below[b] = static_cast<std::uint8_t>(b - 1);
  goal_ = pack(g);
  auto props = propositions(g);
  for (int p = 0; p < static_cast<int>(props.size()); ++p) {
    if (props[p]) goal_props_.push_back(p);
  }
}

std::string BlocksDomain::id() const { return "blocks" + std::to_string(count_); }

GroundedStrips BlocksDomain::build_strips() const {
  const int n = count_;
  auto name = [](int b) { return "b" + std::to_string(b + 1); };
  std::vector<std::string> props(n * n + 2 * n + 1);
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < n; ++c) {
      if (b != c) props[prop_on(b, c)] = "on(" + name(b) + "," + name(c) + ")";
    }
    props[prop_ontable(b)] = "ontable(" + name(b) + ")";
    props[prop_clear(b)] = "clear(" + name(b) + ")";
    props[prop_holding(b)] = "holding(" + name(b) + ")";
  }
  props[prop_handempty()] = "handempty";

  std::vector<StripsAction> actions(2 * n * n);
  for (int b = 0; b < n; ++b) {
    actions[pick_up(b)] = {"pick-up(" + name(b) + ")",
                           {prop_clear(b), prop_ontable(b), prop_handempty()},
                           {prop_holding(b)},
                           {prop_clear(b), prop_ontable(b), prop_handempty()}};
    actions[put_down(b)] = {"put-down(" + name(b) + ")",
                            {prop_holding(b)},
                            {prop_clear(b), prop_ontable(b), prop_handempty()},
                            {prop_holding(b)}};
    for (int c = 0; c < n; ++c) {
      if (b == c) continue;
      actions[stack(b, c)] = {"stack(" + name(b) + "," + name(c) + ")",
                              {prop_holding(b), prop_clear(c)},
                              {prop_on(b, c), prop_clear(b), prop_handempty()},
                              {prop_holding(b), prop_clear(c)}};
      actions[unstack(b, c)] = {"unstack(" + name(b) + "," + name(c) + ")",
                                {prop_on(b, c), prop_clear(b), prop_handempty()},
                                {prop_holding(b), prop_clear(c)},
                                {prop_on(b, c), prop_clear(b), prop_handempty()}};
    }
  }
  return GroundedStrips(std::move(props), std::move(actions));
}

BlocksState BlocksDomain::unpack(StateKey key) const {
  BlocksState s;
  s.count = count_;
  for (int b = 0; b < count_; ++b) s.below[b] = static_cast<std::uint8_t>((key >> (4 * b)) & 0xF);
  return s;
}

StateKey BlocksDomain::pack(const BlocksState& s) const {
  StateKey key = 0;
  for (int b = 0; b < count_; ++b) key |= static_cast<StateKey>(s.below[b]) << (4 * b);
  return key;
}

std::vector<bool> BlocksDomain::propositions(const BlocksState& s) const {
  std::vector<bool> props(strips_.proposition_count(), false);
  bool hand_empty = true;
  for (int b = 0; b < count_; ++b) {
    std::uint8_t v = s.below[b];
    if (v == BlocksState::kHeld) {
      props[prop_holding(b)] = true;
      hand_empty = false;
    } else if (v == BlocksState::kTable) {
      props[prop_ontable(b)] = true;
    } else {
      props[prop_on(b, v)] = true;
    }
    if (s.clear(b)) props[prop_clear(b)] = true;
  }
  props[prop_handempty()] = hand_empty;
  return props;
}

double BlocksDomain::heuristic(StateKey state) const {
  return strips_.hmax(propositions(unpack(state)), goal_props_);
}

void BlocksDomain::successors(StateKey state, std::vector<Transition>& out) const {
  out.clear();
  BlocksState s = unpack(state);
  std::array<bool, 16> clear{};
  for (int b = 0; b < count_; ++b) clear[b] = s.below[b] != BlocksState::kHeld;
  int held = -1;
  for (int b = 0; b < count_; ++b) {
    std::uint8_t v = s.below[b];
    if (v == BlocksState::kHeld) held = b;
    else if (v != BlocksState::kTable) clear[v] = false;
  }
  auto with = [&](int b, std::uint8_t v) {
    StateKey next = state & ~(StateKey{0xF} << (4 * b));
    return next | (static_cast<StateKey>(v) << (4 * b));
  };
  if (held >= 0) {
    out.push_back({put_down(held), with(held, BlocksState::kTable), 1.0});
    for (int c = 0; c < count_; ++c) {
      if (c != held && clear[c])
        out.push_back({stack(held, c), with(held, static_cast<std::uint8_t>(c)), 1.0});
    }
    return;
  }
  for (int b = 0; b < count_; ++b) {
    if (clear[b] && s.below[b] == BlocksState::kTable)
      out.push_back({pick_up(b), with(b, BlocksState::kHeld), 1.0});
  }
  for (int b = 0; b < count_; ++b) {
    if (clear[b] && s.below[b] != BlocksState::kTable)
      out.push_back({unstack(b, s.below[b]), with(b, BlocksState::kHeld), 1.0});
  }
}

StateKey BlocksDomain::parse(std::string_view text) const {
  auto tokens = detail::tokenize(text, ";");
  BlocksState s;
  s.count = count_;
  std::vector<bool> seen(count_, false);
  auto block = [&](const detail::Token& t) {
    std::string_view v = t.text;
    if (v.size() >= 2 && v[0] == 'b') {
      detail::Token digits{v.substr(1), t.line, t.column + 1};
      int b = detail::to_int(digits);
      if (b >= 1 && b <= count_) return b - 1;
    }
    throw ParseError("unknown block '" + std::string(v) + "'", t.line, t.column);
  };
  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto& head = tokens[i];
    int b = -1;
    if (head.text == "on") {
      if (i + 2 >= tokens.size() || tokens[i + 1].line != head.line || tokens[i + 2].line != head.line)
        throw ParseError("expected 'on <block> <block|table>'", head.line, head.column);
      b = block(tokens[i + 1]);
      if (tokens[i + 2].text == "table") {
        s.below[b] = BlocksState::kTable;
      } else {
        int c = block(tokens[i + 2]);
        if (c == b) throw ParseError("block on itself", tokens[i + 2].line, tokens[i + 2].column);
        s.below[b] = static_cast<std::uint8_t>(c);
      }
      i += 3;
    } else if (head.text == "holding") {
      if (i + 1 >= tokens.size() || tokens[i + 1].line != head.line)
        throw ParseError("expected 'holding <block>'", head.line, head.column);
      b = block(tokens[i + 1]);
      s.below[b] = BlocksState::kHeld;
      i += 2;
    } else {
      throw ParseError("expected 'on' or 'holding', got '" + std::string(head.text) + "'",
                       head.line, head.column);
    }
    if (seen[b]) throw ParseError("block placed twice", head.line, head.column);
    seen[b] = true;
    if (i < tokens.size() && tokens[i].line == head.line)
      throw ParseError("trailing text", tokens[i].line, tokens[i].column);
  }
  for (int b = 0; b < count_; ++b) {
    if (!seen[b]) {
      std::size_t line = tokens.empty() ? 1 : tokens.back().line;
      throw ParseError("block b" + std::to_string(b + 1) + " has no placement", line, 1);
    }
  }
  if (!valid(s)) throw ParseError("placements do not form a valid tower forest", 1, 1);
  return pack(s);
}

std::string BlocksDomain::format(StateKey state) const {
  BlocksState s = unpack(state);
  std::ostringstream out;
  for (int b = 0; b < count_; ++b) {
    if (b) out << "; ";
    if (s.below[b] == BlocksState::kHeld) out << "holding b" << b + 1;
    else if (s.below[b] == BlocksState::kTable) out << "on b" << b + 1 << " table";
    else out << "on b" << b + 1 << " b" << s.below[b] + 1;
  }
  return out.str();
}

}  // namespace pfs
