#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <unordered_set>

#include "pfs/blocks.hpp"
#include "pfs/chain.hpp"
#include "pfs/errors.hpp"
#include "pfs/pancake.hpp"
#include "pfs/tile.hpp"
#include "support.hpp"

using namespace pfs;

namespace {

std::vector<Transition> succ(const Domain& d, StateKey s) {
  std::vector<Transition> out;
  d.successors(s, out);
  return out;
}

std::vector<ActionIndex> actions_of(const std::vector<Transition>& ts) {
  std::vector<ActionIndex> a;
  for (const auto& t : ts) a.push_back(t.action);
  return a;
}

std::size_t forward_reachable(const Domain& d, StateKey from) {
  std::unordered_set<StateKey> seen{from};
  std::queue<StateKey> q;
  q.push(from);
  std::vector<Transition> out;
  while (!q.empty()) {
    StateKey s = q.front();
    q.pop();
    d.successors(s, out);
    for (const auto& t : out) {
      if (seen.insert(t.state).second) q.push(t.state);
    }
  }
  return seen.size();
}

// Every edge s -a-> t must show up as (s, a) among the predecessors of t.
void check_predecessors(const Domain& d, const std::vector<StateKey>& states) {
  std::vector<Transition> fwd;
  std::vector<Transition> back;
  for (StateKey s : states) {
    d.successors(s, fwd);
    for (const auto& t : fwd) {
      d.predecessors(t.state, back);
      bool found = std::any_of(back.begin(), back.end(), [&](const Transition& p) {
        return p.state == s && p.action == t.action && p.cost == t.cost;
      });
      REQUIRE(found);
    }
  }
}

}  // namespace

TEST_CASE("tile goal layout and blank moves") {
  TileDomain d(3);
  CHECK(d.id() == "tile8");
  CHECK(d.format(d.goal()) == "0 1 2 3 4 5 6 7 8");
  auto g = succ(d, d.goal());
  CHECK(actions_of(g) == std::vector<ActionIndex>{TileDomain::kDown, TileDomain::kRight});
  CHECK(d.format(g[0].state) == "3 1 2 0 4 5 6 7 8");
  CHECK(d.format(g[1].state) == "1 0 2 3 4 5 6 7 8");

  StateKey center = d.parse("1 2 3 4 0 5 6 7 8");
  auto c = succ(d, center);
  CHECK(c.size() == 4);
  CHECK(d.format(c[0].state) == "1 0 3 4 2 5 6 7 8");  // up
  CHECK(d.format(c[3].state) == "1 2 3 4 5 0 6 7 8");  // right

  // Opposite moves undo each other.
  const ActionIndex inverse[] = {TileDomain::kDown, TileDomain::kUp, TileDomain::kRight, TileDomain::kLeft};
  for (StateKey s : testing::sample_states("tile8", 200, 3, true)) {
    for (const auto& t : succ(d, s)) CHECK(d.successor(t.state, inverse[t.action]) == s);
  }

  for (const char* corner : {"0 1 2 3 4 5 6 7 8", "1 2 0 3 4 5 6 7 8", "3 1 2 6 4 5 0 7 8", "1 2 5 3 4 8 6 7 0"})
    CHECK(succ(d, d.parse(corner)).size() == 2);
}

TEST_CASE("tile manhattan and linear conflicts") {
  TileDomain d(3);
  CHECK(d.heuristic(d.goal()) == 0);

  // Two swapped pairs in their goal rows: each pair costs two extra moves.
  TileState s = d.unpack(d.parse("0 2 1 4 3 5 6 7 8"));
  CHECK(TileDomain::manhattan(s) == 4);
  CHECK(TileDomain::linear_conflicts(s) == 8);
  CHECK(TileDomain::linear_conflicts(s) <= testing::oracle("tile8").at(d.pack(s)));

  // Column conflict: tiles 3 and 6 swapped in column 0, plus 1 and 2 swapped.
  s = d.unpack(d.parse("0 2 1 6 4 5 3 7 8"));
  CHECK(TileDomain::manhattan(s) == 4);
  CHECK(TileDomain::linear_conflicts(s) == 8);

  // Three reversed tiles in one line need two of them to leave, not three.
  TileDomain d15(4);
  TileState r = d15.unpack(d15.parse("0 1 2 3 7 6 5 4 8 9 10 11 12 13 14 15"));
  CHECK(TileDomain::manhattan(r) == 8);
  CHECK(TileDomain::linear_conflicts(r) == 8 + 2 * 3);

  // Tiles outside their goal line never conflict.
  s = d.unpack(d.parse("3 1 2 0 4 5 6 7 8"));
  CHECK(TileDomain::linear_conflicts(s) == TileDomain::manhattan(s));
}

TEST_CASE("tile heuristic is admissible and consistent on the whole 8-puzzle") {
  const auto& d = testing::domain("tile8");
  const auto& table = testing::oracle("tile8");
  REQUIRE(table.size() == 181440);
  std::vector<Transition> out;
  std::size_t above_manhattan = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    StateKey s = table.index()->key(i);
    double h = d.heuristic(s);
    REQUIRE(h <= table.cost_at(i));
    auto state = static_cast<const TileDomain&>(d).unpack(s);
    REQUIRE(h >= TileDomain::manhattan(state));
    above_manhattan += h > TileDomain::manhattan(state);
    d.successors(s, out);
    for (const auto& t : out) REQUIRE(std::abs(h - d.heuristic(t.state)) <= t.cost);
  }
  CHECK(above_manhattan > 0);
}

TEST_CASE("tile parsing") {
  TileDomain d(3);
  // Blank-last input is an ordinary state, not an alternative goal.
  StateKey s = d.parse("1 2 3 4 5 6 7 8 0");
  CHECK(s != d.goal());
  CHECK(testing::oracle("tile8").at(s) > 0);

  CHECK_THROWS_AS(d.parse("1 2 3"), ParseError);
  CHECK_THROWS_AS(d.parse("0 1 2 3 4 5 6 7 8 9"), ParseError);
  CHECK_THROWS_AS(d.parse("0 1 1 3 4 5 6 7 8"), ParseError);
  CHECK_THROWS_AS(d.parse("0 2 1 3 4 5 6 7 8"), ParseError);  // odd parity
  try {
    d.parse("0 1 2\n3 x 5 6 7 8");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK(d.format(d.parse(d.format(s))) == d.format(s));
}

TEST_CASE("korf data file holds 100 solvable 15-puzzle instances") {
  std::ifstream in(PFS_DATA_DIR "/korf100.txt");
  std::ifstream costs(PFS_DATA_DIR "/korf100_opt.txt");
  REQUIRE(in);
  REQUIRE(costs);
  TileDomain d(4);
  std::string line;
  int count = 0;
  std::set<StateKey> distinct;
  while (std::getline(in, line)) {
    int cost = 0;
    REQUIRE(static_cast<bool>(costs >> cost));
    StateKey s = parse_instance(d, line);  // rejects unsolvable permutations
    TileState t = d.unpack(s);
    CHECK(TileDomain::linear_conflicts(t) <= cost);
    // Every move changes the Manhattan distance by exactly one.
    CHECK((cost - TileDomain::manhattan(t)) % 2 == 0);
    distinct.insert(s);
    if (++count == 1) CHECK(cost == 57);
  }
  CHECK(count == 100);
  CHECK(distinct.size() == 100);
}

TEST_CASE("pancake flips and gap heuristic") {
  PancakeDomain d(9);
  CHECK(d.id() == "pancake9");
  CHECK(d.action_count() == 8);
  for (StateKey s : testing::sample_states("pancake9", 100, 5, true)) {
    auto out = succ(d, s);
    CHECK(out.size() == 8);
    for (const auto& t : out) CHECK(d.flip(t.state, t.action) == s);
  }
  PancakeDomain d3(3);
  CHECK(d3.format(d3.flip(d3.parse("2 1 3"), 0)) == "1 2 3");
  CHECK(d3.format(d3.flip(d3.parse("2 1 3"), 1)) == "3 1 2");

  CHECK(PancakeDomain::gaps({1, 2, 3}) == 0);
  // (1,3) is a gap and so is 2 against the plate 4.
  CHECK(PancakeDomain::gaps({1, 3, 2}) == 2);
  CHECK(PancakeDomain::gaps({3, 2, 1}) == 1);
  CHECK(PancakeDomain::gaps({2, 1, 3}) == 1);

  // Brute-force check on every 3-stack.
  const auto& t3 = testing::oracle("pancake3");
  CHECK(t3.size() == 6);
  for (std::size_t i = 0; i < t3.size(); ++i) {
    auto stack = d3.unpack(t3.index()->key(i));
    int expect = 0;
    stack.push_back(4);
    for (std::size_t k = 0; k + 1 < stack.size(); ++k) expect += std::abs(stack[k] - stack[k + 1]) > 1;
    CHECK(d3.heuristic(t3.index()->key(i)) == expect);
    CHECK(expect <= t3.cost_at(i));
  }

  CHECK_THROWS_AS(d3.parse("1 2 2"), ParseError);
  CHECK_THROWS_AS(d3.parse("1 2 4"), ParseError);
  CHECK_THROWS_AS(d3.parse("1 2"), ParseError);
}

TEST_CASE("gap heuristic is consistent on pancake-8") {
  const auto& d = testing::domain("pancake8");
  const auto& table = testing::oracle("pancake8");
  CHECK(table.size() == 40320);
  std::vector<Transition> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    StateKey s = table.index()->key(i);
    double h = d.heuristic(s);
    REQUIRE(h <= table.cost_at(i));
    d.successors(s, out);
    for (const auto& t : out) REQUIRE(std::abs(h - d.heuristic(t.state)) <= 1.0);
  }
}

TEST_CASE("blocksworld grounding and successors") {
  BlocksDomain d(8);
  CHECK(d.id() == "blocks8");
  CHECK(d.action_count() == 128);
  CHECK(d.strips().action_count() == 128);
  CHECK(d.strips().proposition_count() == 81);
  for (int a = 0; a < d.strips().action_count(); ++a) {
    const auto& act = d.strips().action(a);
    for (int p : act.add) CHECK(std::find(act.del.begin(), act.del.end(), p) == act.del.end());
  }
  CHECK(d.strips().action(d.pick_up(0)).name == "pick-up(b1)");
  CHECK(d.strips().action(d.put_down(7)).name == "put-down(b8)");
  CHECK(d.strips().action(d.stack(1, 0)).name == "stack(b2,b1)");
  CHECK(d.strips().action(d.unstack(0, 7)).name == "unstack(b1,b8)");

  StateKey table = d.parse("on b1 table; on b2 table; on b3 table; on b4 table; on b5 table; on b6 table; on b7 table; on b8 table");
  CHECK(actions_of(succ(d, table)) == std::vector<ActionIndex>{0, 1, 2, 3, 4, 5, 6, 7});

  StateKey holding = d.parse("holding b1; on b2 table; on b3 table; on b4 table; on b5 table; on b6 table; on b7 table; on b8 table");
  auto h = succ(d, holding);
  CHECK(h.size() == 8);
  CHECK(h[0].action == d.put_down(0));
  for (int c = 1; c < 8; ++c) CHECK(h[c].action == d.stack(0, c));

  // Native successors agree with the grounded STRIPS model.
  for (StateKey s : testing::sample_states("blocks8", 500, 11, true)) {
    auto props = d.propositions(d.unpack(s));
    std::vector<ActionIndex> strips_actions;
    for (int a = 0; a < d.strips().action_count(); ++a) {
      if (d.strips().applicable(a, props)) strips_actions.push_back(a);
    }
    auto native = succ(d, s);
    auto native_actions = actions_of(native);
    std::sort(native_actions.begin(), native_actions.end());
    REQUIRE(native_actions == strips_actions);
    for (const auto& t : native)
      CHECK(d.propositions(d.unpack(t.state)) == d.strips().apply(t.action, props));
  }
}

TEST_CASE("blocksworld pick-up then put-down restores the state") {
  BlocksDomain d(8);
  int checked = 0;
  for (StateKey s : testing::sample_states("blocks8", 10000, 12, true)) {
    for (const auto& t : succ(d, s)) {
      if (t.action >= d.count()) continue;  // pick-ups only
      auto back = d.successor(t.state, d.put_down(t.action));
      REQUIRE(back);
      REQUIRE(*back == s);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("blocksworld h_max") {
  BlocksDomain d(8);
  CHECK(d.heuristic(d.goal()) == 0);
  CHECK(d.format(d.goal()) == "on b1 table; on b2 b1; on b3 b2; on b4 b3; on b5 b4; on b6 b5; on b7 b6; on b8 b7");

  // Top block lifted off the finished tower: one stack away.
  StateKey lifted = *d.successor(d.goal(), d.unstack(7, 6));
  CHECK(d.heuristic(lifted) == 1);
  CHECK(testing::oracle("blocks8").at(lifted) == 1);

  const auto& table = testing::oracle("blocks8");
  for (StateKey s : testing::sample_states("blocks8", 10000, 13)) REQUIRE(d.heuristic(s) <= table.at(s));
}

TEST_CASE("blocksworld parsing") {
  BlocksDomain d(3);
  StateKey tower = d.parse("on b2 b1\non b1 table\non b3 b2");
  CHECK(tower == d.goal());
  CHECK_FALSE(d.unpack(tower).holding());
  CHECK(d.parse("holding b2; on b1 table; on b3 table") != d.goal());
  CHECK_THROWS_AS(d.parse("on b1 b2; on b2 b1; on b3 table"), ParseError);     // cycle
  CHECK_THROWS_AS(d.parse("on b1 table; on b2 b1; on b3 b1"), ParseError);     // two on b1
  CHECK_THROWS_AS(d.parse("holding b1; holding b2; on b3 table"), ParseError);
  CHECK_THROWS_AS(d.parse("on b1 table; on b2 table"), ParseError);            // b3 missing
  CHECK_THROWS_AS(d.parse("on b1 table; on b2 table; on b9 table"), ParseError);
  CHECK_THROWS_AS(d.parse("on b1 table; on b2 table; on b3 table; on b3 table"), ParseError);
  try {
    d.parse("on b1 table\nput b2 b1\non b3 table");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("blocksworld reverse enumeration matches forward reachability") {
  for (const char* id : {"blocks3", "blocks5", "blocks8"}) {
    const auto& d = testing::domain(id);
    CHECK(forward_reachable(d, d.goal()) == testing::oracle(id).size());
  }
  CHECK(testing::oracle("blocks8").size() == 695417);
}

TEST_CASE("reverse edges") {
  check_predecessors(testing::domain("tile8"), testing::sample_states("tile8", 200, 1, true));
  check_predecessors(testing::domain("pancake9"), testing::sample_states("pancake9", 200, 1, true));
  check_predecessors(testing::domain("blocks8"), testing::sample_states("blocks8", 200, 1, true));
  ChainDomain chain(10, 3);
  std::vector<StateKey> all;
  for (StateKey s = 0; s <= 10; ++s) all.push_back(s);
  check_predecessors(chain, all);
}

TEST_CASE("chain domain") {
  ChainDomain chain(5, 4);
  CHECK(chain.action_count() == 4);
  CHECK(chain.goal() == 5);
  auto out = succ(chain, 2);
  REQUIRE(out.size() == 4);
  for (const auto& t : out) CHECK(t.state == (t.action == chain.advancing_action(2) ? 3u : 1u));
  for (const auto& t : succ(chain, 0)) CHECK(t.state == (t.action == 0 ? 1u : 0u));
  CHECK(exhaustive_reverse_dijkstra(chain).at(0) == 5);
}

TEST_CASE("domain registry") {
  CHECK(make_domain("tile15")->action_count() == 4);
  CHECK(make_domain("pancake9")->action_count() == 8);
  CHECK(make_domain("blocks8")->action_count() == 128);
  for (const char* bad : {"tile9", "pancake", "pancake16", "blocks0", "blocks13", "hanoi"}) {
    try {
      make_domain(bad);
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("tile8") != std::string::npos);
    }
  }
  const auto& d = testing::domain("tile8");
  CHECK(d.applicable_actions(d.goal()) == std::vector<ActionIndex>{1, 3});
  CHECK_FALSE(d.successor(d.goal(), 0));
  CHECK(d.edge_cost(d.goal(), 1) == 1.0);
  CHECK_THROWS_AS(d.edge_cost(d.goal(), 0), std::invalid_argument);
}
