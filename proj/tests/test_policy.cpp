#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "pfs/chain.hpp"
#include "pfs/errors.hpp"
#include "pfs/policy.hpp"
#include "pfs/tile.hpp"
#include "support.hpp"

using namespace pfs;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pfs_test_" + name)).string();
}

double tolerance(double acc, std::size_t n) { return 4.0 * std::sqrt(acc * (1.0 - acc) / static_cast<double>(n)); }

}  // namespace

TEST_CASE("deterministic action") {
  std::vector<double> a{0.1, 0.7, 0.1, 0.1};
  CHECK(deterministic_action(a) == 1);
  std::vector<double> b{0.4, 0.4, 0.2};
  CHECK(deterministic_action(b) == 0);
  CHECK(deterministic_action(std::vector<double>{}) == kNoAction);
}

TEST_CASE("optimal action table") {
  const auto& d = testing::domain("tile8");
  const auto& table = testing::oracle("tile8");
  auto opt = build_opt_table(d, table, 1);
  CHECK(opt.size() == table.size());
  CHECK(opt.scored_count() == table.size() - 1);

  auto goal = *table.index()->find(d.goal());
  CHECK(opt.opt_set(goal).empty());
  CHECK(opt.opt_choice(goal) == kNoAction);

  // One move from the goal: moving the blank back is the only optimal action.
  StateKey near = *d.successor(d.goal(), TileDomain::kRight);
  auto i = *table.index()->find(near);
  REQUIRE(opt.opt_set(i).size() == 1);
  CHECK(opt.opt_set(i)[0] == TileDomain::kLeft);
  CHECK(opt.opt_choice(i) == TileDomain::kLeft);

  // Every listed action is Bellman-optimal and the representative is listed.
  const auto& pd = testing::domain("pancake9");
  const auto& pt = testing::oracle("pancake9");
  auto popt = build_opt_table(pd, pt, 2);
  std::size_t multi = 0;
  for (std::size_t k = 0; k < pt.size(); k += 7) {
    auto set = popt.opt_set(k);
    for (ActionIndex a : set) REQUIRE(pt.cost_at(k) == 1 + pt.at(*pd.successor(pt.index()->key(k), a)));
    if (!set.empty()) REQUIRE(popt.is_optimal(k, popt.opt_choice(k)));
    multi += set.size() > 1;
  }
  CHECK(multi > 0);
}

TEST_CASE("synthetic policy rows and determinism") {
  const auto& d = testing::domain("pancake7");
  auto opt = build_opt_table(d, testing::oracle("pancake7"), 3);
  auto p = synthesize_policy(opt, d, 0.8, 3);
  CHECK(p.alpha() == 5);
  CHECK(p.target_acc() == 0.8);
  CHECK(p.domain_id() == "pancake7");
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto row = p.row(i);
    double sum = 0.0;
    for (float v : row) {
      REQUIRE(v >= 0.0f);
      sum += v;
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-6);
    // Strictly ordered scores: the argmax is never a tie.
    std::vector<float> sorted(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
  auto again = synthesize_policy(opt, d, 0.8, 3);
  CHECK(again.rows() == p.rows());
  CHECK(synthesize_policy(opt, d, 0.8, 4).rows() != p.rows());
  CHECK(again.measured_acc() == p.measured_acc());
  CHECK_THROWS_AS(p.scores(0xDEADBEEF), std::out_of_range);
}

TEST_CASE("perfect and calibrated policies") {
  const auto& d = testing::domain("tile8");
  auto opt = build_opt_table(d, testing::oracle("tile8"), 4);
  auto perfect = synthesize_policy(opt, d, 1.0, 4);
  CHECK(perfect.measured_acc() == 1.0);
  CHECK(measure_accuracy(perfect, opt) == 1.0);
  for (std::size_t i = 0; i < opt.size(); ++i) {
    if (opt.opt_set(i).empty()) continue;
    REQUIRE(opt.is_optimal(i, deterministic_action(perfect.scores(opt.index()->key(i)))));
  }

  auto p90 = synthesize_policy(opt, d, 0.9, 4);
  CHECK(p90.measured_acc() >= 0.8975);
  CHECK(p90.measured_acc() <= 0.9025);
  CHECK(std::abs(p90.measured_acc() - 0.9) <= tolerance(0.9, opt.scored_count()));

  auto p0 = synthesize_policy(opt, d, 0.0, 4);
  CHECK(p0.measured_acc() < 0.01);
}

TEST_CASE("misses favour the second score") {
  const auto& d = testing::domain("pancake8");
  auto opt = build_opt_table(d, testing::oracle("pancake8"), 5);
  auto p = synthesize_policy(opt, d, 0.5, 5);
  std::vector<std::size_t> histogram(d.action_count(), 0);
  for (std::size_t i = 0; i < opt.size(); ++i) {
    if (opt.opt_set(i).empty()) continue;
    auto scores = p.scores(opt.index()->key(i));
    if (opt.is_optimal(i, deterministic_action(scores))) continue;
    ActionIndex a = opt.opt_choice(i);
    int rank = 0;
    for (double s : scores) rank += s > scores[a];
    ++histogram[rank];
  }
  CHECK(histogram[0] == 0);
  for (std::size_t r = 2; r < histogram.size(); ++r) CHECK(histogram[r - 1] > histogram[r]);
}

TEST_CASE("accuracy on samples") {
  const auto& d = testing::domain("pancake9");
  auto opt = build_opt_table(d, testing::oracle("pancake9"), 6);
  auto p = synthesize_policy(opt, d, 0.9, 6);
  auto sample = sample_scored_states(opt, 10000, 1);
  CHECK(sample.size() == 10000);
  CHECK(std::abs(measure_accuracy(p, opt, std::span<const StateKey>(sample)) - p.measured_acc()) <= 0.02);

  // Order does not matter.
  auto all = sample_scored_states(opt, opt.size(), 2);
  CHECK(all.size() == opt.scored_count());
  CHECK(measure_accuracy(p, opt, std::span<const StateKey>(all)) == doctest::Approx(p.measured_acc()).epsilon(1e-12));

  std::vector<StateKey> empty;
  CHECK_THROWS_AS(measure_accuracy(p, opt, std::span<const StateKey>(empty)), std::invalid_argument);
  std::vector<StateKey> goal{d.goal()};
  CHECK_THROWS_AS(measure_accuracy(p, opt, std::span<const StateKey>(goal)), std::invalid_argument);
}

TEST_CASE("domains need at least two actions") {
  const auto& d = testing::domain("pancake2");
  auto opt = build_opt_table(d, testing::oracle("pancake2"), 1);
  CHECK_THROWS_AS(synthesize_policy(opt, d, 0.9, 1), ConfigError);
}

TEST_CASE("policy file round trip") {
  const auto& d = testing::domain("pancake7");
  const auto& table = testing::oracle("pancake7");
  auto opt = build_opt_table(d, table, 7);
  auto p = synthesize_policy(opt, d, 0.7, 7);
  auto path = temp_path("p7.spt");
  save_policy_table(p, path);

  auto header = read_policy_header(path);
  CHECK(header.domain_id == "pancake7");
  CHECK(header.action_count == 6);
  CHECK(header.state_count == 5040);
  CHECK(header.seed == 7);
  CHECK(header.target_acc == 0.7);
  CHECK(header.measured_acc == p.measured_acc());

  auto loaded = load_policy_table(path, table.index());
  CHECK(loaded.rows() == p.rows());
  auto path2 = temp_path("p7b.spt");
  save_policy_table(loaded, path2);
  std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
  CHECK(std::string(std::istreambuf_iterator<char>(a), {}) == std::string(std::istreambuf_iterator<char>(b), {}));

  // Wrong index size.
  CHECK_THROWS_AS(load_policy_table(path, testing::oracle("pancake6").index()), FormatError);

  // Corrupt one score so its row no longer sums to one.
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(-4, std::ios::end);
    float big = 0.9f;
    f.write(reinterpret_cast<const char*>(&big), sizeof big);
  }
  try {
    load_policy_table(path, table.index());
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("row 5039") != std::string::npos);
  }

  std::filesystem::resize_file(path, 20);
  CHECK_THROWS_AS(load_policy_table(path, table.index()), FormatError);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("unrolling") {
  const auto& d = testing::domain("tile8");
  const auto& table = testing::oracle("tile8");
  auto opt = build_opt_table(d, table, 8);
  auto perfect = synthesize_policy(opt, d, 1.0, 8);

  StateKey start = testing::sample_states("tile8", 1, 9)[0];
  auto zero = unroll(perfect, d, start, 0, UnrollMode::kGreedy, 1);
  CHECK(zero.states == std::vector<StateKey>{start});
  CHECK(zero.steps() == 0);
  CHECK_FALSE(zero.reached_goal);

  const auto k = static_cast<std::size_t>(table.at(start));
  auto greedy = unroll(perfect, d, start, k, UnrollMode::kGreedy, 1);
  CHECK(greedy.reached_goal);
  CHECK(greedy.cost == table.at(start));
  CHECK(greedy.steps() == k);
  // Stops early once the goal is reached.
  CHECK(unroll(perfect, d, start, k + 10, UnrollMode::kGreedy, 1).steps() == k);

  // Putting all mass on Up at the goal (blank in the top row) fails at once.
  testing::ConstantPolicy up({1.0, 0.0, 0.0, 0.0});
  StateKey top = *d.successor(d.goal(), TileDomain::kRight);
  auto fail = unroll(up, d, top, 5, UnrollMode::kGreedy, 1);
  REQUIRE(fail.failure);
  CHECK(fail.failure->first == top);
  CHECK(fail.failure->second == TileDomain::kUp);
  CHECK_FALSE(fail.reached_goal);

  auto sampled = unroll(perfect, d, start, 200, UnrollMode::kSample, 3);
  CHECK(sampled.states.size() == sampled.steps() + 1);
  CHECK_FALSE((sampled.failure && sampled.reached_goal));
}

TEST_CASE("unroll success compounds per step") {
  ChainDomain chain(50, 4);
  auto table = exhaustive_reverse_dijkstra(chain);
  auto opt = build_opt_table(chain, table, 1);
  auto policy = synthesize_policy(opt, chain, 0.95, 11);
  int successes = 0;
  std::size_t per_state_hits = 0;
  for (std::size_t i = 0; i < opt.size(); ++i) {
    if (!opt.opt_set(i).empty()) per_state_hits += opt.is_optimal(i, deterministic_action(policy.scores(opt.index()->key(i))));
  }
  CHECK(per_state_hits > 40);
  // A fixed table is one draw; averaging over many tables gives 0.95^50.
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    auto p = synthesize_policy(opt, chain, 0.95, seed);
    auto r = unroll(p, chain, 0, 50, UnrollMode::kGreedy, seed);
    successes += r.reached_goal;
  }
  CHECK(successes / 2000.0 == doctest::Approx(0.077).epsilon(0.35));
}
