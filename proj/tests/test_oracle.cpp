#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "pfs/errors.hpp"
#include "pfs/oracle.hpp"
#include "support.hpp"

using namespace pfs;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pfs_test_" + name)).string();
}

}  // namespace

TEST_CASE("state space sizes") {
  CHECK(testing::oracle("tile8").size() == 181440);
  CHECK(testing::oracle("pancake9").size() == 362880);
  CHECK(testing::oracle("pancake7").size() == 5040);
  for (const char* id : {"tile8", "pancake9", "blocks8"}) {
    const auto& d = testing::domain(id);
    CHECK(testing::oracle(id).at(d.goal()) == 0.0);
  }
  // Known diameters.
  CHECK(testing::oracle("tile8").max_cost() == 31);
  CHECK(testing::oracle("pancake9").max_cost() == 10);
}

TEST_CASE("oracle costs satisfy the Bellman equation") {
  for (const char* id : {"pancake7", "tile8", "blocks4"}) {
    const auto& d = testing::domain(id);
    const auto& table = testing::oracle(id);
    std::vector<Transition> out;
    for (std::size_t i = 0; i < table.size(); ++i) {
      StateKey s = table.index()->key(i);
      if (d.is_goal(s)) continue;
      d.successors(s, out);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& t : out) best = std::min(best, t.cost + table.at(t.state));
      REQUIRE(best == table.cost_at(i));
    }
  }
}

TEST_CASE("lookup outside the table") {
  const auto& table = testing::oracle("pancake7");
  CHECK_FALSE(table.lookup(0xFFFFFFFFull));
  CHECK_THROWS_AS(table.at(0xFFFFFFFFull), std::out_of_range);
  CHECK(table.index()->find(table.index()->key(17)) == 17u);
}

TEST_CASE("state budget") {
  try {
    exhaustive_reverse_dijkstra(testing::domain("tile8"), 1000);
    FAIL("expected a resource limit error");
  } catch (const ResourceLimitError& e) {
    CHECK(std::string(e.what()).find("1000") != std::string::npos);
  }
}

TEST_CASE("cost table container round trip") {
  const auto& table = testing::oracle("pancake7");
  auto path = temp_path("p7.ctb");
  save_cost_table(table, path);
  auto loaded = load_cost_table(path);
  CHECK(loaded.domain_id() == "pancake7");
  REQUIRE(loaded.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    REQUIRE(loaded.index()->key(i) == table.index()->key(i));
    REQUIRE(loaded.cost_at(i) == table.cost_at(i));
  }

  auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 3);
  try {
    load_cost_table(path);
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "NOPE1234";
  }
  CHECK_THROWS_AS(load_cost_table(path), FormatError);
  CHECK_THROWS_AS(load_cost_table(temp_path("missing.ctb")), FormatError);
  std::remove(path.c_str());
}
