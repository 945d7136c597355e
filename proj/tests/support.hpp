#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pfs/domain.hpp"
#include "pfs/oracle.hpp"
#include "pfs/policy.hpp"

namespace testing {

// Domains and oracle tables are expensive to rebuild, so tests share them.
inline const pfs::Domain& domain(const std::string& id) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<pfs::Domain>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[id];
  if (!slot) slot = pfs::make_domain(id);
  return *slot;
}

inline const pfs::CostTable& oracle(const std::string& id) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<pfs::CostTable>> cache;
  const pfs::Domain& d = domain(id);
  std::lock_guard lock(mutex);
  auto& slot = cache[id];
  if (!slot) slot = std::make_unique<pfs::CostTable>(pfs::exhaustive_reverse_dijkstra(d));
  return *slot;
}

inline std::vector<pfs::StateKey> sample_states(const std::string& id, std::size_t n, std::uint64_t seed,
                                                bool include_goal = false) {
  const auto& table = oracle(id);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, table.size() - 1);
  std::vector<pfs::StateKey> out;
  while (out.size() < n) {
    auto key = table.index()->key(pick(rng));
    if (!include_goal && domain(id).is_goal(key)) continue;
    out.push_back(key);
  }
  return out;
}

// Fixed score vector regardless of state.
class ConstantPolicy final : public pfs::StochasticPolicy {
 public:
  explicit ConstantPolicy(std::vector<double> scores) : scores_(std::move(scores)) {}
  int action_count() const override { return static_cast<int>(scores_.size()); }
  void scores(pfs::StateKey, std::span<double> out) const override {
    std::copy(scores_.begin(), scores_.end(), out.begin());
  }
  using pfs::StochasticPolicy::scores;

 private:
  std::vector<double> scores_;
};

// Deterministic pseudo-random distribution per state, independent of any oracle.
class HashPolicy final : public pfs::StochasticPolicy {
 public:
  HashPolicy(int actions, std::uint64_t salt) : actions_(actions), salt_(salt) {}
  int action_count() const override { return actions_; }
  void scores(pfs::StateKey state, std::span<double> out) const override {
    std::mt19937_64 rng(state * 0x9E3779B97F4A7C15ull ^ salt_);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    double total = 0.0;
    for (int a = 0; a < actions_; ++a) total += out[a] = u(rng);
    for (int a = 0; a < actions_; ++a) out[a] /= total;
  }
  using pfs::StochasticPolicy::scores;

 private:
  int actions_;
  std::uint64_t salt_;
};

}  // namespace testing
