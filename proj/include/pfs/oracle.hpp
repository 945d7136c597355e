#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pfs/domain.hpp"

namespace pfs {

/// Sorted set of state keys giving every enumerated state a dense index.
class StateIndex {
 public:
  StateIndex() = default;
  explicit StateIndex(std::vector<StateKey> sorted_keys);

  std::size_t size() const { return keys_.size(); }
  StateKey key(std::size_t index) const { return keys_[index]; }
  const std::vector<StateKey>& keys() const { return keys_; }
  std::optional<std::size_t> find(StateKey key) const;

 private:
  std::vector<StateKey> keys_;
};

/// Exact cost-to-go h*(s) for every state that can reach the goal.
class CostTable {
 public:
  CostTable(std::string domain_id, std::shared_ptr<const StateIndex> index, std::vector<double> costs);

  const std::string& domain_id() const { return domain_id_; }
  std::size_t size() const { return index_->size(); }
  const std::shared_ptr<const StateIndex>& index() const { return index_; }
  double cost_at(std::size_t index) const { return costs_[index]; }
  std::optional<double> lookup(StateKey key) const;
  /// Throws std::out_of_range for states that cannot reach the goal.
  double at(StateKey key) const;
  double max_cost() const;

 private:
  std::string domain_id_;
  std::shared_ptr<const StateIndex> index_;
  std::vector<double> costs_;
};

inline constexpr std::size_t kDefaultOracleStateBudget = 50'000'000;

/// Dijkstra over reversed edges from the goal. Throws ResourceLimitError once
/// more than `max_states` states have been discovered.
CostTable exhaustive_reverse_dijkstra(const Domain& domain,
                                      std::size_t max_states = kDefaultOracleStateBudget);

/// Binary container "CTB1": domain id, state count, then (u64 key, f64 cost) pairs.
void save_cost_table(const CostTable& table, const std::string& path);
CostTable load_cost_table(const std::string& path);

}  // namespace pfs
