#include "pfs/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "binary_io.hpp"
#include "pfs/errors.hpp"

namespace pfs {

StateIndex::StateIndex(std::vector<StateKey> sorted_keys) : keys_(std::move(sorted_keys)) {
  if (!std::is_sorted(keys_.begin(), keys_.end()) ||
      std::adjacent_find(keys_.begin(), keys_.end()) != keys_.end())
    throw std::invalid_argument("state index keys must be strictly increasing");
}

std::optional<std::size_t> StateIndex::find(StateKey key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

CostTable::CostTable(std::string domain_id, std::shared_ptr<const StateIndex> index,
                     std::vector<double> costs)
    : domain_id_(std::move(domain_id)), index_(std::move(index)), costs_(std::move(costs)) {
  if (!index_ || index_->size() != costs_.size())
    throw std::invalid_argument("cost table size does not match its index");
}

std::optional<double> CostTable::lookup(StateKey key) const {
  auto i = index_->find(key);
  if (!i) return std::nullopt;
  return costs_[*i];
}

double CostTable::at(StateKey key) const {
  auto i = index_->find(key);
  if (!i) throw std::out_of_range("state is not in the cost table");
  return costs_[*i];
}

double CostTable::max_cost() const {
  return costs_.empty() ? 0.0 : *std::max_element(costs_.begin(), costs_.end());
}

CostTable exhaustive_reverse_dijkstra(const Domain& domain, std::size_t max_states) {
  using Entry = std::pair<double, StateKey>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  std::unordered_map<StateKey, double> dist;
  dist.reserve(1 << 16);

  const StateKey goal = domain.goal();
  dist[goal] = 0.0;
  frontier.push({0.0, goal});
  std::vector<Transition> preds;
  std::vector<std::pair<StateKey, double>> done;

  while (!frontier.empty()) {
    auto [d, s] = frontier.top();
    frontier.pop();
    // Entries are only pushed on strict improvement, so one pop per distance.
    if (d > dist.find(s)->second) continue;
    done.emplace_back(s, d);
    domain.predecessors(s, preds);
    for (const Transition& p : preds) {
      double nd = d + p.cost;
      auto [it, inserted] = dist.try_emplace(p.state, nd);
      if (inserted) {
        if (dist.size() > max_states)
          throw ResourceLimitError("state budget exceeded: " + std::to_string(dist.size()) +
                                   " states reached (limit " + std::to_string(max_states) + ")");
        frontier.push({nd, p.state});
      } else if (nd < it->second) {
        it->second = nd;
        frontier.push({nd, p.state});
      }
    }
  }

  std::sort(done.begin(), done.end());
  std::vector<StateKey> keys;
  std::vector<double> costs;
  keys.reserve(done.size());
  costs.reserve(done.size());
  for (auto& [k, c] : done) {
    keys.push_back(k);
    costs.push_back(c);
  }
  return CostTable(domain.id(), std::make_shared<StateIndex>(std::move(keys)), std::move(costs));
}

void save_cost_table(const CostTable& table, const std::string& path) {
  detail::ByteWriter w;
  w.put_bytes("CTB1");
  w.put_string(table.domain_id());
  w.put<std::uint64_t>(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    w.put<std::uint64_t>(table.index()->key(i));
    w.put<double>(table.cost_at(i));
  }
  detail::write_file(path, w.bytes());
}

CostTable load_cost_table(const std::string& path) {
  auto bytes = detail::read_file(path);
  detail::ByteReader r(bytes, path);
  r.expect_magic("CTB1");
  std::string id = r.get_string();
  auto n = r.get<std::uint64_t>();
  if (n > r.remaining() / 16) r.fail("state count " + std::to_string(n) + " exceeds file size");
  std::vector<StateKey> keys(n);
  std::vector<double> costs(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    keys[i] = r.get<std::uint64_t>();
    costs[i] = r.get<double>();
    if (i > 0 && keys[i] <= keys[i - 1]) r.fail("keys are not strictly increasing");
  }
  return CostTable(std::move(id), std::make_shared<StateIndex>(std::move(keys)), std::move(costs));
}

}  // namespace pfs
