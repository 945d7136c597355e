#include "pfs/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "pfs/errors.hpp"

namespace pfs {

std::vector<double> StochasticPolicy::scores(StateKey state) const {
  std::vector<double> out(static_cast<std::size_t>(action_count()));
  scores(state, out);
  return out;
}

ActionIndex deterministic_action(std::span<const double> scores) {
  if (scores.empty()) return kNoAction;
  std::size_t best = 0;
  for (std::size_t a = 1; a < scores.size(); ++a) {
    if (scores[a] > scores[best]) best = a;
  }
  return static_cast<ActionIndex>(best);
}

ActionIndex deterministic_action(const StochasticPolicy& policy, StateKey state) {
  return deterministic_action(policy.scores(state));
}

OptTable::OptTable(std::shared_ptr<const StateIndex> index, std::vector<std::uint32_t> offsets,
                   std::vector<ActionIndex> actions, std::vector<ActionIndex> choice)
    : index_(std::move(index)),
      offsets_(std::move(offsets)),
      actions_(std::move(actions)),
      choice_(std::move(choice)) {
  if (offsets_.size() != index_->size() + 1 || choice_.size() != index_->size())
    throw std::invalid_argument("opt table arrays do not match the state index");
  for (std::size_t i = 0; i < size(); ++i) {
    if (offsets_[i + 1] > offsets_[i]) ++scored_;
  }
}

bool OptTable::is_optimal(std::size_t i, ActionIndex a) const {
  auto set = opt_set(i);
  return std::find(set.begin(), set.end(), a) != set.end();
}

OptTable build_opt_table(const Domain& domain, const CostTable& costs, std::uint64_t seed) {
  constexpr double kTolerance = 1e-9;
  std::mt19937_64 rng(seed);
  const auto& index = costs.index();
  std::vector<std::uint32_t> offsets{0};
  std::vector<ActionIndex> actions;
  std::vector<ActionIndex> choice(index->size(), kNoAction);
  offsets.reserve(index->size() + 1);
  std::vector<Transition> succ;

  for (std::size_t i = 0; i < index->size(); ++i) {
    const StateKey s = index->key(i);
    const double h = costs.cost_at(i);
    const std::size_t begin = actions.size();
    if (!domain.is_goal(s)) {
      domain.successors(s, succ);
      for (const Transition& t : succ) {
        auto ht = costs.lookup(t.state);
        if (ht && std::abs(h - (t.cost + *ht)) <= kTolerance) actions.push_back(t.action);
      }
      if (actions.size() == begin && h > 0)
        throw CorruptionError("state " + domain.format(s) + " has h* = " + std::to_string(h) +
                              " but no action satisfies the Bellman equation");
      if (actions.size() > begin) {
        std::uniform_int_distribution<std::size_t> pick(0, actions.size() - begin - 1);
        choice[i] = actions[begin + pick(rng)];
      }
    }
    offsets.push_back(static_cast<std::uint32_t>(actions.size()));
  }
  return OptTable(index, std::move(offsets), std::move(actions), std::move(choice));
}

SyntheticPolicyTable::SyntheticPolicyTable(std::string domain_id, int action_count,
                                           std::shared_ptr<const StateIndex> index,
                                           std::vector<float> rows, std::uint64_t seed,
                                           double target_acc, double measured_acc)
    : domain_id_(std::move(domain_id)),
      action_count_(action_count),
      index_(std::move(index)),
      rows_(std::move(rows)),
      seed_(seed),
      target_acc_(target_acc),
      measured_acc_(measured_acc) {
  if (rows_.size() != index_->size() * static_cast<std::size_t>(action_count_))
    throw std::invalid_argument("policy rows do not match the state index");
}

void SyntheticPolicyTable::scores(StateKey state, std::span<double> out) const {
  auto i = index_->find(state);
  if (!i) throw std::out_of_range("state is not covered by the synthetic policy");
  auto r = row(*i);
  for (std::size_t a = 0; a < r.size(); ++a) out[a] = r[a];
}

SyntheticPolicyTable synthesize_policy(const OptTable& opt, const Domain& domain,
                                       double target_acc, std::uint64_t seed) {
  const int n_actions = domain.action_count();
  if (n_actions < 2) throw ConfigError("synthetic policies need at least two actions");
  if (!(target_acc >= 0.0 && target_acc <= 1.0))
    throw ConfigError("target accuracy must lie in [0, 1]");

  const auto width = static_cast<std::size_t>(n_actions);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<float> rows(opt.size() * width);
  std::vector<double> y(width);
  std::vector<float> sorted(width);
  std::vector<ActionIndex> rest;
  rest.reserve(width);

  for (std::size_t i = 0; i < opt.size(); ++i) {
    for (double& v : y) v = normal(rng);
    const double top = *std::max_element(y.begin(), y.end());
    double total = 0.0;
    for (double& v : y) {
      v = std::exp(v - top);
      total += v;
    }
    for (double& v : y) v /= total;
    std::sort(y.begin(), y.end(), std::greater<>());
    // Keep the float scores strictly decreasing so argmax is never a tie.
    sorted[0] = static_cast<float>(y[0]);
    for (std::size_t k = 1; k < width; ++k) {
      sorted[k] = static_cast<float>(y[k]);
      if (!(sorted[k] < sorted[k - 1])) sorted[k] = std::nextafter(sorted[k - 1], 0.0f);
    }

    float* row = rows.data() + i * width;
    const ActionIndex a_opt = opt.opt_choice(i);
    rest.clear();
    for (ActionIndex a = 0; a < n_actions; ++a) {
      if (a != a_opt) rest.push_back(a);
    }
    std::size_t next_score = 0;
    std::size_t skipped = width;  // score index taken by a_opt

    if (a_opt != kNoAction) {
      std::size_t j = 0;
      if (!(unit(rng) < target_acc)) {
        const double tail = std::accumulate(y.begin() + 1, y.end(), 0.0);
        double r = unit(rng) * tail;
        j = width - 1;
        for (std::size_t k = 1; k < width; ++k) {
          r -= y[k];
          if (r < 0.0) {
            j = k;
            break;
          }
        }
      }
      row[a_opt] = sorted[j];
      skipped = j;
      if (j != 0) {
        // The top score must not land on another optimal action.
        std::vector<ActionIndex> wrong;
        for (ActionIndex a : rest) {
          if (!opt.is_optimal(i, a)) wrong.push_back(a);
        }
        if (!wrong.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, wrong.size() - 1);
          const ActionIndex taker = wrong[pick(rng)];
          row[taker] = sorted[0];
          rest.erase(std::find(rest.begin(), rest.end(), taker));
          next_score = 1;
        }
      }
    }

    std::shuffle(rest.begin(), rest.end(), rng);
    for (ActionIndex a : rest) {
      if (next_score == skipped) ++next_score;
      row[a] = sorted[next_score++];
    }
  }

  SyntheticPolicyTable table(domain.id(), n_actions, opt.index(), std::move(rows), seed,
                             target_acc, 0.0);
  table.set_measured_acc(measure_accuracy(table, opt));
  return table;
}

double measure_accuracy(const StochasticPolicy& policy, const OptTable& opt,
                        std::optional<std::span<const StateKey>> sample) {
  std::vector<double> scores(static_cast<std::size_t>(policy.action_count()));
  std::size_t hits = 0;
  std::size_t total = 0;
  auto visit = [&](std::size_t i) {
    policy.scores(opt.index()->key(i), scores);
    if (opt.is_optimal(i, deterministic_action(scores))) ++hits;
    ++total;
  };
  if (sample) {
    for (StateKey key : *sample) {
      auto i = opt.index()->find(key);
      if (!i || opt.opt_set(*i).empty())
        throw std::invalid_argument("sampled state has no optimal action");
      visit(*i);
    }
  } else {
    for (std::size_t i = 0; i < opt.size(); ++i) {
      if (!opt.opt_set(i).empty()) visit(i);
    }
  }
  if (total == 0) throw std::invalid_argument("accuracy sample is empty");
  return static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<StateKey> sample_scored_states(const OptTable& opt, std::size_t n, std::uint64_t seed) {
  std::vector<StateKey> pool;
  pool.reserve(opt.scored_count());
  for (std::size_t i = 0; i < opt.size(); ++i) {
    if (!opt.opt_set(i).empty()) pool.push_back(opt.index()->key(i));
  }
  n = std::min(n, pool.size());
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(n);
  return pool;
}

UnrollResult unroll(const StochasticPolicy& policy, const Domain& domain, StateKey start,
                    std::size_t k, UnrollMode mode, std::uint64_t seed) {
  UnrollResult result;
  result.states.push_back(start);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> scores(static_cast<std::size_t>(policy.action_count()));
  std::vector<Transition> succ;

  StateKey state = start;
  for (std::size_t step = 0; step < k && !domain.is_goal(state); ++step) {
    policy.scores(state, scores);
    ActionIndex action = kNoAction;
    if (mode == UnrollMode::kGreedy) {
      action = deterministic_action(scores);
    } else {
      double r = unit(rng);
      action = static_cast<ActionIndex>(scores.size() - 1);
      for (std::size_t a = 0; a < scores.size(); ++a) {
        r -= scores[a];
        if (r < 0.0) {
          action = static_cast<ActionIndex>(a);
          break;
        }
      }
    }
    domain.successors(state, succ);
    auto it = std::find_if(succ.begin(), succ.end(),
                           [&](const Transition& t) { return t.action == action; });
    if (it == succ.end()) {
      result.failure = std::make_pair(state, action);
      return result;
    }
    state = it->state;
    result.cost += it->cost;
    result.actions.push_back(action);
    result.states.push_back(state);
  }
  result.reached_goal = domain.is_goal(state);
  return result;
}

}  // namespace pfs
