#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfs/domain.hpp"
#include "pfs/oracle.hpp"

namespace pfs {

/// pi(., s): a probability vector over the whole action index set. Mass on
/// inapplicable actions is allowed.
class StochasticPolicy {
 public:
  virtual ~StochasticPolicy() = default;
  virtual int action_count() const = 0;
  /// `out` has action_count() entries.
  virtual void scores(StateKey state, std::span<double> out) const = 0;

  std::vector<double> scores(StateKey state) const;
};

/// Argmax of the scores; ties go to the lowest action index.
ActionIndex deterministic_action(std::span<const double> scores);
ActionIndex deterministic_action(const StochasticPolicy& policy, StateKey state);

/// Per-state optimal actions derived from an exact cost table.
class OptTable {
 public:
  OptTable(std::shared_ptr<const StateIndex> index, std::vector<std::uint32_t> offsets,
           std::vector<ActionIndex> actions, std::vector<ActionIndex> choice);

  std::size_t size() const { return index_->size(); }
  const std::shared_ptr<const StateIndex>& index() const { return index_; }
  std::span<const ActionIndex> opt_set(std::size_t i) const {
    return {actions_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  bool is_optimal(std::size_t i, ActionIndex a) const;
  /// The single representative optimal action, or kNoAction at the goal.
  ActionIndex opt_choice(std::size_t i) const { return choice_[i]; }
  /// States with a non-empty opt set (all but the goal).
  std::size_t scored_count() const { return scored_; }

 private:
  std::shared_ptr<const StateIndex> index_;
  std::vector<std::uint32_t> offsets_;
  std::vector<ActionIndex> actions_;
  std::vector<ActionIndex> choice_;
  std::size_t scored_ = 0;
};

/// One-step Bellman test against the cost table; the representative action is
/// drawn uniformly from the optimal set under `seed`.
OptTable build_opt_table(const Domain& domain, const CostTable& costs, std::uint64_t seed);

/// Dense table of score rows (32-bit floats) in state-key order.
class SyntheticPolicyTable final : public StochasticPolicy {
 public:
  SyntheticPolicyTable(std::string domain_id, int action_count,
                       std::shared_ptr<const StateIndex> index, std::vector<float> rows,
                       std::uint64_t seed, double target_acc, double measured_acc);

  int action_count() const override { return action_count_; }
  /// Throws std::out_of_range for states outside the table.
  void scores(StateKey state, std::span<double> out) const override;
  using StochasticPolicy::scores;

  const std::string& domain_id() const { return domain_id_; }
  std::size_t size() const { return index_->size(); }
  const std::shared_ptr<const StateIndex>& index() const { return index_; }
  std::span<const float> row(std::size_t i) const {
    return {rows_.data() + i * static_cast<std::size_t>(action_count_),
            static_cast<std::size_t>(action_count_)};
  }
  const std::vector<float>& rows() const { return rows_; }
  std::uint64_t seed() const { return seed_; }
  double target_acc() const { return target_acc_; }
  double measured_acc() const { return measured_acc_; }
  int alpha() const { return action_count_ - 1; }

  void set_measured_acc(double acc) { measured_acc_ = acc; }

 private:
  std::string domain_id_;
  int action_count_;
  std::shared_ptr<const StateIndex> index_;
  std::vector<float> rows_;
  std::uint64_t seed_;
  double target_acc_;
  double measured_acc_;
};

/// Builds a policy whose argmax is optimal with probability `target_acc` per
/// state. Scores are a softmax over standard-normal draws, sorted; the
/// representative optimal action takes the top score with probability
/// target_acc, otherwise score j >= 2 with probability proportional to y_j.
/// On a miss the top score goes to a non-optimal action when one exists.
SyntheticPolicyTable synthesize_policy(const OptTable& opt, const Domain& domain,
                                       double target_acc, std::uint64_t seed);

/// Fraction of sampled states whose argmax lies in the optimal set. The
/// default sample is every state with a non-empty optimal set.
double measure_accuracy(const StochasticPolicy& policy, const OptTable& opt,
                        std::optional<std::span<const StateKey>> sample = std::nullopt);

/// Uniform sample without replacement from states with a non-empty optimal set.
std::vector<StateKey> sample_scored_states(const OptTable& opt, std::size_t n, std::uint64_t seed);

enum class UnrollMode { kGreedy, kSample };

struct UnrollResult {
  std::vector<StateKey> states;  // starts with the start state
  std::vector<ActionIndex> actions;
  double cost = 0.0;
  bool reached_goal = false;
  /// Set when the chosen action was inapplicable.
  std::optional<std::pair<StateKey, ActionIndex>> failure;

  std::size_t steps() const { return actions.size(); }
};

/// Applies the policy up to k times, stopping early at the goal.
UnrollResult unroll(const StochasticPolicy& policy, const Domain& domain, StateKey start,
                    std::size_t k, UnrollMode mode, std::uint64_t seed);

struct PolicyFileHeader {
  std::string domain_id;
  std::uint32_t action_count = 0;
  std::uint64_t state_count = 0;
  std::uint64_t seed = 0;
  double target_acc = 0.0;
  double measured_acc = 0.0;
};

/// "SPT1" container: header, then one row of action_count float32 per state
/// in ascending key order.
void save_policy_table(const SyntheticPolicyTable& table, const std::string& path);
PolicyFileHeader read_policy_header(const std::string& path);
/// `index` must enumerate the same states the table was built over.
SyntheticPolicyTable load_policy_table(const std::string& path,
                                       std::shared_ptr<const StateIndex> index);

}  // namespace pfs
