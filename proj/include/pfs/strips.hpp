#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pfs {

/// Propositional STRIPS model with unit-cost actions.
struct StripsAction {
  std::string name;
  std::vector<int> pre;
  std::vector<int> add;
  std::vector<int> del;
};

class GroundedStrips {
 public:
  GroundedStrips(std::vector<std::string> propositions, std::vector<StripsAction> actions);

  int proposition_count() const { return static_cast<int>(propositions_.size()); }
  int action_count() const { return static_cast<int>(actions_.size()); }
  const std::string& proposition(int p) const { return propositions_[p]; }
  const StripsAction& action(int a) const { return actions_[a]; }

  bool applicable(int a, const std::vector<bool>& state) const;
  std::vector<bool> apply(int a, const std::vector<bool>& state) const;

  /// Delete-relaxation h_max: the max over goal propositions of their relaxed
  /// unit-cost reachability depth from `state`. +inf when some goal is unreachable.
  double hmax(const std::vector<bool>& state, const std::vector<int>& goal) const;

 private:
  std::vector<std::string> propositions_;
  std::vector<StripsAction> actions_;
  // Flattened views for hmax: consumers of proposition p are
  // consumer_list_[consumer_start_[p] .. consumer_start_[p + 1]).
  std::vector<int> consumer_start_;
  std::vector<int> consumer_list_;
  std::vector<int> add_start_;
  std::vector<int> add_list_;
  std::vector<int> pre_count_;
};

}  // namespace pfs
