#include "pfs/focal_heuristics.hpp"

#include <algorithm>
#include <cmath>

#include "pfs/errors.hpp"
#include "pfs/policy.hpp"

namespace pfs {

std::string_view to_string(FocalKind kind) {
  switch (kind) {
    case FocalKind::kScore1: return "score1";
    case FocalKind::kScore2: return "score2";
    case FocalKind::kScore3: return "score3";
    case FocalKind::kScore4: return "score4";
    case FocalKind::kDisc1: return "disc1";
    case FocalKind::kDisc2: return "disc2";
    case FocalKind::kDisc3: return "disc3";
  }
  return "unknown";
}

std::string valid_focal_kinds() { return "score1, score2, score3, score4, disc1, disc2, disc3"; }

FocalKind parse_focal_kind(std::string_view name) {
  for (FocalKind k : kAllFocalKinds) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown focal heuristic '" + std::string(name) + "'; valid: " +
                    valid_focal_kinds());
}

double FocalConfig::clamped_acc() const { return std::clamp(acc, 1e-6, 1.0 - 1e-6); }

double FocalConfig::disc1_coefficient() const {
  const double a = clamped_acc();
  return std::log(a) / std::log((1.0 - a) / static_cast<double>(alpha));
}

FocalConfig make_focal_config(FocalKind kind, double acc, int action_count) {
  FocalConfig config;
  config.kind = kind;
  config.acc = acc;
  config.alpha = std::max(1, action_count - 1);
  return config;
}

int ScoredState::rank(ActionIndex action) const {
  const double mine = scores[static_cast<std::size_t>(action)];
  int rank = 0;
  for (std::size_t b = 0; b < scores.size(); ++b) {
    const auto other = static_cast<ActionIndex>(b);
    if (scores[b] > mine || (scores[b] == mine && other < action)) ++rank;
  }
  return rank;
}

ScoredState score_state(const StochasticPolicy& policy, StateKey state) {
  ScoredState scored;
  scored.scores.resize(static_cast<std::size_t>(policy.action_count()));
  policy.scores(state, scored.scores);
  scored.preferred = deterministic_action(scored.scores);
  return scored;
}

FocalAnnotation annotate_child(const FocalAnnotation& parent, const ScoredState& scored,
                               ActionIndex action, double prob_floor) {
  FocalAnnotation child = parent;
  const double p = std::max(scored.scores[static_cast<std::size_t>(action)], prob_floor);
  child.log_likelihood += std::log(p);
  child.last_edge_prob = p;
  if (action == scored.preferred) ++child.n_pref;
  else ++child.n_nonpref;
  child.last_rank = scored.rank(action);
  child.rank_sum += child.last_rank;
  return child;
}

FocalAnnotation annotate_child(const FocalAnnotation& parent, const StochasticPolicy& policy,
                               StateKey parent_state, ActionIndex action, double prob_floor) {
  return annotate_child(parent, score_state(policy, parent_state), action, prob_floor);
}

double focal_key(const FocalConfig& config, const FocalAnnotation& a, double f) {
  const double safe_f = std::max(f, 1e-12);
  switch (config.kind) {
    case FocalKind::kScore1: return -std::exp(a.log_likelihood);
    case FocalKind::kScore2: return -std::exp(a.log_likelihood) / safe_f;
    case FocalKind::kScore3: return -a.last_edge_prob;
    case FocalKind::kScore4: return -a.last_edge_prob / safe_f;
    case FocalKind::kDisc1:
      return config.disc1_coefficient() * a.n_pref + static_cast<double>(a.n_nonpref);
    case FocalKind::kDisc2: return static_cast<double>(a.n_nonpref);
    case FocalKind::kDisc3:
      return static_cast<double>(config.disc3_last_edge_only ? a.last_rank : a.rank_sum);
  }
  return 0.0;
}

double p_prefix(const FocalAnnotation& a, double acc, int alpha) {
  const double log_p = a.n_pref * std::log(acc) +
                       a.n_nonpref * std::log((1.0 - acc) / static_cast<double>(alpha));
  return std::exp(log_p);
}

}  // namespace pfs
