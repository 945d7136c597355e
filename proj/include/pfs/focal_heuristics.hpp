#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfs/domain.hpp"

namespace pfs {

class StochasticPolicy;

/// Path statistics accumulated along the parent chain. Every focal key is a
/// function of these fields and the node's f-value.
struct FocalAnnotation {
  double log_likelihood = 0.0;  // sum of log pi(a_i, s_i) along the path
  double last_edge_prob = 1.0;
  int n_pref = 0;
  int n_nonpref = 0;
  long rank_sum = 0;
  int last_rank = 0;

  int edge_count() const { return n_pref + n_nonpref; }
};

enum class FocalKind { kScore1, kScore2, kScore3, kScore4, kDisc1, kDisc2, kDisc3 };

inline constexpr FocalKind kAllFocalKinds[] = {FocalKind::kScore1, FocalKind::kScore2,
                                               FocalKind::kScore3, FocalKind::kScore4,
                                               FocalKind::kDisc1,  FocalKind::kDisc2,
                                               FocalKind::kDisc3};

/// CLI names: score1..score4, disc1..disc3.
std::string_view to_string(FocalKind kind);
/// Throws ConfigError listing the valid names.
FocalKind parse_focal_kind(std::string_view name);
std::string valid_focal_kinds();

struct FocalConfig {
  FocalKind kind = FocalKind::kDisc2;
  double acc = 0.9;  // policy accuracy, used by disc1 only
  int alpha = 1;     // |A| - 1
  double prob_floor = 1e-30;
  bool disc3_last_edge_only = false;

  double clamped_acc() const;
  /// log(acc) / log((1 - acc) / alpha), the weight of a preferred edge in disc1.
  double disc1_coefficient() const;
};

FocalConfig make_focal_config(FocalKind kind, double acc, int action_count);

/// Policy output at one state, computed once per expansion and shared by all
/// children of that state.
struct ScoredState {
  std::vector<double> scores;
  ActionIndex preferred = kNoAction;

  /// Position of `action` in the scores sorted descending, ties by index; 0 is top.
  int rank(ActionIndex action) const;
};

ScoredState score_state(const StochasticPolicy& policy, StateKey state);

FocalAnnotation annotate_child(const FocalAnnotation& parent, const ScoredState& scored,
                               ActionIndex action, double prob_floor = 1e-30);
FocalAnnotation annotate_child(const FocalAnnotation& parent, const StochasticPolicy& policy,
                               StateKey parent_state, ActionIndex action,
                               double prob_floor = 1e-30);

/// FOCAL sort key; lower is preferred.
double focal_key(const FocalConfig& config, const FocalAnnotation& annotation, double f);

/// acc^n_pref * ((1 - acc) / alpha)^n_nonpref, evaluated in log space.
double p_prefix(const FocalAnnotation& annotation, double acc, int alpha);

}  // namespace pfs
