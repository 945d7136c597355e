#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pfs/domain.hpp"
#include "pfs/focal_heuristics.hpp"
#include "pfs/node_table.hpp"

namespace pfs {

class StochasticPolicy;

struct SearchLimits {
  std::uint64_t max_expansions = 10'000'000;
  double max_seconds = 300.0;
  /// Recomputes f_min over OPEN at every extraction (O(|nodes|)); test use only.
  bool audit = false;
};

enum class SearchStatus { kSolved, kExhausted, kTimeout, kExpansionLimit };

std::string_view to_string(SearchStatus status);

struct SearchStats {
  std::uint64_t improvements = 0;  // g-value improvements of already generated states
  std::uint64_t stale_open_pops = 0;
  std::uint64_t stale_focal_pops = 0;
  std::uint64_t focal_bound_violations = 0;  // audit: extracted f > w * fresh f_min
  std::uint64_t fmin_decreases = 0;          // audit: fresh f_min dropped between extractions
  bool extracted_goal = false;
};

struct SearchResult {
  SearchStatus status = SearchStatus::kExhausted;
  std::vector<PathStep> path;
  double cost = 0.0;
  std::uint64_t expansions = 0;   // non-stale extractions, including the goal
  std::uint64_t generations = 0;  // successors produced by expansions
  double wall_time = 0.0;
  double bound_w = 1.0;
  double f_min_at_termination = 0.0;
  FocalAnnotation terminal_annotation;
  SearchStats stats;

  bool solved() const { return status == SearchStatus::kSolved; }
};

/// Best-first search on f = g + w * h with reopening.
SearchResult weighted_astar(const Domain& domain, StateKey start, double w,
                            const SearchLimits& limits = {});

/// Focal Search: OPEN on f = g + h, FOCAL holds OPEN members with
/// f <= w * f_min ordered by the focal key of `config`.
SearchResult focal_search(const Domain& domain, StateKey start, double w,
                          const FocalConfig& config, const StochasticPolicy& policy,
                          const SearchLimits& limits = {});

/// A* with two open lists on f = g + h. The child reached by the policy's
/// argmax action goes to the preferred list, which is always drained first.
SearchResult preferred_astar(const Domain& domain, StateKey start, const StochasticPolicy& policy,
                             const SearchLimits& limits = {});

}  // namespace pfs
