#include "pfs/search.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "pfs/errors.hpp"
#include "pfs/focal_queues.hpp"
#include "pfs/policy.hpp"

namespace pfs {

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::kSolved: return "solved";
    case SearchStatus::kExhausted: return "exhausted";
    case SearchStatus::kTimeout: return "timeout";
    case SearchStatus::kExpansionLimit: return "expansion-limit";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

class RunClock {
 public:
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_ = Clock::now();
};

// Returns true (and sets the status) once a limit is hit. Called after each
// non-goal extraction.
bool limit_reached(const SearchLimits& limits, const RunClock& clock, SearchResult& result) {
  if (result.expansions >= limits.max_expansions) {
    result.status = SearchStatus::kExpansionLimit;
    return true;
  }
  if ((result.expansions & 255) == 0 && clock.seconds() >= limits.max_seconds) {
    result.status = SearchStatus::kTimeout;
    return true;
  }
  return false;
}

void check_weight(double w) {
  if (!(w >= 1.0) || !std::isfinite(w)) throw std::invalid_argument("suboptimality bound w must be a finite value >= 1");
}

struct OpenEntry {
  double f;
  double g;
  std::uint64_t seq;
  NodeId node;
  std::uint32_t stamp;
};

struct OpenWorse {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.seq > b.seq;
  }
};

using OpenHeap = std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenWorse>;

// Stamp bookkeeping for the single- and dual-list A* variants.
class Stamps {
 public:
  std::uint32_t renew(NodeId node) {
    if (node >= stamps_.size()) stamps_.resize(node + 1, 0);
    stamps_[node] = next_++;
    return stamps_[node];
  }
  void clear(NodeId node) { stamps_[node] = 0; }
  bool live(const OpenEntry& e) const { return e.node < stamps_.size() && stamps_[e.node] == e.stamp; }

 private:
  std::vector<std::uint32_t> stamps_;
  std::uint32_t next_ = 1;
};

// Drops stale entries; returns false when the heap runs dry.
bool settle_top(OpenHeap& heap, const Stamps& stamps, std::uint64_t& stale) {
  while (!heap.empty()) {
    if (stamps.live(heap.top())) return true;
    heap.pop();
    ++stale;
  }
  return false;
}

void finish_solved(const Domain& domain, const NodeTable& nodes, NodeId goal, SearchResult& result) {
  result.status = SearchStatus::kSolved;
  result.path = reconstruct_path(nodes, goal);
  result.stats.extracted_goal = true;
  // An ancestor whose g improved after the goal was generated leaves a parent
  // chain cheaper than g(goal). Report what the returned path actually costs.
  result.cost = 0.0;
  for (std::size_t i = 1; i < result.path.size(); ++i)
    result.cost += domain.edge_cost(result.path[i - 1].state, result.path[i].action);
}

}  // namespace

SearchResult weighted_astar(const Domain& domain, StateKey start, double w,
                            const SearchLimits& limits) {
  check_weight(w);
  RunClock clock;
  SearchResult result;
  result.bound_w = w;

  NodeTable nodes;
  OpenHeap open;
  Stamps stamps;
  std::uint64_t seq = 0;

  const double h0 = domain.heuristic(start);
  if (std::isinf(h0)) {
    result.wall_time = clock.seconds();
    return result;
  }
  NodeRecord root;
  root.state = start;
  root.h = h0;
  root.f = w * h0;
  root.fifo_seq = seq++;
  NodeId root_id = nodes.add(root);
  open.push({root.f, 0.0, root.fifo_seq, root_id, stamps.renew(root_id)});

  std::vector<Transition> succ;
  while (true) {
    if (!settle_top(open, stamps, result.stats.stale_open_pops)) {
      result.status = SearchStatus::kExhausted;
      break;
    }
    OpenEntry e = open.top();
    open.pop();
    stamps.clear(e.node);
    ++result.expansions;
    result.f_min_at_termination = e.f;

    const StateKey state = nodes[e.node].state;
    if (domain.is_goal(state)) {
      finish_solved(domain, nodes, e.node, result);
      break;
    }
    if (limit_reached(limits, clock, result)) break;

    const double g = nodes[e.node].g;
    domain.successors(state, succ);
    for (const Transition& t : succ) {
      ++result.generations;
      const double new_g = g + t.cost;
      NodeId child;
      if (auto existing = nodes.find(t.state)) {
        child = *existing;
        if (!(new_g < nodes[child].g)) continue;
        ++result.stats.improvements;
      } else {
        NodeRecord rec;
        rec.state = t.state;
        rec.h = domain.heuristic(t.state);
        if (std::isinf(rec.h)) continue;
        rec.g = std::numeric_limits<double>::infinity();
        child = nodes.add(rec);
      }
      NodeRecord& n = nodes[child];
      n.g = new_g;
      n.f = new_g + w * n.h;
      n.parent = e.node;
      n.action = t.action;
      n.fifo_seq = seq++;
      open.push({n.f, n.g, n.fifo_seq, child, stamps.renew(child)});
    }
  }
  result.wall_time = clock.seconds();
  return result;
}

SearchResult focal_search(const Domain& domain, StateKey start, double w,
                          const FocalConfig& config, const StochasticPolicy& policy,
                          const SearchLimits& limits) {
  check_weight(w);
  if (policy.action_count() != domain.action_count())
    throw std::invalid_argument("policy action count does not match the domain");
  RunClock clock;
  SearchResult result;
  result.bound_w = w;

  NodeTable nodes;
  std::uint64_t seq = 0;

  const double h0 = domain.heuristic(start);
  if (std::isinf(h0)) {
    result.wall_time = clock.seconds();
    return result;
  }
  NodeRecord root;
  root.state = start;
  root.h = h0;
  root.f = h0;
  root.fifo_seq = seq++;
  NodeId root_id = nodes.add(root);

  FocalQueues queues(w * root.f);
  queues.insert(root_id, root.f, 0.0, focal_key(config, root.annotation, root.f), root.fifo_seq);

  double previous_fresh_fmin = -std::numeric_limits<double>::infinity();
  std::vector<Transition> succ;
  while (true) {
    auto top = queues.open_top();
    if (!top) {
      result.status = SearchStatus::kExhausted;
      break;
    }
    const double f_min = top->f;
    result.f_min_at_termination = f_min;
    if (w * f_min > queues.bound()) queues.update_lower_bound(w * f_min);

    double fresh_fmin = std::numeric_limits<double>::infinity();
    if (limits.audit) {
      for (NodeId id = 0; id < nodes.size(); ++id) {
        if (queues.contains(id)) fresh_fmin = std::min(fresh_fmin, nodes[id].f);
      }
      if (fresh_fmin < previous_fresh_fmin - kBoundTolerance) ++result.stats.fmin_decreases;
      previous_fresh_fmin = fresh_fmin;
    }

    auto picked = queues.pop_focal();
    if (!picked) throw CorruptionError("FOCAL is empty while OPEN is not");
    const NodeId id = picked->node;
    ++result.expansions;
    if (limits.audit && nodes[id].f > w * fresh_fmin + kBoundTolerance)
      ++result.stats.focal_bound_violations;

    const StateKey state = nodes[id].state;
    if (domain.is_goal(state)) {
      finish_solved(domain, nodes, id, result);
      for (std::size_t i = 1; i < result.path.size(); ++i)
        result.terminal_annotation = annotate_child(result.terminal_annotation, policy, result.path[i - 1].state,
                                                    result.path[i].action, config.prob_floor);
      break;
    }
    if (limit_reached(limits, clock, result)) break;

    const ScoredState scored = score_state(policy, state);
    const double g = nodes[id].g;
    const FocalAnnotation parent_annotation = nodes[id].annotation;
    domain.successors(state, succ);
    for (const Transition& t : succ) {
      ++result.generations;
      const double new_g = g + t.cost;
      NodeId child;
      if (auto existing = nodes.find(t.state)) {
        child = *existing;
        if (!(new_g < nodes[child].g)) continue;
        ++result.stats.improvements;
      } else {
        NodeRecord rec;
        rec.state = t.state;
        rec.h = domain.heuristic(t.state);
        if (std::isinf(rec.h)) continue;
        rec.g = std::numeric_limits<double>::infinity();
        child = nodes.add(rec);
      }
      NodeRecord& n = nodes[child];
      n.g = new_g;
      n.f = new_g + n.h;
      n.parent = id;
      n.action = t.action;
      n.annotation = annotate_child(parent_annotation, scored, t.action, config.prob_floor);
      n.fifo_seq = seq++;
      queues.insert(child, n.f, n.g, focal_key(config, n.annotation, n.f), n.fifo_seq);
    }

    if (auto next = queues.open_top(); next && f_min < next->f)
      queues.update_lower_bound(w * next->f);
  }
  result.stats.stale_open_pops = queues.stale_open_pops();
  result.stats.stale_focal_pops = queues.stale_focal_pops();
  result.wall_time = clock.seconds();
  return result;
}

SearchResult preferred_astar(const Domain& domain, StateKey start, const StochasticPolicy& policy,
                             const SearchLimits& limits) {
  if (policy.action_count() != domain.action_count())
    throw std::invalid_argument("policy action count does not match the domain");
  RunClock clock;
  SearchResult result;
  result.bound_w = std::numeric_limits<double>::infinity();

  NodeTable nodes;
  OpenHeap preferred;
  OpenHeap regular;
  Stamps stamps;
  std::uint64_t seq = 0;

  const double h0 = domain.heuristic(start);
  if (std::isinf(h0)) {
    result.wall_time = clock.seconds();
    return result;
  }
  NodeRecord root;
  root.state = start;
  root.h = h0;
  root.f = h0;
  root.fifo_seq = seq++;
  NodeId root_id = nodes.add(root);
  regular.push({root.f, 0.0, root.fifo_seq, root_id, stamps.renew(root_id)});

  std::vector<Transition> succ;
  std::vector<double> scores(static_cast<std::size_t>(policy.action_count()));
  while (true) {
    OpenHeap* source = nullptr;
    if (settle_top(preferred, stamps, result.stats.stale_open_pops)) source = &preferred;
    else if (settle_top(regular, stamps, result.stats.stale_open_pops)) source = &regular;
    if (!source) {
      result.status = SearchStatus::kExhausted;
      break;
    }
    OpenEntry e = source->top();
    source->pop();
    stamps.clear(e.node);
    ++result.expansions;
    result.f_min_at_termination = e.f;

    const StateKey state = nodes[e.node].state;
    if (domain.is_goal(state)) {
      finish_solved(domain, nodes, e.node, result);
      break;
    }
    if (limit_reached(limits, clock, result)) break;

    policy.scores(state, scores);
    const ActionIndex chosen = deterministic_action(scores);
    const double g = nodes[e.node].g;
    domain.successors(state, succ);
    for (const Transition& t : succ) {
      ++result.generations;
      const double new_g = g + t.cost;
      NodeId child;
      if (auto existing = nodes.find(t.state)) {
        child = *existing;
        if (!(new_g < nodes[child].g)) continue;
        ++result.stats.improvements;
      } else {
        NodeRecord rec;
        rec.state = t.state;
        rec.h = domain.heuristic(t.state);
        if (std::isinf(rec.h)) continue;
        rec.g = std::numeric_limits<double>::infinity();
        child = nodes.add(rec);
      }
      NodeRecord& n = nodes[child];
      n.g = new_g;
      n.f = new_g + n.h;
      n.parent = e.node;
      n.action = t.action;
      n.fifo_seq = seq++;
      OpenHeap& target = t.action == chosen ? preferred : regular;
      target.push({n.f, n.g, n.fifo_seq, child, stamps.renew(child)});
    }
  }
  result.wall_time = clock.seconds();
  return result;
}

}  // namespace pfs
