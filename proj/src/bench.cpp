#include "pfs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "pfs/errors.hpp"
#include "pfs/mlp.hpp"
#include "pfs/oracle.hpp"
#include "pfs/policy.hpp"
#include "pfs/tile.hpp"

namespace pfs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct ConfigLine {
  std::size_t number;
  std::string key;
};

double parse_double(std::string_view text, const ConfigLine& where) {
  std::string s(trim(text));
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigError("line " + std::to_string(where.number) + ": " + where.key +
                      " expects a number, got '" + s + "'");
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, const ConfigLine& where) {
  auto s = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("line " + std::to_string(where.number) + ": " + where.key +
                      " expects a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

bool parse_bool(std::string_view text, const ConfigLine& where) {
  auto s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("line " + std::to_string(where.number) + ": " + where.key +
                    " expects true or false, got '" + std::string(s) + "'");
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto comma = value.find(',', start);
    if (comma == std::string_view::npos) comma = value.size();
    auto item = trim(value.substr(start, comma - start));
    if (!item.empty()) items.push_back(item);
    start = comma + 1;
  }
  return items;
}

void validate(const ExperimentConfig& c) {
  if (c.domain.empty()) throw ConfigError("domain is required; valid: " + valid_domain_ids());
  make_domain(c.domain);
  if (c.algorithms.empty()) throw ConfigError("at least one algorithm is required");
  const bool needs_bounds = std::any_of(c.algorithms.begin(), c.algorithms.end(),
                                        [](const AlgorithmSpec& a) { return a.bounded(); });
  if (needs_bounds && c.bounds.empty()) throw ConfigError("bounded algorithms need at least one bound");
  for (double w : c.bounds) {
    if (!(w >= 1.0) || std::isinf(w)) throw ConfigError("bound " + fmt(w) + " must be finite and >= 1");
  }
  if (c.learned()) {
    if (!c.accuracies.empty()) throw ConfigError("accuracy applies to synthetic policies; use model_acc with a model");
    if (c.instance_file.empty()) throw ConfigError("model runs need an instance_file");
    const bool disc1 = std::any_of(c.algorithms.begin(), c.algorithms.end(), [](const AlgorithmSpec& a) {
      return a.kind == AlgorithmSpec::kFocal && a.focal == FocalKind::kDisc1;
    });
    if (disc1 && !c.model_acc) throw ConfigError("focal:disc1 with a model needs model_acc");
  } else {
    if (c.accuracies.empty()) throw ConfigError("synthetic sweeps need at least one accuracy");
    if (c.model_acc) throw ConfigError("model_acc needs a model");
  }
  for (double a : c.accuracies) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("accuracy " + fmt(a) + " must lie in [0, 1]");
  }
  if (c.model_acc && !(*c.model_acc > 0.0 && *c.model_acc < 1.0))
    throw ConfigError("model_acc must lie in (0, 1)");
  if (c.seeds.empty()) throw ConfigError("at least one seed is required");
  if (!c.optimal_file.empty() && c.instance_file.empty())
    throw ConfigError("optimal_file needs an instance_file");
  if (c.instances == 0 && c.instance_file.empty() && !c.full_space)
    throw ConfigError("instances must be positive");
  if (c.workers == 0) throw ConfigError("workers must be positive");
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    lines.emplace_back(t);
  }
  return lines;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

struct Instances {
  std::vector<StateKey> starts;
  std::vector<std::optional<double>> opt;
};

Instances load_instances(const ExperimentConfig& c, const Domain& domain, const CostTable* oracle) {
  Instances out;
  if (!c.instance_file.empty()) {
    for (const auto& line : read_lines(c.instance_file)) {
      try {
        out.starts.push_back(parse_instance(domain, line));
      } catch (const ParseError& e) {
        throw ConfigError(c.instance_file + " instance " + std::to_string(out.starts.size() + 1) + ": " + e.what());
      }
    }
    if (!c.optimal_file.empty()) {
      auto costs = read_lines(c.optimal_file);
      if (costs.size() != out.starts.size())
        throw ConfigError(c.optimal_file + " has " + std::to_string(costs.size()) + " costs for " +
                          std::to_string(out.starts.size()) + " instances");
      for (std::size_t i = 0; i < costs.size(); ++i)
        out.opt.push_back(parse_double(costs[i], {i + 1, "optimal cost"}));
    }
  } else {
    const auto& keys = oracle->index()->keys();
    std::vector<StateKey> pool;
    pool.reserve(keys.size());
    for (StateKey k : keys) {
      if (!domain.is_goal(k)) pool.push_back(k);
    }
    if (!c.full_space) {
      const std::size_t m = std::min(c.instances, pool.size());
      std::mt19937_64 rng(c.instance_seed);
      for (std::size_t k = 0; k < m; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
        std::swap(pool[k], pool[pick(rng)]);
      }
      pool.resize(m);
    }
    out.starts = std::move(pool);
  }
  if (out.opt.empty()) {
    for (StateKey s : out.starts) out.opt.push_back(oracle ? oracle->lookup(s) : std::nullopt);
  }
  return out;
}

RunRecord make_record(const ExperimentConfig& c, std::size_t instance, const AlgorithmSpec& algo, double w,
                      const SearchResult& result, const std::optional<double>& opt) {
  RunRecord r;
  r.domain = c.domain;
  r.instance = instance + 1;
  r.algorithm = algo.name();
  r.heuristic = algo.heuristic();
  r.w = w;
  r.status = result.status;
  r.cost = result.cost;
  r.opt = opt;
  r.expansions = result.expansions;
  r.generations = result.generations;
  if (c.timing) r.wall_s = result.wall_time;
  return r;
}

}  // namespace

std::string AlgorithmSpec::name() const {
  switch (kind) {
    case kWastar: return "wastar";
    case kPrefastar: return "prefastar";
    case kFocal: return "focal";
  }
  return "?";
}

std::string AlgorithmSpec::heuristic() const { return kind == kFocal ? std::string(to_string(focal)) : ""; }

AlgorithmSpec parse_algorithm(std::string_view text) {
  text = trim(text);
  AlgorithmSpec spec;
  if (text == "wastar") return spec;
  if (text == "prefastar") {
    spec.kind = AlgorithmSpec::kPrefastar;
    return spec;
  }
  if (text.starts_with("focal:")) {
    spec.kind = AlgorithmSpec::kFocal;
    spec.focal = parse_focal_kind(text.substr(6));
    return spec;
  }
  throw ConfigError("unknown algorithm '" + std::string(text) + "'; valid: wastar, prefastar, focal:<" +
                    valid_focal_kinds() + ">");
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig c;
  bool seeds_given = false;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const ConfigLine where{number, key};

    if (key == "domain") {
      c.domain = value;
    } else if (key == "instances") {
      c.instances = parse_unsigned(value, where);
    } else if (key == "instance_seed") {
      c.instance_seed = parse_unsigned(value, where);
    } else if (key == "full_space") {
      c.full_space = parse_bool(value, where);
    } else if (key == "instance_file") {
      c.instance_file = value;
    } else if (key == "optimal_file") {
      c.optimal_file = value;
    } else if (key == "algorithm") {
      for (auto item : split_list(value)) c.algorithms.push_back(parse_algorithm(item));
    } else if (key == "bound") {
      for (auto item : split_list(value)) c.bounds.push_back(parse_double(item, where));
    } else if (key == "accuracy") {
      for (auto item : split_list(value)) c.accuracies.push_back(parse_double(item, where));
    } else if (key == "seed") {
      if (!seeds_given) c.seeds.clear();
      seeds_given = true;
      for (auto item : split_list(value)) c.seeds.push_back(parse_unsigned(item, where));
    } else if (key == "model") {
      c.model = value;
    } else if (key == "model_acc") {
      c.model_acc = parse_double(value, where);
    } else if (key == "max_expansions") {
      c.limits.max_expansions = parse_unsigned(value, where);
    } else if (key == "max_seconds") {
      c.limits.max_seconds = parse_double(value, where);
    } else if (key == "output") {
      c.output = value;
    } else if (key == "workers") {
      c.workers = static_cast<unsigned>(parse_unsigned(value, where));
    } else if (key == "timing") {
      c.timing = parse_bool(value, where);
    } else {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

unsigned effective_workers(const ExperimentConfig& config) {
  if (const char* env = std::getenv("POLICY_FOCAL_WORKERS"); env && *env) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec != std::errc{} || *ptr != '\0' || v == 0)
      throw ConfigError("POLICY_FOCAL_WORKERS must be a positive integer, got '" + std::string(env) + "'");
    return v;
  }
  return config.workers;
}

std::optional<double> RunRecord::subopt() const {
  if (!solved() || !opt) return std::nullopt;
  if (*opt <= 0.0) return cost <= 0.0 ? std::optional<double>(1.0) : std::nullopt;
  return cost / *opt;
}

std::string csv_header() {
  return "domain,instance,algorithm,heuristic,w,target_acc,measured_acc,seed,status,cost,opt,subopt,"
         "expansions,generations,wall_s";
}

std::string csv_row(const RunRecord& r) {
  auto opt_num = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  std::string row;
  row += r.domain + ',' + std::to_string(r.instance) + ',' + r.algorithm + ',' + r.heuristic + ',';
  row += fmt(r.w) + ',' + opt_num(r.target_acc) + ',' + opt_num(r.measured_acc) + ',';
  row += (r.seed ? std::to_string(*r.seed) : std::string()) + ',';
  row += std::string(to_string(r.status)) + ',';
  row += (r.solved() ? fmt(r.cost) : std::string()) + ',' + opt_num(r.opt) + ',' + opt_num(r.subopt()) + ',';
  row += std::to_string(r.expansions) + ',' + std::to_string(r.generations) + ',' + opt_num(r.wall_s);
  return row;
}

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << csv_header() << '\n';
  for (const RunRecord& r : records) out << csv_row(r) << '\n';
}

std::size_t expected_row_count(const ExperimentConfig& c, std::size_t instance_count) {
  std::size_t bounded = 0;
  std::size_t pref = 0;
  for (const auto& a : c.algorithms) (a.bounded() ? bounded : pref) += 1;
  const std::size_t policies = c.learned() ? 1 : c.accuracies.size() * c.seeds.size();
  return instance_count * policies * (c.bounds.size() * bounded + pref);
}

std::vector<RunRecord> run_sweep(const ExperimentConfig& c, std::ostream* log) {
  validate(c);
  const unsigned workers = effective_workers(c);
  auto domain = make_domain(c.domain);

  std::unique_ptr<CostTable> oracle;
  if (!c.learned()) {
    if (log) *log << "building oracle for " << c.domain << '\n';
    oracle = std::make_unique<CostTable>(exhaustive_reverse_dijkstra(*domain));
  }
  const Instances inst = load_instances(c, *domain, oracle.get());
  const std::size_t m = inst.starts.size();
  if (log) *log << m << " instances\n";

  // WA* ignores the policy, so each (w, instance) is solved once and its row
  // repeated under every policy.
  std::map<std::pair<std::size_t, std::size_t>, SearchResult> wastar;
  if (std::any_of(c.algorithms.begin(), c.algorithms.end(),
                  [](const AlgorithmSpec& a) { return a.kind == AlgorithmSpec::kWastar; })) {
    std::vector<SearchResult> results(c.bounds.size() * m);
    parallel_for(results.size(), workers, [&](std::size_t k) {
      results[k] = weighted_astar(*domain, inst.starts[k % m], c.bounds[k / m], c.limits);
    });
    for (std::size_t k = 0; k < results.size(); ++k) wastar[{k / m, k % m}] = std::move(results[k]);
  }

  struct Cell {
    std::size_t algorithm;
    std::size_t bound;  // index into c.bounds, unused by prefastar
    std::size_t instance;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
    const std::size_t nb = c.algorithms[a].bounded() ? c.bounds.size() : 1;
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t i = 0; i < m; ++i) cells.push_back({a, b, i});
    }
  }

  std::vector<RunRecord> records;
  records.reserve(expected_row_count(c, m));

  auto run_cells = [&](const StochasticPolicy& policy, double focal_acc, std::optional<double> target,
                       std::optional<double> measured, std::optional<std::uint64_t> seed) {
    std::vector<RunRecord> rows(cells.size());
    parallel_for(cells.size(), workers, [&](std::size_t k) {
      const Cell& cell = cells[k];
      const AlgorithmSpec& algo = c.algorithms[cell.algorithm];
      const StateKey start = inst.starts[cell.instance];
      double w = std::numeric_limits<double>::infinity();
      SearchResult fresh;
      const SearchResult* result = &fresh;
      switch (algo.kind) {
        case AlgorithmSpec::kWastar:
          w = c.bounds[cell.bound];
          result = &wastar.at({cell.bound, cell.instance});
          break;
        case AlgorithmSpec::kFocal:
          w = c.bounds[cell.bound];
          fresh = focal_search(*domain, start, w, make_focal_config(algo.focal, focal_acc, domain->action_count()),
                               policy, c.limits);
          break;
        case AlgorithmSpec::kPrefastar:
          fresh = preferred_astar(*domain, start, policy, c.limits);
          break;
      }
      RunRecord r = make_record(c, cell.instance, algo, w, *result, inst.opt[cell.instance]);
      r.target_acc = target;
      r.measured_acc = measured;
      r.seed = seed;
      rows[k] = std::move(r);
    });
    for (auto& r : rows) records.push_back(std::move(r));
  };

  if (c.learned()) {
    auto model = std::make_shared<const MlpModel>(load_model(c.model));
    const auto* tile = dynamic_cast<const TileDomain*>(domain.get());
    if (!tile) throw ConfigError("model runs need a tile domain");
    NeuralPolicy policy(model, *tile);
    if (log) *log << "running model " << c.model << '\n';
    run_cells(policy, c.model_acc.value_or(0.5), std::nullopt, c.model_acc, std::nullopt);
  } else {
    for (double acc : c.accuracies) {
      for (std::uint64_t seed : c.seeds) {
        if (log) *log << "policy acc=" << fmt(acc) << " seed=" << seed << '\n';
        const OptTable opt = build_opt_table(*domain, *oracle, seed);
        const SyntheticPolicyTable policy = synthesize_policy(opt, *domain, acc, seed);
        run_cells(policy, acc, acc, policy.measured_acc(), seed);
      }
    }
  }

  if (!c.output.empty()) {
    std::ofstream out(c.output, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + c.output);
    write_csv(out, records);
    if (!out) throw ConfigError("short write to " + c.output);
  }
  return records;
}

SuboptimalitySum accumulated_suboptimality(std::span<const RunRecord> records) {
  SuboptimalitySum sum;
  for (const RunRecord& r : records) {
    if (!r.solved()) {
      ++sum.unsolved;
    } else if (auto ratio = r.subopt()) {
      sum.total += *ratio - 1.0;
      ++sum.solved;
    } else {
      ++sum.missing_opt;
    }
  }
  return sum;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string summarize(std::span<const RunRecord> records) {
  using Key = std::tuple<double, std::string, std::string, double>;
  std::map<Key, std::vector<RunRecord>> groups;
  for (const RunRecord& r : records)
    groups[{r.target_acc.value_or(-1.0), r.algorithm, r.heuristic, r.w}].push_back(r);
  std::ostringstream out;
  for (const auto& [key, rows] : groups) {
    const auto& [acc, algorithm, heuristic, w] = key;
    std::vector<double> expansions;
    std::size_t solved = 0;
    for (const auto& r : rows) {
      expansions.push_back(static_cast<double>(r.expansions));
      solved += r.solved();
    }
    const auto sub = accumulated_suboptimality(rows);
    out << (acc >= 0 ? "acc=" + fmt(acc) + " " : std::string()) << algorithm
        << (heuristic.empty() ? "" : ":" + heuristic) << " w=" << fmt(w) << " solved=" << solved << '/'
        << rows.size() << " median_expansions=" << fmt(median(expansions)) << " acc_subopt=" << fmt(sub.total);
    if (sub.missing_opt) out << " missing_opt=" << sub.missing_opt;
    out << '\n';
  }
  return out.str();
}

}  // namespace pfs
