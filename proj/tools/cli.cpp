#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "pfs/bench.hpp"
#include "pfs/errors.hpp"
#include "pfs/mlp.hpp"
#include "pfs/oracle.hpp"
#include "pfs/policy.hpp"
#include "pfs/search.hpp"
#include "pfs/tile.hpp"

namespace pfs {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

struct OracleArgs {
  std::string domain;
  std::string output;
};

struct GenPolicyArgs {
  std::string domain;
  double acc = 0.9;
  std::uint64_t seed = 1;
  std::string output;
};

struct SolveArgs {
  std::string domain;
  std::string instance;
  std::string algo = "wastar";
  double w = 1.0;
  std::string policy;
  std::string model;
  std::optional<double> acc;
  std::uint64_t max_expansions = SearchLimits{}.max_expansions;
  double max_seconds = SearchLimits{}.max_seconds;
  bool print_path = false;
};

struct MeasureArgs {
  std::string policy;
  std::size_t sample = 0;
  std::uint64_t seed = 1;
};

struct ConvertArgs {
  std::string input;
  std::string output;
  bool to_text = false;
};

struct RandomModelArgs {
  std::vector<std::size_t> dims{256, 160, 80, 16, 4};
  std::uint64_t seed = 1;
  double scale = 0.5;
  std::string output;
};

CostTable build_oracle(const Domain& domain, std::ostream& err) {
  err << "enumerating " << domain.id() << "...\n";
  auto table = exhaustive_reverse_dijkstra(domain);
  err << table.size() << " states\n";
  return table;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  auto domain = make_domain(a.domain);
  auto table = build_oracle(*domain, err);
  out << "states " << table.size() << "\nmax_cost " << table.max_cost() << '\n';
  if (!a.output.empty()) {
    save_cost_table(table, a.output);
    out << "wrote " << a.output << '\n';
  }
  return kExitOk;
}

int cmd_gen_policy(const GenPolicyArgs& a, std::ostream& out, std::ostream& err) {
  auto domain = make_domain(a.domain);
  auto table = build_oracle(*domain, err);
  auto opt = build_opt_table(*domain, table, a.seed);
  auto policy = synthesize_policy(opt, *domain, a.acc, a.seed);
  save_policy_table(policy, a.output);
  out << "measured_acc " << std::setprecision(6) << policy.measured_acc() << '\n';
  return kExitOk;
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  auto domain = make_domain(a.domain);
  const StateKey start = parse_instance(*domain, a.instance);
  const AlgorithmSpec algo = parse_algorithm(a.algo);
  SearchLimits limits;
  limits.max_expansions = a.max_expansions;
  limits.max_seconds = a.max_seconds;

  std::unique_ptr<StochasticPolicy> policy;
  double policy_acc = a.acc.value_or(0.5);
  if (!a.policy.empty() && !a.model.empty()) throw ConfigError("give either --policy or --model, not both");
  if (!a.policy.empty()) {
    auto header = read_policy_header(a.policy);
    if (header.domain_id != domain->id())
      throw ConfigError("policy was built for " + header.domain_id + ", not " + domain->id());
    auto table = build_oracle(*domain, err);
    policy = std::make_unique<SyntheticPolicyTable>(load_policy_table(a.policy, table.index()));
    if (!a.acc) policy_acc = header.measured_acc;
  } else if (!a.model.empty()) {
    const auto* tile = dynamic_cast<const TileDomain*>(domain.get());
    if (!tile) throw ConfigError("--model needs a tile domain");
    if (algo.kind == AlgorithmSpec::kFocal && algo.focal == FocalKind::kDisc1 && !a.acc)
      throw ConfigError("focal:disc1 with a model needs --acc");
    policy = std::make_unique<NeuralPolicy>(std::make_shared<const MlpModel>(load_model(a.model)), *tile);
  }
  if (algo.kind != AlgorithmSpec::kWastar && !policy)
    throw ConfigError(algo.name() + " needs --policy or --model");

  SearchResult result;
  switch (algo.kind) {
    case AlgorithmSpec::kWastar:
      result = weighted_astar(*domain, start, a.w, limits);
      break;
    case AlgorithmSpec::kFocal:
      result = focal_search(*domain, start, a.w, make_focal_config(algo.focal, policy_acc, domain->action_count()),
                            *policy, limits);
      break;
    case AlgorithmSpec::kPrefastar:
      result = preferred_astar(*domain, start, *policy, limits);
      break;
  }

  out << "status " << to_string(result.status) << '\n';
  if (result.solved()) out << "cost " << result.cost << '\n';
  out << "expansions " << result.expansions << "\ngenerations " << result.generations << '\n';
  if (a.print_path && result.solved()) {
    for (const PathStep& step : result.path) {
      out << (step.action == kNoAction ? std::string("-") : std::to_string(step.action)) << "  "
          << domain->format(step.state) << '\n';
    }
  }
  if (result.status == SearchStatus::kTimeout || result.status == SearchStatus::kExpansionLimit)
    return kExitResource;
  return result.solved() ? kExitOk : kExitFailure;
}

int cmd_sweep(const std::string& path, std::ostream& out, std::ostream& err) {
  auto config = load_experiment_config(path);
  auto records = run_sweep(config, &err);
  out << summarize(records);
  if (!config.output.empty()) out << "wrote " << records.size() << " rows to " << config.output << '\n';
  return kExitOk;
}

int cmd_measure_acc(const MeasureArgs& a, std::ostream& out, std::ostream& err) {
  auto header = read_policy_header(a.policy);
  auto domain = make_domain(header.domain_id);
  auto table = build_oracle(*domain, err);
  auto opt = build_opt_table(*domain, table, header.seed);
  auto policy = load_policy_table(a.policy, table.index());
  double acc = 0.0;
  if (a.sample > 0) {
    auto states = sample_scored_states(opt, a.sample, a.seed);
    acc = measure_accuracy(policy, opt, std::span<const StateKey>(states));
  } else {
    acc = measure_accuracy(policy, opt);
  }
  out << std::setprecision(6) << acc << '\n';
  return kExitOk;
}

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  if (a.to_text) {
    std::ofstream file(a.output);
    if (!file) throw ConfigError("cannot write " + a.output);
    file << format_model_text(load_model(a.input));
  } else {
    std::ifstream file(a.input);
    if (!file) throw ConfigError("cannot open " + a.input);
    std::stringstream buffer;
    buffer << file.rdbuf();
    auto model = parse_model_text(buffer.str());
    save_model(model, a.output);
    out << "parameters " << model.parameter_count() << '\n';
  }
  return kExitOk;
}

int cmd_random_model(const RandomModelArgs& a, std::ostream& out) {
  auto model = random_model(a.dims, a.seed, a.scale);
  save_model(model, a.output);
  out << "parameters " << model.parameter_count() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Focal search with policy-based focal heuristics"};
  app.require_subcommand(1);

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Enumerate a domain and compute exact costs to the goal");
  oracle->add_option("domain", oracle_args.domain, "Domain id")->required();
  oracle->add_option("-o,--output", oracle_args.output, "Write the cost table here");

  GenPolicyArgs gen_args;
  auto* gen = app.add_subcommand("gen-policy", "Synthesize a policy table with a target accuracy");
  gen->add_option("domain", gen_args.domain, "Domain id")->required();
  gen->add_option("--acc", gen_args.acc, "Target accuracy in [0, 1]")->required();
  gen->add_option("--seed", gen_args.seed, "Random seed");
  gen->add_option("-o,--output", gen_args.output, "Policy file")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("domain", solve_args.domain, "Domain id")->required();
  solve->add_option("instance", solve_args.instance, "Instance text, e.g. \"1 4 2 3 0 5 6 7 8\"")->required();
  solve->add_option("--algo", solve_args.algo, "wastar | prefastar | focal:<kind>");
  solve->add_option("--w", solve_args.w, "Suboptimality bound");
  solve->add_option("--policy", solve_args.policy, "Synthetic policy file");
  solve->add_option("--model", solve_args.model, "MLP1 model file (tile15)");
  solve->add_option("--acc", solve_args.acc, "Policy accuracy used by disc1");
  solve->add_option("--max-expansions", solve_args.max_expansions, "Expansion limit");
  solve->add_option("--max-seconds", solve_args.max_seconds, "Wall-clock limit");
  solve->add_flag("--path", solve_args.print_path, "Print the solution path");

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment config and write its CSV");
  sweep->add_option("config", sweep_path, "key=value config file")->required();

  MeasureArgs measure_args;
  auto* measure = app.add_subcommand("measure-acc", "Measure the accuracy of a policy file");
  measure->add_option("--policy", measure_args.policy, "Policy file")->required();
  measure->add_option("--sample", measure_args.sample, "Sample size (default: every state)");
  measure->add_option("--seed", measure_args.seed, "Sampling seed");

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert-model", "Convert a text layer dump into an MLP1 file");
  convert->add_option("input", convert_args.input, "Input file")->required();
  convert->add_option("-o,--output", convert_args.output, "Output file")->required();
  convert->add_flag("--to-text", convert_args.to_text, "Convert MLP1 back into a text dump");

  RandomModelArgs random_args;
  auto* random = app.add_subcommand("random-model", "Write an MLP1 file with random weights");
  random->add_option("--dims", random_args.dims, "Layer widths, input first")->delimiter(',');
  random->add_option("--seed", random_args.seed, "Random seed");
  random->add_option("--scale", random_args.scale, "Weights are uniform in [-scale, scale]");
  random->add_option("-o,--output", random_args.output, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*oracle) return cmd_oracle(oracle_args, out, err);
    if (*gen) return cmd_gen_policy(gen_args, out, err);
    if (*solve) return cmd_solve(solve_args, out, err);
    if (*sweep) return cmd_sweep(sweep_path, out, err);
    if (*measure) return cmd_measure_acc(measure_args, out, err);
    if (*convert) return cmd_convert(convert_args, out);
    if (*random) return cmd_random_model(random_args, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace pfs
