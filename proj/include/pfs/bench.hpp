#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfs/focal_heuristics.hpp"
#include "pfs/search.hpp"

namespace pfs {

struct AlgorithmSpec {
  enum Kind { kWastar, kPrefastar, kFocal };
  Kind kind = kWastar;
  FocalKind focal = FocalKind::kDisc2;

  std::string name() const;       // wastar, prefastar, focal
  std::string heuristic() const;  // focal kind, empty otherwise
  bool bounded() const { return kind != kPrefastar; }
};

/// wastar | prefastar | focal:<kind>
AlgorithmSpec parse_algorithm(std::string_view text);

struct ExperimentConfig {
  std::string domain;
  std::size_t instances = 100;
  std::uint64_t instance_seed = 1;
  bool full_space = false;
  std::string instance_file;
  std::string optimal_file;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<double> bounds;
  std::vector<double> accuracies;
  std::vector<std::uint64_t> seeds{1};
  std::string model;
  std::optional<double> model_acc;
  SearchLimits limits;
  std::string output;
  unsigned workers = 1;
  bool timing = false;

  bool learned() const { return !model.empty(); }
};

/// Flat key=value lines; repeated keys (or commas) build lists, '#' starts a comment.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Worker count after the POLICY_FOCAL_WORKERS override.
unsigned effective_workers(const ExperimentConfig& config);

struct RunRecord {
  std::string domain;
  std::size_t instance = 0;
  std::string algorithm;
  std::string heuristic;
  double w = 1.0;
  std::optional<double> target_acc;
  std::optional<double> measured_acc;
  std::optional<std::uint64_t> seed;
  SearchStatus status = SearchStatus::kExhausted;
  double cost = 0.0;
  std::optional<double> opt;
  std::uint64_t expansions = 0;
  std::uint64_t generations = 0;
  std::optional<double> wall_s;

  bool solved() const { return status == SearchStatus::kSolved; }
  bool bounded() const { return algorithm != "prefastar"; }
  std::optional<double> subopt() const;
};

std::string csv_header();
std::string csv_row(const RunRecord& record);
void write_csv(std::ostream& out, std::span<const RunRecord> records);

/// Rows a sweep emits for `instance_count` instances.
std::size_t expected_row_count(const ExperimentConfig& config, std::size_t instance_count);

/// Runs every cell and writes config.output when it is set. Progress goes to `log`.
std::vector<RunRecord> run_sweep(const ExperimentConfig& config, std::ostream* log = nullptr);

struct SuboptimalitySum {
  double total = 0.0;
  std::size_t solved = 0;
  std::size_t unsolved = 0;
  std::size_t missing_opt = 0;
};

/// Sum over solved records of cost / opt - 1.
SuboptimalitySum accumulated_suboptimality(std::span<const RunRecord> records);

double median(std::vector<double> values);

/// One line per (algorithm, heuristic, w, target_acc) cell.
std::string summarize(std::span<const RunRecord> records);

}  // namespace pfs
