#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spanmdp/mdp.hpp"

namespace spanmdp {

struct InstanceSpec {
  std::string generator = "chain";  // "chain", "garnet" or "file"
  std::size_t num_states = 5;
  std::size_t num_actions = 2;  // garnet only
  std::size_t branching = 2;    // garnet only
  double p_slip = 0.2;          // chain only
  std::uint64_t seed = 0;
  std::filesystem::path path;  // file only
};

Mdp make_instance(const InstanceSpec& spec);

enum class AlgorithmKind { Alg1, Alg2 };

struct ExperimentConfig {
  InstanceSpec instance;
  AlgorithmKind algorithm = AlgorithmKind::Alg2;
  std::vector<std::size_t> n_grid;
  double epsilon = 0.3;
  double delta = 0.1;
  std::optional<double> gamma;       // required for Alg1
  std::optional<double> span_bound;  // Alg2; defaults to max(1, sp(h*))
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::filesystem::path output;
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Throws InvalidArgument on an empty or non-increasing grid, zero trials, etc.
void validate_config(const ExperimentConfig& cfg);

/**
 * Config document: a JSON object with fields
 *   instance: {generator, num_states, num_actions, branching, p_slip, seed, path}
 *   algorithm: "alg1" | "alg2", n_grid, epsilon, delta, gamma, span_bound,
 *   trials, master_seed, output, threads.
 * Relative paths resolve against `base_dir`.
 */
ExperimentConfig parse_experiment_config(std::string_view text,
                                         const std::filesystem::path& base_dir = {});

/// derive_seed(master, {purpose::kTrial, n_index, trial}).
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n_index, std::size_t trial);

struct TrialResult {
  std::size_t n = 0;
  std::size_t n_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double gap = 0.0;  // Alg2: max_s rho* - rho^pi(s); Alg1: ||V* - V^pi||_inf
  std::vector<double> state_gaps;
  bool epsilon_met = false;
  double runtime_ms = 0.0;
  std::optional<std::string> error;
};

struct GridSummary {
  std::size_t n = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double median_gap = 0.0;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;  // sorted by (n, trial)
  std::vector<GridSummary> summaries;
  double span_h = 0.0;         // exact sp(h*) of the instance (Alg2) or 0
  double planning_param = 0.0;  // gamma (Alg1) or the span bound used (Alg2)
  bool failed = false;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Mdp& instance);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/**
 * Columns record,n,trial,seed,gap,epsilon_met,success_rate,median_gap,state_gaps.
 * record is "trial", "summary" or "FAILED". Runtimes are not written so the
 * file is a pure function of the config.
 */
std::string experiment_csv(const ExperimentResult& result);

double median(std::vector<double> values);

/// Least-squares slope of log(y) on log(x); NaN when some y <= 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct TrendTest {
  std::size_t significant_inversions = 0;
  bool monotone = true;  // at most one significant inversion
};

/**
 * Consecutive grid points i, i+1 form a significant inversion when the
 * bootstrap median at i+1 exceeds the one at i in at least `confidence` of
 * the resamples.
 */
TrendTest monotone_trend(const std::vector<std::vector<double>>& gaps_per_n, std::uint64_t seed,
                         std::size_t resamples = 1000, double confidence = 0.95);

}  // namespace spanmdp
