#pragma once

#include <cstdint>
#include <vector>

#include "spanmdp/generative.hpp"
#include "spanmdp/mdp.hpp"
#include "spanmdp/solvers.hpp"

namespace spanmdp {

/// Perturbed empirical model-based planning for a discounted MDP.
struct Alg1Config {
  std::size_t n = 1;        // samples per state-action pair
  double epsilon = 1.0;     // target accuracy, > 0
  double gamma = 0.9;       // discount in (0, 1)
  std::uint64_t seed = 0;   // reward-perturbation seed
  std::uint64_t trial = 0;  // sampling stream index
};

/// Average-reward planning through a discounted surrogate.
struct Alg2Config {
  std::size_t n = 1;
  double epsilon = 1.0;     // in (0, 1]
  double span_bound = 1.0;  // any H >= max(1, sp(h*))
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

/// xi = (1 - gamma) epsilon / 6.
double perturbation_level(double gamma, double epsilon);

/// gamma_bar = 1 - epsilon / (12 H).
double reduction_discount(double epsilon, double span_bound);

/// Equivalent Algorithm-1 configuration used by Algorithm 2.
Alg1Config reduction_config(const Alg2Config& cfg);

/**
 * r(s,a) + Z(s,a), Z i.i.d. uniform on [0, xi), drawn in row-major order from
 * the stream derive_seed(seed, {purpose::kRewardNoise, trial}).
 * Throws NegativePerturbation.
 */
std::vector<double> perturb_rewards(std::span<const double> rewards, double xi, std::uint64_t seed,
                                    std::uint64_t trial);

struct PlanningRun {
  Policy policy;
  EmpiricalModel empirical;
  std::vector<double> perturbed_rewards;
  double xi = 0.0;
  double gamma = 0.0;
  ValueVector planning_values;  // optimal values of (P_hat, r_tilde, gamma)
};

PlanningRun run_algorithm1_detailed(const GenerativeModel& g, const Alg1Config& cfg);
Policy run_algorithm1(const GenerativeModel& g, const Alg1Config& cfg);

PlanningRun run_algorithm2_detailed(const GenerativeModel& g, const Alg2Config& cfg);
Policy run_algorithm2(const GenerativeModel& g, const Alg2Config& cfg);

enum class SampleBound {
  Discounted,     // n >= C H / ((1-gamma)^2 eps^2) log(SA / ((1-gamma) delta eps))
  AverageReward,  // n >= C H / eps^2 log(SA / (delta eps))
};

struct SampleSizeQuery {
  SampleBound bound = SampleBound::AverageReward;
  double span_bound = 1.0;
  double gamma = 0.0;  // Discounted only
  double epsilon = 1.0;
  double delta = 0.1;
  std::size_t num_states = 1;
  std::size_t num_actions = 1;
  double constant = 1.0;
};

/// Ceiling of the bound, at least 1. Throws HypothesisViolated naming the
/// failed precondition.
std::uint64_t sample_size(const SampleSizeQuery& q);

}  // namespace spanmdp
