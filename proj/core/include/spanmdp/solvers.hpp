#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "spanmdp/mdp.hpp"

namespace spanmdp {

/// Sentinel for an infinite diameter or mixing time.
inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

inline constexpr std::uint64_t kDefaultEnumerationCap = 4096;

/// V^pi_gamma from (I - gamma P_pi) V = r_pi. Accepts gamma in [0, 1).
ValueVector policy_evaluation_discounted(const Mdp& m, const Policy& pi, double gamma);

/// (T v)(s) = max_a r(s,a) + gamma * sum_s' P(s'|s,a) v(s').
ValueVector bellman_optimality_operator(const Mdp& m, double gamma, const ValueVector& v);

/// Greedy policy for r + gamma P v, lowest action index on ties.
Policy greedy_policy(const Mdp& m, double gamma, const ValueVector& v);

struct DiscountedSolution {
  ValueVector values;
  Policy policy;
  std::size_t sweeps = 0;  // value-iteration sweeps before the exact polish
};

/**
 * Value iteration until ||T V - V|| <= tol (1 - gamma) / (2 gamma) or the
 * floating-point floor, then policy iteration with exact evaluations until
 * no strict improvement remains. Returned values are the exact evaluation of
 * the returned policy.
 */
DiscountedSolution solve_discounted_optimal(const Mdp& m, double gamma, double tol = 1e-10,
                                            std::size_t max_sweeps = 10'000'000);

struct GainBias {
  ValueVector gain;
  ValueVector bias;  // min entry = 0
  double span_h = 0.0;
};

/// Gain and bias of an arbitrary (possibly multichain) policy.
GainBias gain_bias_of_policy(const Mdp& m, const Policy& pi);

struct QFunction {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> values;  // row-major [s][a]

  double operator()(StateIndex s, ActionIndex a) const { return values[s * num_actions + a]; }
};

struct AverageSolution {
  GainBias gain_bias;  // gain is rho* broadcast to every state
  QFunction q;
  Policy policy;
  std::size_t iterations = 0;
};

/**
 * Relative value iteration on the lazy kernel (I + P) / 2. Stops once the
 * span of successive differences is <= tol, which bounds the optimality
 * equation residual of the returned q by tol.
 */
AverageSolution solve_average_optimal(const Mdp& m, double tol = 1e-11,
                                      std::size_t max_iters = 50'000'000);

/// Actions within `tol` of max_a q(s,a), per state.
std::vector<std::vector<ActionIndex>> argmax_sets(const QFunction& q, double tol);

/// max over ordered pairs of the minimal expected hitting time; kInfinite if
/// some state cannot reach another.
double diameter(const Mdp& m, std::size_t horizon_cap = 1'000'000);

struct MixingReport {
  double tau = kInfinite;  // positive integer value or kInfinite
  std::optional<ValueVector> stationary;
  std::size_t iterations_used = 0;
};

/// Throws NoUniqueStationary for multichain P_pi.
MixingReport mixing_time(const Mdp& m, const Policy& pi, std::size_t t_max = 100'000);

enum class PolicyClass { Uniform, Optimal };

/// tau_unif (sup over all policies) or tau* (inf over optimal policies).
double policy_class_mixing(const Mdp& m, PolicyClass mode, std::size_t t_max = 100'000,
                           std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace spanmdp
