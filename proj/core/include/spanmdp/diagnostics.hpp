#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spanmdp/algorithms.hpp"
#include "spanmdp/mdp.hpp"
#include "spanmdp/solvers.hpp"

namespace spanmdp {

/// An inequality record passes iff rhs - lhs >= -kAuditSlack.
inline constexpr double kAuditSlack = 1e-9;

inline constexpr std::uint64_t kDefaultPathCap = 1'000'000;

enum class CheckStatus { Pass, Fail, Skipped };

const char* to_string(CheckStatus status);

/**
 * One numeric check, always read as "lhs <= rhs". Tolerance checks (residuals)
 * compare strictly without slack. Informational records (enforced = false)
 * are reported but never fail a report.
 */
struct AuditRecord {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  CheckStatus status = CheckStatus::Skipped;
  std::string note;
  bool enforced = true;

  bool failed() const noexcept { return enforced && status == CheckStatus::Fail; }
};

AuditRecord inequality_record(std::string check, double lhs, double rhs, std::string note = {});
AuditRecord tolerance_record(std::string check, double residual, double tolerance,
                             std::string note = {});
AuditRecord skipped_record(std::string check, std::string note);

/// Quantities of the audited instance; NaN when not computed, kInfinite when infinite.
struct InstanceMetadata {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  double gamma = 0.0;
  double span_h = 0.0;
  double optimal_gain = 0.0;
  double diameter = 0.0;
  double tau_star = 0.0;
  double tau_unif = 0.0;
};

struct AuditReport {
  std::string instance_id;
  InstanceMetadata meta;
  std::vector<AuditRecord> records;  // sorted by check name

  bool all_passed() const;
  std::vector<AuditRecord> failures() const;
};

/// Entry s: sum_s' P_pi(s,s') (v(s') - (P_pi v)(s))^2.
ValueVector conditional_variance(const Mdp& m, const Policy& pi, const ValueVector& v);

/// Variance of the discounted return, from sigma^2 = g^2 Var_P[V] + g^2 P sigma^2.
ValueVector return_variance(const Mdp& m, const Policy& pi, double gamma);

/// ||sigma^2 - gamma^2 Var_P[V] - gamma^2 P sigma^2||_inf.
double variance_bellman_residual(const Mdp& m, const Policy& pi, double gamma,
                                 const ValueVector& sigma2);

/// ||(I - gamma P_pi)^{-1} sqrt(Var_P[V^pi])||_inf.
double weighted_std_norm(const Mdp& m, const Policy& pi, double gamma);

struct VarianceReport {
  ValueVector conditional_variance;
  ValueVector return_variance;
  double weighted_std_norm = 0.0;
};

VarianceReport variance_report(const Mdp& m, const Policy& pi, double gamma);

/**
 * Exact variance of sum_{t<T} gamma^t r(S_t) + gamma^T v_tail(S_T) per start
 * state, by enumerating every positive-probability path of length T.
 * Throws EnumerationTooLarge when S^T > path_cap.
 */
ValueVector finite_horizon_return_variance(const Mdp& m, const Policy& pi, double gamma,
                                           std::size_t T, const ValueVector& v_tail,
                                           std::uint64_t path_cap = kDefaultPathCap);

/**
 * Records "multistep_variance_identity/T=k" (residual of
 * sigma^2 = Var[T-step return + gamma^T V(S_T)] + gamma^{2T} P^T sigma^2,
 * tolerance 1e-8) and "multistep_variance_inequality/T=k"
 * (||sigma^2|| <= ||Var[...]|| / (1 - gamma^{2T})).
 */
std::vector<AuditRecord> check_multistep_variance_identity(const Mdp& m, const Policy& pi,
                                                           double gamma, std::size_t T,
                                                           std::uint64_t path_cap = kDefaultPathCap);

/**
 * Records (1 - e^-2) H <= sum_{k<2H} gamma^k and 0.8 H <= (1 - e^-2) H.
 * Throws HypothesisViolated unless H >= 1 and 1 - 1/H <= gamma < 1.
 */
std::vector<AuditRecord> check_horizon_inequality(long long H, double gamma);

/// Smallest integer >= H, at least 1 (H within 1e-9 of an integer rounds to it).
long long integer_span(double H);

struct AuditOptions {
  std::string instance_id = "instance";
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  std::uint64_t path_cap = kDefaultPathCap;
  std::size_t max_multistep_horizon = 6;
  std::size_t random_policies = 5;
  std::uint64_t policy_seed = 0;
  std::size_t mixing_t_max = 100'000;
};

/// Runs every structural and variance check on a weakly communicating MDP.
AuditReport audit_instance(const Mdp& m, double gamma, const AuditOptions& options = {});

/**
 * Reduction check at gamma = 1 - epsilon / H: records
 * max_s (rho* - rho^pi(s)) <= (8 + 3 eps_gamma / H) epsilon.
 * Throws HypothesisViolated when sp(h*) > H, eps_gamma > 1/(1-gamma), or pi is
 * not eps_gamma-optimal for the discounted problem.
 */
AuditRecord check_reduction(const Mdp& m, const Policy& pi, double epsilon, double H,
                            double epsilon_gamma);

/**
 * Variance bound for the policy returned by a planning run on the truth `m`:
 * ||Var^pi_hat[sum gamma^t r_tilde]|| <= 15 (H^2 + e1^2 + e2^2) / (H (1-gamma)).
 * Two enforced records, one with e1, e2 measured against perturbed empirical
 * values and one against unperturbed empirical values, plus two informational
 * records for the empirical error bounds with unit constants.
 */
std::vector<AuditRecord> check_empirical_policy_variance(const Mdp& m, const PlanningRun& run,
                                                         double span_h, double delta);

/// CSV with header instance_id,check,lhs,rhs,margin,pass (pass: true/false/SKIPPED).
std::string audit_csv(const std::vector<AuditReport>& reports);

/// JSON document with metadata and records per report.
std::string audit_json(const std::vector<AuditReport>& reports);

}  // namespace spanmdp
