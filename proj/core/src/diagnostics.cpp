#include "spanmdp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "linalg.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/generative.hpp"
#include "spanmdp/mec.hpp"

namespace spanmdp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidArgument("discount factor must lie in [0, 1), got " + fmt(gamma));
  }
}

detail::Vector conditional_variance_vec(const detail::Matrix& P, const detail::Vector& v) {
  const detail::Vector mean = P * v;
  detail::Vector out(P.rows());
  for (Eigen::Index s = 0; s < P.rows(); ++s) {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < P.cols(); ++t) {
      const double d = v(t) - mean(s);
      acc += P(s, t) * d * d;
    }
    out(s) = acc;
  }
  return out;
}

detail::Vector return_variance_vec(const detail::Matrix& P, const detail::Vector& v, double gamma) {
  const double g2 = gamma * gamma;
  return detail::solve_resolvent(P, g2, g2 * conditional_variance_vec(P, v));
}

double weighted_std_norm_vec(const detail::Matrix& P, const detail::Vector& v, double gamma) {
  const detail::Vector root = conditional_variance_vec(P, v).cwiseMax(0.0).cwiseSqrt();
  return detail::solve_resolvent(P, gamma, root).cwiseAbs().maxCoeff();
}

double max_abs_diff(const ValueVector& a, const ValueVector& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

Policy random_policy(const Mdp& m, std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 engine(derive_seed(seed, {purpose::kPolicies, index}));
  Policy pi{std::vector<ActionIndex>(m.num_states())};
  for (auto& a : pi.actions) {
    a = std::min(m.num_actions() - 1,
                 static_cast<ActionIndex>(uniform01(engine) * static_cast<double>(m.num_actions())));
  }
  return pi;
}

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "true";
    case CheckStatus::Fail:
      return "false";
    case CheckStatus::Skipped:
      return "SKIPPED";
  }
  return "SKIPPED";
}

AuditRecord inequality_record(std::string check, double lhs, double rhs, std::string note) {
  AuditRecord r{std::move(check), lhs, rhs, rhs - lhs, CheckStatus::Pass, std::move(note), true};
  if (!(r.margin >= -kAuditSlack)) r.status = CheckStatus::Fail;
  return r;
}

AuditRecord tolerance_record(std::string check, double residual, double tolerance, std::string note) {
  AuditRecord r{std::move(check), residual, tolerance, tolerance - residual, CheckStatus::Pass,
                std::move(note), true};
  if (!(residual <= tolerance)) r.status = CheckStatus::Fail;
  return r;
}

AuditRecord skipped_record(std::string check, std::string note) {
  return AuditRecord{std::move(check), kNaN, kNaN, kNaN, CheckStatus::Skipped, std::move(note), true};
}

bool AuditReport::all_passed() const {
  return std::none_of(records.begin(), records.end(), [](const AuditRecord& r) { return r.failed(); });
}

std::vector<AuditRecord> AuditReport::failures() const {
  std::vector<AuditRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const AuditRecord& r) { return r.failed(); });
  return out;
}

ValueVector conditional_variance(const Mdp& m, const Policy& pi, const ValueVector& v) {
  if (v.size() != m.num_states()) {
    throw DimensionMismatch("value vector has " + std::to_string(v.size()) + " entries for " +
                            std::to_string(m.num_states()) + " states");
  }
  validate_policy(m, pi);
  return detail::to_std(conditional_variance_vec(detail::policy_matrix(m, pi), detail::to_eigen(v)));
}

ValueVector return_variance(const Mdp& m, const Policy& pi, double gamma) {
  const ValueVector v = policy_evaluation_discounted(m, pi, gamma);
  return detail::to_std(return_variance_vec(detail::policy_matrix(m, pi), detail::to_eigen(v), gamma));
}

double variance_bellman_residual(const Mdp& m, const Policy& pi, double gamma,
                                 const ValueVector& sigma2) {
  const ValueVector v = policy_evaluation_discounted(m, pi, gamma);
  const auto P = detail::policy_matrix(m, pi);
  const detail::Vector s2 = detail::to_eigen(sigma2);
  const double g2 = gamma * gamma;
  const detail::Vector residual = s2 - g2 * conditional_variance_vec(P, detail::to_eigen(v)) - g2 * (P * s2);
  return residual.cwiseAbs().maxCoeff();
}

double weighted_std_norm(const Mdp& m, const Policy& pi, double gamma) {
  const ValueVector v = policy_evaluation_discounted(m, pi, gamma);
  return weighted_std_norm_vec(detail::policy_matrix(m, pi), detail::to_eigen(v), gamma);
}

VarianceReport variance_report(const Mdp& m, const Policy& pi, double gamma) {
  const ValueVector v = policy_evaluation_discounted(m, pi, gamma);
  const auto P = detail::policy_matrix(m, pi);
  const auto ve = detail::to_eigen(v);
  return VarianceReport{detail::to_std(conditional_variance_vec(P, ve)),
                        detail::to_std(return_variance_vec(P, ve, gamma)),
                        weighted_std_norm_vec(P, ve, gamma)};
}

ValueVector finite_horizon_return_variance(const Mdp& m, const Policy& pi, double gamma,
                                           std::size_t T, const ValueVector& v_tail,
                                           std::uint64_t path_cap) {
  require_gamma(gamma);
  validate_policy(m, pi);
  const std::size_t S = m.num_states();
  if (v_tail.size() != S) throw DimensionMismatch("tail value vector length differs from S");
  std::uint64_t paths = 1;
  for (std::size_t t = 0; t < T; ++t) {
    if (paths > path_cap / S) {
      throw EnumerationTooLarge("S^T paths exceed the enumeration cap " + std::to_string(path_cap));
    }
    paths *= S;
  }
  if (paths > path_cap) {
    throw EnumerationTooLarge("S^T paths exceed the enumeration cap " + std::to_string(path_cap));
  }

  // Depth-first walk over positive-probability paths; visit(prob, value) at the leaves.
  const auto walk = [&](StateIndex start, auto&& visit) {
    struct Frame {
      StateIndex state;
      std::size_t depth;
      double prob;
      double value;
      double discount;
    };
    std::vector<Frame> stack{{start, 0, 1.0, 0.0, 1.0}};
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      if (f.depth == T) {
        visit(f.prob, f.value + f.discount * v_tail[f.state]);
        continue;
      }
      const ActionIndex a = pi[f.state];
      const double value = f.value + f.discount * m.reward(f.state, a);
      const auto row = m.row(f.state, a);
      for (StateIndex t = 0; t < S; ++t) {
        if (row[t] > 0.0) stack.push_back({t, f.depth + 1, f.prob * row[t], value, f.discount * gamma});
      }
    }
  };

  ValueVector out(S, 0.0);
  for (StateIndex s = 0; s < S; ++s) {
    double mean = 0.0;
    walk(s, [&](double p, double x) { mean += p * x; });
    double var = 0.0;
    walk(s, [&](double p, double x) { var += p * (x - mean) * (x - mean); });
    out[s] = var;
  }
  return out;
}

std::vector<AuditRecord> check_multistep_variance_identity(const Mdp& m, const Policy& pi,
                                                           double gamma, std::size_t T,
                                                           std::uint64_t path_cap) {
  const std::string suffix = "/T=" + std::to_string(T);
  const ValueVector v = policy_evaluation_discounted(m, pi, gamma);
  const auto P = detail::policy_matrix(m, pi);
  const detail::Vector sigma2 = return_variance_vec(P, detail::to_eigen(v), gamma);
  const detail::Vector finite =
      detail::to_eigen(finite_horizon_return_variance(m, pi, gamma, T, v, path_cap));

  detail::Vector propagated = sigma2;
  for (std::size_t t = 0; t < T; ++t) propagated = P * propagated;
  const double g2T = std::pow(gamma, 2.0 * static_cast<double>(T));
  const double residual = (sigma2 - finite - g2T * propagated).cwiseAbs().maxCoeff();

  std::vector<AuditRecord> out;
  out.push_back(tolerance_record("multistep_variance_identity" + suffix, residual, 1e-8));
  if (T == 0) {
    out.push_back(skipped_record("multistep_variance_inequality" + suffix, "T = 0"));
  } else {
    out.push_back(inequality_record("multistep_variance_inequality" + suffix,
                                    sigma2.cwiseAbs().maxCoeff(),
                                    finite.cwiseAbs().maxCoeff() / (1.0 - g2T)));
  }
  return out;
}

long long integer_span(double H) {
  const double rounded = std::round(H);
  const double c = std::abs(H - rounded) <= 1e-9 ? rounded : std::ceil(H);
  return std::max(1LL, static_cast<long long>(c));
}

std::vector<AuditRecord> check_horizon_inequality(long long H, double gamma) {
  if (H < 1) throw HypothesisViolated("horizon inequality needs H >= 1, got " + std::to_string(H));
  const double Hd = static_cast<double>(H);
  if (!(gamma < 1.0) || !(gamma >= 1.0 - 1.0 / Hd - 1e-12)) {
    throw HypothesisViolated("horizon inequality needs 1 - 1/H <= gamma < 1, got gamma = " + fmt(gamma) +
                             " with H = " + std::to_string(H));
  }
  double sum = 0.0;
  double power = 1.0;
  for (long long k = 0; k < 2 * H; ++k) {
    sum += power;
    power *= gamma;
  }
  const double middle = (1.0 - std::exp(-2.0)) * Hd;
  const std::string suffix = "/H=" + std::to_string(H);
  return {inequality_record("horizon_inequality" + suffix, middle, sum),
          inequality_record("horizon_inequality_constant" + suffix, 0.8 * Hd, middle)};
}

AuditReport audit_instance(const Mdp& m, double gamma, const AuditOptions& options) {
  require_gamma(gamma);
  if (!is_weakly_communicating(m)) throw NotWeaklyCommunicating();

  AuditReport report;
  report.instance_id = options.instance_id;
  auto& meta = report.meta;
  meta.num_states = m.num_states();
  meta.num_actions = m.num_actions();
  meta.gamma = gamma;
  auto& records = report.records;

  const AverageSolution avg = solve_average_optimal(m);
  const double H = avg.gain_bias.span_h;
  const double rho = avg.gain_bias.gain.front();
  meta.span_h = H;
  meta.optimal_gain = rho;
  meta.diameter = diameter(m);

  const auto class_mixing = [&](PolicyClass mode, const char* check) {
    try {
      const double tau = policy_class_mixing(m, mode, options.mixing_t_max, options.enumeration_cap);
      if (std::isinf(tau)) {
        records.push_back(skipped_record(check, "mixing time infinite"));
      } else {
        records.push_back(inequality_record(check, H, 8.0 * tau));
      }
      return tau;
    } catch (const EnumerationTooLarge& e) {
      records.push_back(skipped_record(check, e.what()));
    } catch (const NonConvergence& e) {
      records.push_back(skipped_record(check, e.what()));
    }
    return kNaN;
  };
  meta.tau_star = class_mixing(PolicyClass::Optimal, "span_le_8_tau_star");
  meta.tau_unif = class_mixing(PolicyClass::Uniform, "span_le_8_tau_unif");

  if (std::isinf(meta.diameter)) {
    records.push_back(skipped_record("span_le_diameter", "diameter infinite"));
  } else {
    records.push_back(inequality_record("span_le_diameter", H, meta.diameter));
  }

  const DiscountedSolution disc = solve_discounted_optimal(m, gamma);
  const Policy& opt = disc.policy;
  const long long H_int = integer_span(H);
  const bool in_regime = gamma >= 1.0 - 1.0 / static_cast<double>(H_int) - 1e-12;

  double worst = 0.0;
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    worst = std::max(worst, std::abs(disc.values[s] - rho / (1.0 - gamma)));
  }
  records.push_back(inequality_record("value_span_bound", worst, H));

  std::vector<std::pair<std::string, Policy>> audited{{"optimal", opt}};
  for (std::size_t k = 0; k < options.random_policies; ++k) {
    audited.emplace_back("random_" + std::to_string(k + 1), random_policy(m, options.policy_seed, k));
  }
  for (const auto& [label, pi] : audited) {
    const ValueVector v = policy_evaluation_discounted(m, pi, gamma);
    const auto P = detail::policy_matrix(m, pi);
    const auto ve = detail::to_eigen(v);
    const detail::Vector sigma2 = return_variance_vec(P, ve, gamma);
    const double sigma_norm = sigma2.cwiseAbs().maxCoeff();
    const ValueVector s2 = detail::to_std(sigma2);
    records.push_back(tolerance_record("variance_bellman_residual/" + label,
                                       variance_bellman_residual(m, pi, gamma, s2), 1e-10));
    records.push_back(inequality_record("variance_parameter_relation/" + label,
                                        gamma * weighted_std_norm_vec(P, ve, gamma),
                                        std::sqrt(2.0 / (1.0 - gamma)) * std::sqrt(sigma_norm)));
    records.push_back(inequality_record("return_variance_crude_bound/" + label, sigma_norm,
                                        1.0 / ((1.0 - gamma) * (1.0 - gamma))));
    if (label == "optimal") {
      if (in_regime) {
        records.push_back(inequality_record("optimal_policy_variance_bound", sigma_norm,
                                            5.0 * static_cast<double>(H_int) / (1.0 - gamma)));
      } else {
        records.push_back(skipped_record("optimal_policy_variance_bound",
                                         "gamma below 1 - 1/ceil(H) = " +
                                             fmt(1.0 - 1.0 / static_cast<double>(H_int))));
      }
    }
  }

  for (std::size_t T = 1; T <= options.max_multistep_horizon; ++T) {
    try {
      for (auto& r : check_multistep_variance_identity(m, opt, gamma, T, options.path_cap)) {
        records.push_back(std::move(r));
      }
    } catch (const EnumerationTooLarge& e) {
      const std::string suffix = "/T=" + std::to_string(T);
      records.push_back(skipped_record("multistep_variance_identity" + suffix, e.what()));
      records.push_back(skipped_record("multistep_variance_inequality" + suffix, e.what()));
    }
  }

  if (in_regime) {
    for (auto& r : check_horizon_inequality(H_int, gamma)) records.push_back(std::move(r));
  } else {
    const std::string suffix = "/H=" + std::to_string(H_int);
    records.push_back(skipped_record("horizon_inequality" + suffix, "gamma below 1 - 1/H"));
    records.push_back(skipped_record("horizon_inequality_constant" + suffix, "gamma below 1 - 1/H"));
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const AuditRecord& a, const AuditRecord& b) { return a.check < b.check; });
  return report;
}

AuditRecord check_reduction(const Mdp& m, const Policy& pi, double epsilon, double H,
                            double epsilon_gamma) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  if (!(H > 0.0)) throw InvalidArgument("span bound must be positive");
  if (!(epsilon_gamma >= 0.0)) throw InvalidArgument("epsilon_gamma must be nonnegative");
  const double gamma = 1.0 - epsilon / H;
  if (!(gamma >= 0.0)) throw HypothesisViolated("gamma = 1 - epsilon/H is negative");
  const AverageSolution avg = solve_average_optimal(m);
  if (avg.gain_bias.span_h > H + kAuditSlack) {
    throw HypothesisViolated("sp(h*) = " + fmt(avg.gain_bias.span_h) + " exceeds H = " + fmt(H));
  }
  if (epsilon_gamma > 1.0 / (1.0 - gamma) + kAuditSlack) {
    throw HypothesisViolated("epsilon_gamma exceeds 1/(1-gamma)");
  }
  const ValueVector v_star = solve_discounted_optimal(m, gamma).values;
  const ValueVector v_pi = policy_evaluation_discounted(m, pi, gamma);
  double suboptimality = 0.0;
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    suboptimality = std::max(suboptimality, v_star[s] - v_pi[s]);
  }
  if (suboptimality > epsilon_gamma + kAuditSlack) {
    throw HypothesisViolated("policy is " + fmt(suboptimality) + "-suboptimal for the discounted problem, not " +
                             fmt(epsilon_gamma) + "-optimal");
  }
  const GainBias gb = gain_bias_of_policy(m, pi);
  double gap = -std::numeric_limits<double>::infinity();
  for (StateIndex s = 0; s < m.num_states(); ++s) gap = std::max(gap, avg.gain_bias.gain[s] - gb.gain[s]);
  return inequality_record("reduction_gain_gap", gap, (8.0 + 3.0 * epsilon_gamma / H) * epsilon,
                           "gamma = " + fmt(gamma) + ", discounted suboptimality " + fmt(suboptimality));
}

std::vector<AuditRecord> check_empirical_policy_variance(const Mdp& m, const PlanningRun& run,
                                                         double span_h, double delta) {
  const double gamma = run.gamma;
  const long long H_int = integer_span(span_h);
  const double H = static_cast<double>(H_int);
  const double epsilon = 6.0 * run.xi / (1.0 - gamma);
  const Policy& pi_hat = run.policy;
  const Policy pi_star = solve_discounted_optimal(m, gamma).policy;

  const Mdp truth_perturbed = m.with_rewards(run.perturbed_rewards);
  const Mdp empirical_perturbed = run.empirical.p_hat.with_rewards(run.perturbed_rewards);
  const Mdp& empirical = run.empirical.p_hat;

  const ValueVector v_hat = policy_evaluation_discounted(m, pi_hat, gamma);
  const ValueVector v_star = policy_evaluation_discounted(m, pi_star, gamma);
  const double e1p = max_abs_diff(v_hat, policy_evaluation_discounted(empirical_perturbed, pi_hat, gamma));
  const double e2p = max_abs_diff(v_star, policy_evaluation_discounted(empirical_perturbed, pi_star, gamma));
  const double e1u = max_abs_diff(v_hat, policy_evaluation_discounted(empirical, pi_hat, gamma));
  const double e2u = max_abs_diff(v_star, policy_evaluation_discounted(empirical, pi_star, gamma));

  const double lhs = sup_norm(return_variance(truth_perturbed, pi_hat, gamma));
  const auto bound = [&](double e1, double e2) {
    return 15.0 * (H * H + e1 * e1 + e2 * e2) / (H * (1.0 - gamma));
  };

  std::vector<AuditRecord> out;
  const bool in_regime = H <= 1.0 / (1.0 - gamma) * (1.0 + 1e-12) && epsilon <= H * (1.0 + 1e-12);
  if (in_regime) {
    out.push_back(inequality_record("empirical_policy_variance/perturbed_values", lhs, bound(e1p, e2p),
                                    "e1 = " + fmt(e1p) + ", e2 = " + fmt(e2p)));
    out.push_back(inequality_record("empirical_policy_variance/unperturbed_values", lhs, bound(e1u, e2u),
                                    "e1 = " + fmt(e1u) + ", e2 = " + fmt(e2u)));
  } else {
    out.push_back(skipped_record("empirical_policy_variance/perturbed_values",
                                 "needs H <= 1/(1-gamma) and epsilon <= H"));
    out.push_back(skipped_record("empirical_policy_variance/unperturbed_values",
                                 "needs H <= 1/(1-gamma) and epsilon <= H"));
  }

  // Empirical error bounds with unit constants; informational only.
  const double n = static_cast<double>(run.empirical.samples_per_pair);
  const double SA = static_cast<double>(m.num_states() * m.num_actions());
  const double L = std::log(SA / ((1.0 - gamma) * delta * epsilon));
  const auto error_bound = [&](const Mdp& model, const Policy& pi, const ValueVector& v) {
    return gamma * std::sqrt(L / n) * weighted_std_norm(model, pi, gamma) +
           gamma * L / ((1.0 - gamma) * n) * sup_norm(v) + epsilon / 6.0;
  };
  const ValueVector v_hat_p = policy_evaluation_discounted(truth_perturbed, pi_hat, gamma);
  AuditRecord star = inequality_record("empirical_error/optimal_policy", e2p, error_bound(m, pi_star, v_star),
                                       "unit constant");
  AuditRecord learned = inequality_record("empirical_error/returned_policy", e1p,
                                          error_bound(truth_perturbed, pi_hat, v_hat_p), "unit constant");
  star.enforced = false;
  learned.enforced = false;
  out.push_back(std::move(star));
  out.push_back(std::move(learned));
  std::stable_sort(out.begin(), out.end(),
                   [](const AuditRecord& a, const AuditRecord& b) { return a.check < b.check; });
  return out;
}

}  // namespace spanmdp
