#include "spanmdp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graph.hpp"
#include "linalg.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/mec.hpp"

namespace spanmdp {

namespace {

constexpr double kTieTolerance = 1e-12;

void require_discount(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidArgument("discount factor must lie in [0, 1), got " + std::to_string(gamma));
  }
}

double q_value(const Mdp& m, double gamma, const ValueVector& v, StateIndex s, ActionIndex a) {
  double acc = 0.0;
  const auto row = m.row(s, a);
  for (StateIndex t = 0; t < row.size(); ++t) acc += row[t] * v[t];
  return m.reward(s, a) + gamma * acc;
}

double tie_band(double best) { return kTieTolerance * std::max(1.0, std::abs(best)); }

}  // namespace

ValueVector policy_evaluation_discounted(const Mdp& m, const Policy& pi, double gamma) {
  require_discount(gamma);
  validate_policy(m, pi);
  const auto P = detail::policy_matrix(m, pi);
  const auto r = detail::policy_rewards(m, pi);
  return detail::to_std(detail::solve_resolvent(P, gamma, r));
}

ValueVector bellman_optimality_operator(const Mdp& m, double gamma, const ValueVector& v) {
  if (v.size() != m.num_states()) throw DimensionMismatch("value vector length differs from S");
  ValueVector out(m.num_states());
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (ActionIndex a = 0; a < m.num_actions(); ++a) best = std::max(best, q_value(m, gamma, v, s, a));
    out[s] = best;
  }
  return out;
}

Policy greedy_policy(const Mdp& m, double gamma, const ValueVector& v) {
  if (v.size() != m.num_states()) throw DimensionMismatch("value vector length differs from S");
  Policy pi{std::vector<ActionIndex>(m.num_states(), 0)};
  std::vector<double> q(m.num_actions());
  for (StateIndex s = 0; s < m.num_states(); ++s) {
    for (ActionIndex a = 0; a < m.num_actions(); ++a) q[a] = q_value(m, gamma, v, s, a);
    const double best = *std::max_element(q.begin(), q.end());
    const double band = tie_band(best);
    for (ActionIndex a = 0; a < m.num_actions(); ++a) {
      if (q[a] >= best - band) {
        pi.actions[s] = a;
        break;
      }
    }
  }
  return pi;
}

DiscountedSolution solve_discounted_optimal(const Mdp& m, double gamma, double tol,
                                            std::size_t max_sweeps) {
  require_discount(gamma);
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");

  const double target = gamma > 0.0 ? tol * (1.0 - gamma) / (2.0 * gamma)
                                    : std::numeric_limits<double>::infinity();
  DiscountedSolution out;
  ValueVector v(m.num_states(), 0.0);
  bool converged = false;
  while (out.sweeps < max_sweeps) {
    ValueVector next = bellman_optimality_operator(m, gamma, v);
    double diff = 0.0;
    for (StateIndex s = 0; s < v.size(); ++s) diff = std::max(diff, std::abs(next[s] - v[s]));
    v = std::move(next);
    ++out.sweeps;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, sup_norm(v));
    if (diff <= std::max(target, floor)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("discounted value iteration", max_sweeps);

  Policy pi = greedy_policy(m, gamma, v);
  const std::size_t max_rounds = 10'000;
  for (std::size_t round = 0;; ++round) {
    if (round == max_rounds) throw NonConvergence("discounted policy iteration", max_rounds);
    v = policy_evaluation_discounted(m, pi, gamma);
    bool improved = false;
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      double current = q_value(m, gamma, v, s, pi[s]);
      for (ActionIndex a = 0; a < m.num_actions(); ++a) {
        const double q = q_value(m, gamma, v, s, a);
        if (q > current + tie_band(current)) {
          current = q;
          pi.actions[s] = a;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  const Policy canonical = greedy_policy(m, gamma, v);
  if (!(canonical == pi)) {
    pi = canonical;
    v = policy_evaluation_discounted(m, pi, gamma);
  }
  out.values = std::move(v);
  out.policy = std::move(pi);
  return out;
}

GainBias gain_bias_of_policy(const Mdp& m, const Policy& pi) {
  validate_policy(m, pi);
  const auto P = detail::policy_matrix(m, pi);
  const auto r = detail::policy_rewards(m, pi);
  const auto chain = detail::analyse_chain(P);
  const detail::Matrix limit = detail::cesaro_limit(P, chain);
  const auto n = P.rows();
  const detail::Vector gain = limit * r;
  const detail::Matrix fundamental = detail::Matrix::Identity(n, n) - P + limit;
  detail::Vector bias = fundamental.partialPivLu().solve(r - gain);
  bias.array() -= bias.minCoeff();

  GainBias out;
  out.gain = detail::to_std(gain);
  out.bias = detail::to_std(bias);
  out.span_h = span(out.bias);
  return out;
}

std::vector<std::vector<ActionIndex>> argmax_sets(const QFunction& q, double tol) {
  std::vector<std::vector<ActionIndex>> out(q.num_states);
  for (StateIndex s = 0; s < q.num_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (ActionIndex a = 0; a < q.num_actions; ++a) best = std::max(best, q(s, a));
    for (ActionIndex a = 0; a < q.num_actions; ++a) {
      if (q(s, a) >= best - tol) out[s].push_back(a);
    }
  }
  return out;
}

AverageSolution solve_average_optimal(const Mdp& m, double tol, std::size_t max_iters) {
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  if (!is_weakly_communicating(m)) throw NotWeaklyCommunicating();

  const std::size_t S = m.num_states();
  const std::size_t A = m.num_actions();
  ValueVector h(S, 0.0);
  ValueVector w(S);
  double lo = 0.0;
  double hi = 0.0;
  AverageSolution out;
  bool converged = false;
  // Lazy kernel (I + P)/2 with rewards r/2: same bias, half the gain.
  while (out.iterations < max_iters) {
    for (StateIndex s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (ActionIndex a = 0; a < A; ++a) best = std::max(best, q_value(m, 1.0, h, s, a));
      w[s] = 0.5 * best + 0.5 * h[s];
    }
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (StateIndex s = 0; s < S; ++s) {
      lo = std::min(lo, w[s] - h[s]);
      hi = std::max(hi, w[s] - h[s]);
    }
    ++out.iterations;
    const double anchor = w[0];
    for (StateIndex s = 0; s < S; ++s) h[s] = w[s] - anchor;
    if (hi - lo <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("relative value iteration", max_iters);

  const double rho = lo + hi;  // twice the midpoint of the lazy-chain gain bracket
  out.q = QFunction{S, A, std::vector<double>(S * A)};
  for (StateIndex s = 0; s < S; ++s) {
    for (ActionIndex a = 0; a < A; ++a) out.q.values[s * A + a] = q_value(m, 1.0, h, s, a) - rho;
  }
  ValueVector bias(S);
  Policy pi{std::vector<ActionIndex>(S, 0)};
  const double tie = std::max(10.0 * tol, 1e-12);
  for (StateIndex s = 0; s < S; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (ActionIndex a = 0; a < A; ++a) best = std::max(best, out.q(s, a));
    bias[s] = best;
    for (ActionIndex a = 0; a < A; ++a) {
      if (out.q(s, a) >= best - tie) {
        pi.actions[s] = a;
        break;
      }
    }
  }
  const double base = *std::min_element(bias.begin(), bias.end());
  for (double& b : bias) b -= base;
  out.gain_bias.gain.assign(S, rho);
  out.gain_bias.span_h = span(bias);
  out.gain_bias.bias = std::move(bias);
  out.policy = std::move(pi);
  return out;
}

namespace {

// Expected hitting times of `target` under the best policy; empty when the
// value iteration residual check fails to certify the polished solution.
ValueVector hitting_times(const Mdp& m, StateIndex target, std::size_t horizon_cap) {
  const std::size_t S = m.num_states();
  const std::size_t A = m.num_actions();
  const auto sweep = [&](const ValueVector& h, ValueVector& next) {
    for (StateIndex s = 0; s < S; ++s) {
      if (s == target) {
        next[s] = 0.0;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      for (ActionIndex a = 0; a < A; ++a) {
        const auto row = m.row(s, a);
        double acc = 0.0;
        for (StateIndex t = 0; t < S; ++t) {
          if (t != target) acc += row[t] * h[t];
        }
        best = std::min(best, acc);
      }
      next[s] = 1.0 + best;
    }
  };

  ValueVector h(S, 0.0);
  ValueVector next(S);
  bool converged = false;
  for (std::size_t it = 0; it < horizon_cap; ++it) {
    sweep(h, next);
    double diff = 0.0;
    for (StateIndex s = 0; s < S; ++s) diff = std::max(diff, std::abs(next[s] - h[s]));
    std::swap(h, next);
    if (diff <= 1e-9) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence("diameter hitting-time iteration", horizon_cap);

  // Polish: solve the linear system of the greedy policy exactly and keep it
  // when it is itself a fixed point.
  Policy pi{std::vector<ActionIndex>(S, 0)};
  for (StateIndex s = 0; s < S; ++s) {
    double best = std::numeric_limits<double>::infinity();
    for (ActionIndex a = 0; a < A; ++a) {
      const auto row = m.row(s, a);
      double acc = 0.0;
      for (StateIndex t = 0; t < S; ++t) {
        if (t != target) acc += row[t] * h[t];
      }
      if (acc < best - 1e-12 * std::max(1.0, best)) {
        best = acc;
        pi.actions[s] = a;
      }
    }
  }
  detail::Matrix M = detail::Matrix::Identity(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
  detail::Vector rhs = detail::Vector::Ones(static_cast<Eigen::Index>(S));
  for (StateIndex s = 0; s < S; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    if (s == target) {
      rhs(si) = 0.0;
      continue;
    }
    const auto row = m.row(s, pi[s]);
    for (StateIndex t = 0; t < S; ++t) {
      if (t != target) M(si, static_cast<Eigen::Index>(t)) -= row[t];
    }
  }
  const detail::Vector exact = M.fullPivLu().solve(rhs);
  if (exact.allFinite() && (M * exact - rhs).cwiseAbs().maxCoeff() <= 1e-9) {
    ValueVector candidate = detail::to_std(exact);
    sweep(candidate, next);
    double residual = 0.0;
    for (StateIndex s = 0; s < S; ++s) residual = std::max(residual, std::abs(next[s] - candidate[s]));
    if (residual <= 1e-9) return candidate;
  }
  return h;
}

}  // namespace

double diameter(const Mdp& m, std::size_t horizon_cap) {
  const std::size_t S = m.num_states();
  if (S == 1) return 0.0;
  detail::Adjacency adj(S);
  for (StateIndex s = 0; s < S; ++s) {
    for (ActionIndex a = 0; a < m.num_actions(); ++a) {
      const auto row = m.row(s, a);
      for (StateIndex t = 0; t < S; ++t) {
        if (row[t] > 0.0) adj[s].push_back(t);
      }
    }
  }
  for (StateIndex s = 0; s < S; ++s) {
    const auto seen = detail::reachable_from(adj, s);
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return kInfinite;
  }
  double out = 0.0;
  for (StateIndex target = 0; target < S; ++target) {
    const ValueVector h = hitting_times(m, target, horizon_cap);
    for (StateIndex s = 0; s < S; ++s) {
      if (s != target) out = std::max(out, h[s]);
    }
  }
  return out;
}

}  // namespace spanmdp
