#include <algorithm>
#include <cmath>

#include "graph.hpp"
#include "linalg.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/solvers.hpp"

namespace spanmdp {

namespace {

constexpr double kMixingThreshold = 0.5;
constexpr double kMixingSlack = 1e-12;
constexpr double kArgmaxTolerance = 1e-8;

}  // namespace

MixingReport mixing_time(const Mdp& m, const Policy& pi, std::size_t t_max) {
  validate_policy(m, pi);
  const auto P = detail::policy_matrix(m, pi);
  const auto chain = detail::analyse_chain(P);
  if (chain.recurrent_classes.size() != 1) throw NoUniqueStationary(chain.recurrent_classes.size());

  const auto& members = chain.recurrent_classes.front();
  const detail::Vector nu = detail::class_stationary(P, members);
  MixingReport out;
  out.stationary = detail::to_std(nu);
  // A periodic class never reaches total variation 1/2 from its own states.
  if (detail::period_of_class(chain.adj, members, chain.scc, chain.scc[members.front()]) > 1) {
    return out;
  }

  detail::Matrix power = P;
  for (std::size_t t = 1; t <= t_max; ++t) {
    out.iterations_used = t;
    const double worst = (power.rowwise() - nu.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
    if (worst <= kMixingThreshold + kMixingSlack) {
      out.tau = static_cast<double>(t);
      return out;
    }
    power = power * P;
  }
  throw NonConvergence("mixing-time power iteration", t_max);
}

double policy_class_mixing(const Mdp& m, PolicyClass mode, std::size_t t_max, std::uint64_t cap) {
  check_enumeration(m, cap);
  if (mode == PolicyClass::Uniform) {
    double worst = 0.0;
    bool infinite = false;
    for_each_policy(m, cap, [&](const Policy& pi) {
      if (infinite) return;
      try {
        worst = std::max(worst, mixing_time(m, pi, t_max).tau);
      } catch (const NoUniqueStationary&) {
        worst = kInfinite;
      }
      infinite = std::isinf(worst);
    });
    return worst;
  }

  const AverageSolution opt = solve_average_optimal(m);
  const auto sets = argmax_sets(opt.q, kArgmaxTolerance);
  const std::size_t S = m.num_states();
  std::vector<std::size_t> idx(S, 0);
  double best = kInfinite;
  while (true) {
    Policy pi{std::vector<ActionIndex>(S)};
    for (StateIndex s = 0; s < S; ++s) pi.actions[s] = sets[s][idx[s]];
    try {
      best = std::min(best, mixing_time(m, pi, t_max).tau);
    } catch (const NoUniqueStationary&) {
    }
    std::size_t pos = S;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < sets[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return best;
    }
  }
}

}  // namespace spanmdp
