#include "spanmdp/algorithms.hpp"

#include <cmath>
#include <sstream>

#include "spanmdp/errors.hpp"

namespace spanmdp {

namespace {

void check_alg1(const Alg1Config& cfg) {
  if (cfg.n == 0) throw InvalidArgument("n must be at least 1");
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw InvalidArgument("epsilon must be positive");
  }
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
}

void check_alg2(const Alg2Config& cfg) {
  if (cfg.n == 0) throw InvalidArgument("n must be at least 1");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  if (!(cfg.span_bound >= 1.0) || !std::isfinite(cfg.span_bound)) {
    throw InvalidArgument("span bound must be at least 1");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

double perturbation_level(double gamma, double epsilon) { return (1.0 - gamma) * epsilon / 6.0; }

double reduction_discount(double epsilon, double span_bound) {
  return 1.0 - epsilon / (12.0 * span_bound);
}

Alg1Config reduction_config(const Alg2Config& cfg) {
  check_alg2(cfg);
  return Alg1Config{cfg.n, cfg.span_bound, reduction_discount(cfg.epsilon, cfg.span_bound), cfg.seed,
                    cfg.trial};
}

std::vector<double> perturb_rewards(std::span<const double> rewards, double xi, std::uint64_t seed,
                                    std::uint64_t trial) {
  if (!(xi >= 0.0)) throw NegativePerturbation(xi);
  std::vector<double> out(rewards.begin(), rewards.end());
  if (xi == 0.0) return out;
  std::mt19937_64 engine(derive_seed(seed, {purpose::kRewardNoise, trial}));
  for (double& r : out) r += xi * uniform01(engine);
  return out;
}

PlanningRun run_algorithm1_detailed(const GenerativeModel& g, const Alg1Config& cfg) {
  check_alg1(cfg);
  const double xi = perturbation_level(cfg.gamma, cfg.epsilon);
  PlanningRun run{Policy{}, build_empirical_model(g, cfg.n, cfg.trial),
                  perturb_rewards(g.mdp().rewards(), xi, cfg.seed, cfg.trial), xi, cfg.gamma, {}};
  const Mdp planning = run.empirical.p_hat.with_rewards(run.perturbed_rewards);
  auto solution = solve_discounted_optimal(planning, cfg.gamma, 1e-10 * (1.0 - cfg.gamma));
  run.policy = std::move(solution.policy);
  run.planning_values = std::move(solution.values);
  return run;
}

Policy run_algorithm1(const GenerativeModel& g, const Alg1Config& cfg) {
  return run_algorithm1_detailed(g, cfg).policy;
}

PlanningRun run_algorithm2_detailed(const GenerativeModel& g, const Alg2Config& cfg) {
  return run_algorithm1_detailed(g, reduction_config(cfg));
}

Policy run_algorithm2(const GenerativeModel& g, const Alg2Config& cfg) {
  return run_algorithm2_detailed(g, cfg).policy;
}

std::uint64_t sample_size(const SampleSizeQuery& q) {
  const auto fail = [](const std::string& what) { throw HypothesisViolated(what); };
  if (!(q.span_bound >= 1.0)) fail("H >= 1 fails: H = " + fmt(q.span_bound));
  if (!(q.epsilon > 0.0)) fail("epsilon > 0 fails: epsilon = " + fmt(q.epsilon));
  if (!(q.delta > 0.0 && q.delta < 1.0)) fail("0 < delta < 1 fails: delta = " + fmt(q.delta));
  if (!(q.constant > 0.0)) fail("C > 0 fails: C = " + fmt(q.constant));
  if (q.num_states == 0 || q.num_actions == 0) fail("S >= 1 and A >= 1 required");
  const double SA = static_cast<double>(q.num_states) * static_cast<double>(q.num_actions);

  double bound = 0.0;
  if (q.bound == SampleBound::Discounted) {
    if (!(q.gamma > 0.0 && q.gamma < 1.0)) fail("0 < gamma < 1 fails: gamma = " + fmt(q.gamma));
    const double horizon = 1.0 / (1.0 - q.gamma);
    if (q.span_bound > horizon * (1.0 + 1e-12)) {
      fail("H <= 1/(1-gamma) fails: H = " + fmt(q.span_bound) + ", 1/(1-gamma) = " + fmt(horizon));
    }
    if (q.epsilon > q.span_bound) {
      fail("epsilon <= H fails: epsilon = " + fmt(q.epsilon) + ", H = " + fmt(q.span_bound));
    }
    const double g = 1.0 - q.gamma;
    bound = q.constant * q.span_bound / (g * g * q.epsilon * q.epsilon) *
            std::log(SA / (g * q.delta * q.epsilon));
  } else {
    bound = q.constant * q.span_bound / (q.epsilon * q.epsilon) * std::log(SA / (q.delta * q.epsilon));
  }
  if (!std::isfinite(bound) || bound > 1e18) {
    throw InvalidArgument("sample size " + fmt(bound) + " is not representable");
  }
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(bound)));
}

}  // namespace spanmdp
