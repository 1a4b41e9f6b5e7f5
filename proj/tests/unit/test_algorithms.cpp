#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "spanmdp/algorithms.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/generators.hpp"

using namespace spanmdp;

TEST(Perturbation, ZeroLevelIsIdentity) {
  const std::vector<double> r{0.1, 0.5, 0.9};
  EXPECT_EQ(perturb_rewards(r, 0.0, 3, 1), r);
}

TEST(Perturbation, LevelAndOffsetRange) {
  const double xi = perturbation_level(0.9, 0.6);
  EXPECT_NEAR(xi, 0.01, 1e-16);
  const std::vector<double> r(200, 0.5);
  const auto out = perturb_rewards(r, xi, 8, 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_GE(out[i] - r[i], 0.0);
    EXPECT_LT(out[i] - r[i], xi);
  }
}

TEST(Perturbation, DeterministicAndSeedSensitive) {
  const std::vector<double> r(10, 0.0);
  EXPECT_EQ(perturb_rewards(r, 0.1, 4, 2), perturb_rewards(r, 0.1, 4, 2));
  EXPECT_NE(perturb_rewards(r, 0.1, 4, 2), perturb_rewards(r, 0.1, 5, 2));
  EXPECT_NE(perturb_rewards(r, 0.1, 4, 2), perturb_rewards(r, 0.1, 4, 3));
}

TEST(Perturbation, RejectsNegativeLevel) {
  const std::vector<double> r(2, 0.0);
  EXPECT_THROW(perturb_rewards(r, -1e-3, 0, 0), NegativePerturbation);
}

TEST(Perturbation, ValueShiftBoundedByLevelOverHorizon) {
  const Mdp m = generate_garnet(4, 2, 2, 31);
  const double gamma = 0.9;
  const double xi = 0.05;
  const Mdp shifted = m.with_rewards(perturb_rewards(m.rewards(), xi, 1, 0));
  for_each_policy(m, 4096, [&](const Policy& pi) {
    const auto v = policy_evaluation_discounted(m, pi, gamma);
    const auto w = policy_evaluation_discounted(shifted, pi, gamma);
    for (std::size_t s = 0; s < v.size(); ++s) {
      EXPECT_GE(w[s] - v[s], -1e-12);
      EXPECT_LE(w[s] - v[s], xi / (1 - gamma) + 1e-12);
    }
  });
}

TEST(Algorithm1, DeterministicKernelMatchesPlanningOnTrueKernel) {
  const Mdp m(3, 2, {0, 1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 1, 0}, {0.1, 0.3, 0.5, 0.2, 0.9, 0.4});
  const GenerativeModel g(m, 6);
  const Alg1Config cfg{3, 0.5, 0.9, 12, 0};
  const auto run = run_algorithm1_detailed(g, cfg);
  EXPECT_EQ(run.empirical.p_hat.transitions(), m.transitions());
  const Mdp planning = m.with_rewards(run.perturbed_rewards);
  EXPECT_EQ(run.policy, solve_discounted_optimal(planning, 0.9).policy);
  EXPECT_EQ(run.policy, solve_discounted_optimal(m, 0.9).policy);
  EXPECT_DOUBLE_EQ(run.xi, perturbation_level(0.9, 0.5));
}

TEST(Algorithm1, PicksLargerSelfLoop) {
  const GenerativeModel g(fixtures::two_armed_loop(), 0);
  EXPECT_EQ(run_algorithm1(g, Alg1Config{1, 1.0, 0.9, 0, 0}), Policy{{1}});
}

TEST(Algorithm1, Reproducible) {
  const GenerativeModel g(generate_garnet(5, 3, 3, 2), 40);
  const Alg1Config cfg{8, 1.0, 0.95, 9, 3};
  const auto a = run_algorithm1_detailed(g, cfg);
  const auto b = run_algorithm1_detailed(g, cfg);
  EXPECT_EQ(a.policy, b.policy);
  EXPECT_EQ(a.empirical.counts, b.empirical.counts);
  EXPECT_EQ(a.perturbed_rewards, b.perturbed_rewards);
  EXPECT_EQ(a.planning_values, b.planning_values);
}

TEST(Algorithm1, RejectsBadConfig) {
  const GenerativeModel g(fixtures::two_armed_loop(), 0);
  EXPECT_THROW(run_algorithm1(g, Alg1Config{0, 1.0, 0.9, 0, 0}), InvalidArgument);
  EXPECT_THROW(run_algorithm1(g, Alg1Config{1, 0.0, 0.9, 0, 0}), InvalidArgument);
  EXPECT_THROW(run_algorithm1(g, Alg1Config{1, 1.0, 1.0, 0, 0}), InvalidArgument);
}

TEST(Algorithm2, ReductionDiscount) {
  EXPECT_NEAR(reduction_discount(0.5, 5.0), 119.0 / 120.0, 1e-15);
  EXPECT_NEAR(reduction_discount(1.0, 1.0), 11.0 / 12.0, 1e-15);
  const auto cfg = reduction_config(Alg2Config{7, 0.5, 5.0, 3, 4});
  EXPECT_EQ(cfg.n, 7u);
  EXPECT_EQ(cfg.epsilon, 5.0);
  EXPECT_EQ(cfg.gamma, reduction_discount(0.5, 5.0));
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.trial, 4u);
}

TEST(Algorithm2, BitIdenticalToReducedAlgorithm1) {
  const GenerativeModel g(generate_garnet(4, 2, 2, 10), 77);
  const Alg2Config cfg{16, 0.4, 2.5, 5, 1};
  const auto a = run_algorithm2_detailed(g, cfg);
  const auto b = run_algorithm1_detailed(g, reduction_config(cfg));
  EXPECT_EQ(a.policy, b.policy);
  EXPECT_EQ(a.planning_values, b.planning_values);
  EXPECT_EQ(a.perturbed_rewards, b.perturbed_rewards);
  EXPECT_EQ(a.gamma, b.gamma);
}

TEST(Algorithm2, OnePolicyMdpHasZeroGap) {
  const Mdp m = fixtures::two_state_cycle();
  const GenerativeModel g(m, 1);
  for (std::size_t n : {1u, 5u, 50u}) {
    const Policy pi = run_algorithm2(g, Alg2Config{n, 1.0, 1.0, n, 0});
    EXPECT_EQ(pi, (Policy{{0, 0}}));
    const double rho = solve_average_optimal(m).gain_bias.gain[0];
    for (double g_s : gain_bias_of_policy(m, pi).gain) EXPECT_NEAR(rho - g_s, 0.0, 1e-10);
  }
}

TEST(Algorithm2, RejectsBadConfig) {
  const GenerativeModel g(fixtures::two_armed_loop(), 0);
  EXPECT_THROW(run_algorithm2(g, Alg2Config{1, 1.5, 1.0, 0, 0}), InvalidArgument);
  EXPECT_THROW(run_algorithm2(g, Alg2Config{1, 0.5, 0.5, 0, 0}), InvalidArgument);
}

TEST(SampleSize, AverageRewardArithmetic) {
  SampleSizeQuery q;
  q.bound = SampleBound::AverageReward;
  q.span_bound = 1.0;
  q.epsilon = 1.0;
  q.delta = 0.5;
  q.num_states = 2;
  q.num_actions = 2;
  q.constant = 1.0;
  EXPECT_EQ(sample_size(q), 3u);
}

TEST(SampleSize, DiscountedArithmetic) {
  SampleSizeQuery q;
  q.bound = SampleBound::Discounted;
  q.span_bound = 2.0;
  q.gamma = 0.75;
  q.epsilon = 1.0;
  q.delta = 0.1;
  q.num_states = 3;
  q.num_actions = 2;
  const double expected = 2.0 / (0.0625) * std::log(6.0 / (0.25 * 0.1));
  EXPECT_EQ(sample_size(q), static_cast<std::uint64_t>(std::ceil(expected)));
}

TEST(SampleSize, DiscountedRequiresSpanWithinHorizon) {
  SampleSizeQuery q;
  q.bound = SampleBound::Discounted;
  q.span_bound = 2.5;
  q.gamma = 0.5;
  q.epsilon = 1.0;
  EXPECT_THROW(sample_size(q), HypothesisViolated);
  q.span_bound = 2.0;  // boundary H = 1/(1-gamma) is admissible
  EXPECT_GE(sample_size(q), 1u);
  q.span_bound = 1.0;
  q.epsilon = 1.5;
  EXPECT_THROW(sample_size(q), HypothesisViolated);
}

TEST(SampleSize, MonotoneInConstant) {
  SampleSizeQuery q;
  q.span_bound = 4.0;
  q.epsilon = 0.3;
  q.delta = 0.1;
  q.num_states = 5;
  q.num_actions = 2;
  std::uint64_t prev = 0;
  for (double c : {0.5, 1.0, 2.0, 4.0}) {
    q.constant = c;
    const auto n = sample_size(q);
    EXPECT_GE(n, prev);
    if (prev > 0) EXPECT_LE(n, 2 * prev);
    EXPECT_GE(n + 1, 2 * prev);
    prev = n;
  }
}

TEST(SampleSize, RejectsInvalidParameters) {
  SampleSizeQuery q;
  q.delta = 1.0;
  EXPECT_THROW(sample_size(q), HypothesisViolated);
  q.delta = 0.1;
  q.span_bound = 0.5;
  EXPECT_THROW(sample_size(q), HypothesisViolated);
}
