#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spanmdp/diagnostics.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/generators.hpp"

using namespace spanmdp;

namespace {

Mdp random_chain(std::size_t S, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> P(S * S), r(S);
  for (std::size_t s = 0; s < S; ++s) {
    double total = 0.0;
    for (std::size_t t = 0; t < S; ++t) total += P[s * S + t] = 0.1 + uniform01(rng);
    for (std::size_t t = 0; t < S; ++t) P[s * S + t] /= total;
    r[s] = uniform01(rng);
  }
  return Mdp(S, 1, P, r);
}

const AuditRecord* find(const AuditReport& report, const std::string& check) {
  for (const auto& r : report.records) {
    if (r.check == check) return &r;
  }
  return nullptr;
}

}  // namespace

TEST(Records, InequalityUsesSlack) {
  EXPECT_EQ(inequality_record("x", 1.0, 1.0 - 5e-10).status, CheckStatus::Pass);
  EXPECT_EQ(inequality_record("x", 1.0, 1.0 - 2e-9).status, CheckStatus::Fail);
  const auto r = inequality_record("x", 0.25, 1.0);
  EXPECT_EQ(r.margin, 0.75);
  EXPECT_STREQ(to_string(CheckStatus::Skipped), "SKIPPED");
  const auto s = skipped_record("y", "why");
  EXPECT_TRUE(std::isnan(s.lhs));
  EXPECT_FALSE(s.failed());
}

TEST(ConditionalVariance, DeterministicRowsGiveZero) {
  const auto cv = conditional_variance(fixtures::three_state_ring(), Policy{{0, 0, 0}}, {0.3, 5.0, -1.0});
  for (double x : cv) EXPECT_EQ(x, 0.0);
}

TEST(ConditionalVariance, FairCoinOverTwoValues) {
  const Mdp m(2, 1, {0.5, 0.5, 0.5, 0.5}, {0, 0});
  const auto cv = conditional_variance(m, Policy{{0, 0}}, {0.0, 2.0});
  EXPECT_NEAR(cv[0], 1.0, 1e-15);
  EXPECT_NEAR(cv[1], 1.0, 1e-15);
}

TEST(ConditionalVariance, ConstantValueGivesZero) {
  const Mdp m = random_chain(4, 1);
  for (double x : conditional_variance(m, Policy{{0, 0, 0, 0}}, {2.5, 2.5, 2.5, 2.5})) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(ReturnVariance, DeterministicDynamicsGiveZero) {
  for (double x : return_variance(fixtures::two_state_cycle(), Policy{{0, 0}}, 0.9)) EXPECT_NEAR(x, 0.0, 1e-15);
  EXPECT_NEAR(weighted_std_norm(fixtures::three_state_ring(), Policy{{0, 0, 0}}, 0.9), 0.0, 1e-15);
}

TEST(ReturnVariance, MatchesTruncatedPathEnumeration) {
  const Mdp m = random_chain(2, 4);
  const Policy pi{{0, 0}};
  const double gamma = 0.5;
  const std::size_t T = 19;
  const auto sigma2 = return_variance(m, pi, gamma);
  const auto finite = finite_horizon_return_variance(m, pi, gamma, T, ValueVector(2, 0.0));
  const double bound = 2 * std::pow(gamma, T) / ((1 - gamma) * (1 - gamma)) +
                       std::pow(gamma, 2.0 * T) / ((1 - gamma) * (1 - gamma)) + 1e-9;
  for (std::size_t s = 0; s < 2; ++s) EXPECT_NEAR(sigma2[s], finite[s], bound);
}

TEST(ReturnVariance, SolvesVarianceBellmanEquationAsNeumannSeries) {
  const Mdp m = random_chain(3, 9);
  const Policy pi{{0, 0, 0}};
  const double gamma = 0.9;
  const auto v = policy_evaluation_discounted(m, pi, gamma);
  auto cv = conditional_variance(m, pi, v);
  for (double& x : cv) x *= gamma * gamma;
  const auto P = oracle::policy_matrix(m, pi);
  const auto expected = oracle::neumann_series(P, gamma * gamma, cv, 10000);
  const auto sigma2 = return_variance(m, pi, gamma);
  for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(sigma2[s], expected[s], 1e-6);
  EXPECT_LE(variance_bellman_residual(m, pi, gamma, sigma2), 1e-10);
}

TEST(FiniteHorizonVariance, OneStepFairCoin) {
  const Mdp m(2, 1, {0.5, 0.5, 0, 1}, {0, 0});
  const auto var = finite_horizon_return_variance(m, Policy{{0, 0}}, 0.5, 1, {0.0, 2.0});
  EXPECT_NEAR(var[0], 0.25, 1e-15);
  EXPECT_NEAR(var[1], 0.0, 1e-15);
}

TEST(FiniteHorizonVariance, DeterministicDynamicsGiveZero) {
  for (double x : finite_horizon_return_variance(fixtures::two_state_cycle(), Policy{{0, 0}}, 0.7, 1, {3.0, 1.0})) {
    EXPECT_EQ(x, 0.0);
  }
}

TEST(FiniteHorizonVariance, PathCapIsEnforced) {
  const Mdp m = random_chain(3, 2);
  EXPECT_THROW(finite_horizon_return_variance(m, Policy{{0, 0, 0}}, 0.5, 6, ValueVector(3, 0.0), 100),
               EnumerationTooLarge);
}

TEST(MultistepVariance, IdentityHoldsOnRandomChain) {
  const Mdp m = random_chain(3, 6);
  const auto records = check_multistep_variance_identity(m, Policy{{0, 0, 0}}, 0.6, 3);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].check, "multistep_variance_identity/T=3");
  EXPECT_LE(records[0].lhs, 1e-8);
  EXPECT_EQ(records[0].status, CheckStatus::Pass);
  EXPECT_EQ(records[1].status, CheckStatus::Pass);
}

TEST(MultistepVariance, OneStepReducesToBellmanEquation) {
  const Mdp m = random_chain(4, 12);
  const auto records = check_multistep_variance_identity(m, Policy{{0, 0, 0, 0}}, 0.9, 1);
  EXPECT_LE(records[0].lhs, 1e-10);
}

TEST(MultistepVariance, DeterministicInstanceBothSidesZero) {
  const auto records = check_multistep_variance_identity(fixtures::three_state_ring(), Policy{{0, 0, 0}}, 0.8, 2);
  EXPECT_NEAR(records[0].lhs, 0.0, 1e-14);
  EXPECT_NEAR(records[1].lhs, 0.0, 1e-14);
  EXPECT_NEAR(records[1].rhs, 0.0, 1e-14);
}

TEST(HorizonInequality, Examples) {
  const auto one = check_horizon_inequality(1, 0.0);
  EXPECT_EQ(one[0].check, "horizon_inequality/H=1");
  EXPECT_NEAR(one[0].rhs, 1.0, 1e-15);
  EXPECT_NEAR(one[0].lhs, 1.0 - std::exp(-2.0), 1e-15);
  EXPECT_EQ(one[0].status, CheckStatus::Pass);

  const auto two = check_horizon_inequality(2, 0.5);
  EXPECT_NEAR(two[0].rhs, 1.875, 1e-15);
  EXPECT_EQ(two[0].status, CheckStatus::Pass);
  EXPECT_NEAR(two[1].lhs, 1.6, 1e-15);
  EXPECT_EQ(two[1].status, CheckStatus::Pass);

  EXPECT_THROW(check_horizon_inequality(1, -0.1), HypothesisViolated);
  EXPECT_THROW(check_horizon_inequality(2, 0.4), HypothesisViolated);
  EXPECT_THROW(check_horizon_inequality(0, 0.5), HypothesisViolated);
}

TEST(HorizonInequality, GridOfSpansAndDiscounts) {
  for (long long H = 1; H <= 10; ++H) {
    const double h = static_cast<double>(H);
    for (double gamma : {1 - 1 / h, 1 - 1 / (2 * h), 1 - 1 / (10 * h)}) {
      for (const auto& r : check_horizon_inequality(H, gamma)) EXPECT_EQ(r.status, CheckStatus::Pass) << r.check;
    }
  }
}

TEST(IntegerSpan, RoundsNearIntegersAndCeilsOtherwise) {
  EXPECT_EQ(integer_span(0.0), 1);
  EXPECT_EQ(integer_span(0.5), 1);
  EXPECT_EQ(integer_span(2.0 + 1e-12), 2);
  EXPECT_EQ(integer_span(2.01), 3);
  EXPECT_EQ(integer_span(4.507331378269784), 5);
}

TEST(Audit, TwoStateCycle) {
  AuditOptions opts;
  opts.instance_id = "cycle";
  const auto report = audit_instance(fixtures::two_state_cycle(), 0.5, opts);
  EXPECT_TRUE(report.all_passed());
  EXPECT_NEAR(report.meta.span_h, 0.5, 1e-10);
  EXPECT_EQ(report.meta.tau_star, kInfinite);
  const auto* rv = find(report, "return_variance_crude_bound/optimal");
  ASSERT_NE(rv, nullptr);
  EXPECT_NEAR(rv->lhs, 0.0, 1e-14);
  EXPECT_TRUE(std::is_sorted(report.records.begin(), report.records.end(),
                             [](const auto& a, const auto& b) { return a.check < b.check; }));
}

TEST(Audit, SelfLoopHasZeroLeftHandSides) {
  const auto report = audit_instance(fixtures::single_self_loop(), 0.5);
  EXPECT_TRUE(report.all_passed());
  EXPECT_EQ(report.meta.span_h, 0.0);
  for (const auto& r : report.records) {
    if (r.status == CheckStatus::Skipped || r.check.starts_with("horizon")) continue;
    EXPECT_NEAR(r.lhs, 0.0, 1e-12) << r.check;
  }
}

TEST(Audit, ChainFixtureInRegime) {
  AuditOptions opts;
  opts.max_multistep_horizon = 3;
  const auto report = audit_instance(fixtures::chain_fixture(), 0.9, opts);
  for (const auto& r : report.failures()) ADD_FAILURE() << r.check << " " << r.lhs << " > " << r.rhs;
  EXPECT_NEAR(report.meta.span_h, 4.507331378269784, 1e-9);
  EXPECT_EQ(report.meta.tau_star, 6.0);
  EXPECT_EQ(report.meta.tau_unif, 35.0);
  const auto* bound = find(report, "optimal_policy_variance_bound");
  ASSERT_NE(bound, nullptr);
  EXPECT_EQ(bound->status, CheckStatus::Pass);
}

TEST(Audit, RejectsMultipleEndComponents) {
  EXPECT_THROW(audit_instance(fixtures::two_mec_example(), 0.9), NotWeaklyCommunicating);
}

TEST(Audit, GarnetSweepHasNoFailures) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Mdp m = generate_garnet(2 + seed % 4, 1 + seed % 3, 1 + seed % 2, 300 + seed);
    const double H = solve_average_optimal(m).gain_bias.span_h;
    const double gamma = 1.0 - 1.0 / (2.0 * static_cast<double>(integer_span(H)));
    AuditOptions opts;
    opts.max_multistep_horizon = 3;
    const auto report = audit_instance(m, gamma, opts);
    for (const auto& r : report.failures()) ADD_FAILURE() << "seed " << seed << " " << r.check;
  }
}

TEST(AuditOutput, CsvAndJsonShapes) {
  AuditOptions opts;
  opts.instance_id = "cycle";
  const auto report = audit_instance(fixtures::two_state_cycle(), 0.5, opts);
  const std::string csv = audit_csv({report});
  EXPECT_TRUE(csv.starts_with("instance_id,check,lhs,rhs,margin,pass\n"));
  EXPECT_NE(csv.find("cycle,span_le_diameter,"), std::string::npos);
  EXPECT_NE(csv.find("SKIPPED"), std::string::npos);
  const auto doc = nlohmann::json::parse(audit_json({report}));
  ASSERT_TRUE(doc.is_array() || doc.is_object());
}

TEST(Reduction, ExactDiscountedOptimumPasses) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Mdp m = generate_garnet(4, 2, 2, 60 + seed);
    const double H = std::max(1.0, solve_average_optimal(m).gain_bias.span_h);
    const double eps = 0.5;
    const Policy pi = solve_discounted_optimal(m, 1.0 - eps / H).policy;
    const auto rec = check_reduction(m, pi, eps, H, 0.0);
    EXPECT_EQ(rec.check, "reduction_gain_gap");
    EXPECT_EQ(rec.status, CheckStatus::Pass) << "seed " << seed;
    EXPECT_NEAR(rec.rhs, 8 * eps, 1e-15);
  }
}

TEST(Reduction, OnePolicyMdpHasZeroGap) {
  const auto rec = check_reduction(fixtures::two_state_cycle(), Policy{{0, 0}}, 0.1, 1.0, 0.0);
  EXPECT_NEAR(rec.lhs, 0.0, 1e-12);
  EXPECT_EQ(rec.status, CheckStatus::Pass);
}

TEST(Reduction, RejectsPolicyOutsideHypothesis) {
  const Mdp m = fixtures::two_armed_loop();
  EXPECT_THROW(check_reduction(m, Policy{{0}}, 0.5, 1.0, 0.0), HypothesisViolated);
}

TEST(EmpiricalVariance, ChainFixtureRun) {
  const Mdp m = fixtures::chain_fixture();
  const double H = solve_average_optimal(m).gain_bias.span_h;
  const GenerativeModel g(m, 3);
  const auto run = run_algorithm1_detailed(g, Alg1Config{200, 5.0, 0.9, 3, 0});
  const auto records = check_empirical_policy_variance(m, run, H, 0.1);
  ASSERT_EQ(records.size(), 4u);
  for (const auto& r : records) {
    if (r.check.starts_with("empirical_policy_variance")) {
      EXPECT_EQ(r.status, CheckStatus::Pass) << r.check;
      EXPECT_TRUE(r.enforced);
    } else {
      EXPECT_FALSE(r.enforced);
    }
  }
}

TEST(EmpiricalVariance, SkippedOutsideRegime) {
  const Mdp m = fixtures::chain_fixture();
  const auto run = run_algorithm1_detailed(GenerativeModel(m, 3), Alg1Config{5, 1.0, 0.5, 0, 0});
  const auto records = check_empirical_policy_variance(m, run, 4.5, 0.1);
  for (const auto& r : records) {
    if (r.check.starts_with("empirical_policy_variance")) EXPECT_EQ(r.status, CheckStatus::Skipped);
  }
}
