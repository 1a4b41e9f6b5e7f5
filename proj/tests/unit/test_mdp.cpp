#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "spanmdp/errors.hpp"
#include "spanmdp/mdp.hpp"

using namespace spanmdp;

TEST(ValidateMdp, AcceptsTwoStateCycle) { EXPECT_NO_THROW(validate_mdp(fixtures::two_state_cycle())); }

TEST(ValidateMdp, RejectsRowSummingBelowOne) {
  const Mdp m(2, 1, {0.5, 0.48, 0, 1}, {0, 0});
  try {
    validate_mdp(m);
    FAIL() << "expected RowNotStochastic";
  } catch (const RowNotStochastic& e) {
    EXPECT_EQ(e.state(), 0u);
    EXPECT_EQ(e.action(), 0u);
    EXPECT_NEAR(e.sum(), 0.98, 1e-15);
  }
}

TEST(ValidateMdp, RejectsRewardAboveOne) {
  const Mdp m(1, 1, {1.0}, {1.2});
  try {
    validate_mdp(m);
    FAIL() << "expected ValueOutOfRange";
  } catch (const ValueOutOfRange& e) {
    EXPECT_EQ(e.field(), "rewards");
    EXPECT_EQ(e.index(), 0u);
  }
}

TEST(ValidateMdp, RejectsNegativeProbabilityAndNan) {
  EXPECT_THROW(validate_mdp(Mdp(2, 1, {1.5, -0.5, 0, 1}, {0, 0})), ValueOutOfRange);
  EXPECT_THROW(validate_mdp(Mdp(1, 1, {1.0}, {std::nan("")})), ValueOutOfRange);
}

TEST(ValidateMdp, RowToleranceIsOneInTenToTheTwelve) {
  EXPECT_NO_THROW(validate_mdp(Mdp(2, 1, {0.5, 0.5 + 5e-13, 0, 1}, {0, 0})));
  EXPECT_THROW(validate_mdp(Mdp(2, 1, {0.5, 0.5 + 5e-12, 0, 1}, {0, 0})), RowNotStochastic);
}

TEST(MdpShape, ConstructorChecksSizes) {
  EXPECT_THROW(Mdp(0, 1, {}, {}), DimensionMismatch);
  EXPECT_THROW(Mdp(2, 1, {1, 0, 0}, {0, 0}), DimensionMismatch);
  EXPECT_THROW(Mdp(2, 1, {1, 0, 0, 1}, {0}), DimensionMismatch);
}

TEST(Span, Examples) {
  EXPECT_EQ(span(std::vector<double>{3, 3, 3}), 0.0);
  EXPECT_EQ(span(std::vector<double>{0, 0.5}), 0.5);
  EXPECT_EQ(span(std::vector<double>{1, -2, 4}), 6.0);
  EXPECT_THROW(span(std::vector<double>{}), EmptyVector);
}

TEST(Span, SemiNormProperties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(6), w(6), sum(6), shifted(6), scaled(6);
    const double alpha = u(rng);
    const double c = u(rng);
    for (int i = 0; i < 6; ++i) {
      v[i] = u(rng);
      w[i] = u(rng);
      sum[i] = v[i] + w[i];
      shifted[i] = v[i] + alpha;
      scaled[i] = c * v[i];
    }
    EXPECT_GE(span(v), 0.0);
    EXPECT_LE(span(sum), span(v) + span(w) + 1e-12);
    EXPECT_NEAR(span(shifted), span(v), 1e-12);
    EXPECT_NEAR(span(scaled), std::abs(c) * span(v), 1e-12);
  }
}

TEST(Policies, EnumerationIsLexicographicAndComplete) {
  const Mdp m(3, 2, std::vector<double>(18, 0.0), std::vector<double>(6, 0.0));
  std::vector<std::vector<ActionIndex>> seen;
  for_each_policy(m, 4096, [&](const Policy& pi) { seen.push_back(pi.actions); });
  ASSERT_EQ(seen.size(), 8u);
  EXPECT_EQ(seen.front(), (std::vector<ActionIndex>{0, 0, 0}));
  EXPECT_EQ(seen[1], (std::vector<ActionIndex>{0, 0, 1}));
  EXPECT_EQ(seen.back(), (std::vector<ActionIndex>{1, 1, 1}));
  EXPECT_THROW(for_each_policy(m, 7, [](const Policy&) {}), EnumerationTooLarge);
}

TEST(Policies, ValidatePolicyChecksIndices) {
  const Mdp m = fixtures::two_armed_loop();
  EXPECT_NO_THROW(validate_policy(m, Policy{{1}}));
  EXPECT_THROW(validate_policy(m, Policy{{2}}), IndexOutOfRange);
  EXPECT_THROW(validate_policy(m, Policy{{0, 0}}), IndexOutOfRange);
}

TEST(Policies, CountSaturates) {
  const Mdp m(70, 2, std::vector<double>(70 * 2 * 70, 0.0), std::vector<double>(140, 0.0));
  EXPECT_EQ(policy_count(m), UINT64_MAX);
}
