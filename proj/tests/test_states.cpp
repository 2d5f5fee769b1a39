#include <cmath>

#include <gtest/gtest.h>

#include "dirac_lpt/states.hpp"

using namespace dirac_lpt;

TEST(States, ReferenceStates) {
  const auto a = make_state(1, 1, 1);
  EXPECT_EQ(a.chi(), 1);
  EXPECT_DOUBLE_EQ(a.j(), 0.5);
  const auto b = make_state(-1, 0, 1);
  EXPECT_EQ(b.chi(), -1);
  EXPECT_DOUBLE_EQ(b.j(), 0.5);
}

TEST(States, HigherAngularMomentum) {
  const auto q = make_state(-1, 2, 0);
  EXPECT_EQ(q.chi(), -3);
  EXPECT_EQ(q.twice_j(), 5);
  // chi = s (j + 1/2)
  EXPECT_DOUBLE_EQ(q.chi(), q.s * (q.j() + 0.5));
}

TEST(States, Rejects) {
  EXPECT_THROW(make_state(1, 0, 1), InvalidState);
  EXPECT_THROW(make_state(1, 1, 0), InvalidState);
  EXPECT_THROW(make_state(0, 1, 1), InvalidArgument);
  EXPECT_THROW(make_state(2, 1, 1), InvalidArgument);
  EXPECT_THROW(make_state(-1, -1, 0), InvalidArgument);
  EXPECT_THROW(make_state(-1, 0, -1), InvalidArgument);
}

TEST(PrincipalN, Examples) {
  EXPECT_NEAR(principal_N(make_state(-1, 0, 0), -0.5, 0.0), std::sqrt(0.75), 1e-15);
  for (double a : {0.1, 0.54, 1.3}) {
    EXPECT_DOUBLE_EQ(principal_N(make_state(1, 1, 1), -a / 2, -a / 2), 2.0);
    EXPECT_DOUBLE_EQ(principal_N(make_state(-1, 0, 1), -a / 2, -a / 2), 2.0);
  }
  const double w = 0.540004;
  EXPECT_NEAR(principal_N(make_state(-1, 0, 1), 0.0, -w), 1.0 + std::sqrt(1.0 + w * w), 1e-15);
  EXPECT_NEAR(principal_N(make_state(-1, 0, 1), 0.0, -w), 2.1364877, 1e-7);
}

TEST(PrincipalN, Symmetries) {
  for (double v : {-0.3, -0.6})
    for (double w : {0.0, -0.2}) {
      const double n1 = principal_N(make_state(1, 2, 1), v, w);
      EXPECT_DOUBLE_EQ(n1, principal_N(make_state(1, 2, 1), -v, -w));
      EXPECT_DOUBLE_EQ(n1, principal_N(make_state(-1, 1, 1), v, w)); // chi = +2 vs -2
    }
}

TEST(PrincipalN, WeakCouplingLimit) {
  const auto q = make_state(-1, 1, 2);
  EXPECT_NEAR(principal_N(q, -1e-8, 0.0), 2.0 + 2.0, 1e-12);
}

TEST(PrincipalN, Supercritical) {
  EXPECT_THROW(principal_N(make_state(-1, 0, 1), -1.0, 0.0), SupercriticalCoupling);
  EXPECT_THROW(principal_N(make_state(-1, 0, 1), -1.2, 0.1), SupercriticalCoupling);
  EXPECT_NO_THROW(principal_N(make_state(-1, 0, 1), -1.2, -0.9));
}
