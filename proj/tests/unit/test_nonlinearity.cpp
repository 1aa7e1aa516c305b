#include <gtest/gtest.h>

#include <cmath>

#include "mslab/error.hpp"
#include "mslab/nonlinearity.hpp"

using namespace mslab;

TEST(Nonlinearity, PurePowerValues) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const cplx z(1.0, 1.0);
  EXPECT_NEAR(std::abs(eval_f(nl, z) - 2.0 * z), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(nl.g(4.0), 4.0);
  EXPECT_EQ(nl.polynomial_degree(), 1);
  const auto n7 = Nonlinearity::pure_power(7.0, 1);
  EXPECT_NEAR(n7.g(2.0), 8.0, 1e-14);
  EXPECT_NEAR(n7.dg(2.0), 12.0, 1e-13);
  EXPECT_NEAR(n7.g_derivative(2, 2.0), 12.0, 1e-13);
  EXPECT_NEAR(n7.g_derivative(3, 2.0), 6.0, 1e-13);
  EXPECT_NEAR(n7.g_derivative(4, 2.0), 0.0, 1e-13);
  EXPECT_NEAR(eval_primitive(n7, 2.0), 256.0 / 8.0, 1e-12);
}

TEST(Nonlinearity, CubicQuinticDerivatives) {
  const auto nl = Nonlinearity::cubic_quintic(1.0, -0.2, 2);
  EXPECT_DOUBLE_EQ(nl.g(2.0), 2.0 - 0.8);
  EXPECT_DOUBLE_EQ(nl.dg(2.0), 1.0 - 0.8);
  EXPECT_DOUBLE_EQ(nl.g_derivative(2, 2.0), -0.4);
  EXPECT_DOUBLE_EQ(nl.g_derivative(3, 2.0), 0.0);
  EXPECT_EQ(nl.polynomial_degree(), 2);
  // F(s) = int_0^s g(r^2) r dr.
  EXPECT_NEAR(eval_primitive(nl, 1.5), std::pow(1.5, 4) / 4.0 - 0.2 * std::pow(1.5, 6) / 6.0, 1e-14);
}

TEST(Nonlinearity, DerivativeMatchesDifferenceQuotient) {
  for (const auto& nl : {Nonlinearity::pure_power(3.0, 1), Nonlinearity::pure_power(7.0, 1),
                         Nonlinearity::cubic_quintic(1.0, -0.3, 1)}) {
    const cplx z(0.7, -0.4), w(0.3, 0.9);
    const double h = 1e-6;
    const cplx fd = (eval_f(nl, z + h * w) - eval_f(nl, z - h * w)) / (2.0 * h);
    EXPECT_NEAR(std::abs(eval_df(nl, z, w) - fd), 0.0, 1e-8) << nl.describe();
  }
}

TEST(Nonlinearity, Assumptions) {
  EXPECT_TRUE(check_assumptions(Nonlinearity::pure_power(3.0, 1)).all());
  EXPECT_TRUE(check_assumptions(Nonlinearity::pure_power(7.0, 1)).all());
  EXPECT_TRUE(check_assumptions(Nonlinearity::pure_power(3.0, 3)).a2);
  EXPECT_FALSE(check_assumptions(Nonlinearity::pure_power(5.0, 3)).a2);
  EXPECT_FALSE(check_assumptions(Nonlinearity::pure_power(7.0, 3)).a2);
}

TEST(Nonlinearity, ApplyIsPointwise) {
  const auto nl = Nonlinearity::pure_power(5.0, 1);
  const GridSpec g(1, 16, 2.0);
  const Field u = Field::sample(g, [](const Point& p) { return cplx(p[0], 0.5); });
  const Field f = apply_f(nl, u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(f[i] - eval_f(nl, u[i])), 0.0, 1e-15);
  EXPECT_THROW(eval_primitive(nl, -1.0), Error);
}
