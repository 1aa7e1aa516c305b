#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mslab/fundamental.hpp"

using namespace mslab;

namespace {

constexpr double kPi = std::numbers::pi;

struct HankelRow {
  double re, im;
  double h0re, h0im, h1re, h1im;
};

// mpmath.hankel1 at 30 digits.
const HankelRow kHankel[] = {
    {0.3, 0.4, 0.34662934986815049, -0.55880431040475455, -0.79120463403889536, -0.81775341918432431},
    {1.5, 0.2, 0.43244228762142061, 0.28344942572883755, 0.43495523903039231, -0.38017493793755325},
    {-2.0, 3.0, -0.01547792234577986, 0.013233558821623104, 0.015794231019608807, 0.016278844443523227},
    {5.0, 1.0, -0.074950603718746033, -0.1051400869772682, -0.11458819503238055, 0.066820584556261076},
    {0.05, 2.5, 0.0023503938572800278, -0.03961858013623184, -0.046942941941144974, -0.0029230081611345747},
    {12.0, 0.3, 0.033231979666272302, -0.16721840144680343, -0.16615493045963154, -0.040239081745611371},
};

}  // namespace

TEST(Fundamental, BranchSqrt) {
  EXPECT_NEAR(std::abs(branch_sqrt(-1.0) - cplx(0.0, 1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(branch_sqrt(cplx(0.0, 4.0)) - std::sqrt(2.0) * cplx(1.0, 1.0)), 0.0, 1e-14);
  EXPECT_GT(branch_sqrt(cplx(3.0, -1e-9)).imag(), 0.0);
  EXPECT_GT(branch_sqrt(cplx(-0.2, -5.0)).imag(), 0.0);
}

TEST(Fundamental, HankelAgainstTable) {
  for (const auto& r : kHankel) {
    const cplx z(r.re, r.im);
    const cplx h0 = hankel1(0, z), h1 = hankel1(1, z);
    EXPECT_LT(std::abs(h0 - cplx(r.h0re, r.h0im)) / std::abs(cplx(r.h0re, r.h0im)), 1e-12) << z;
    EXPECT_LT(std::abs(h1 - cplx(r.h1re, r.h1im)) / std::abs(cplx(r.h1re, r.h1im)), 1e-12) << z;
  }
}

TEST(Fundamental, BesselKRecurrence) {
  // K_2 = K_0 + (2/w) K_1.
  for (const cplx w : {cplx(0.5, 0.1), cplx(3.0, -2.0), cplx(8.0, 4.0)}) {
    const cplx k0 = bessel_k(0, w), k1 = bessel_k(1, w), k2 = bessel_k(2, w);
    EXPECT_LT(std::abs(k2 - (k0 + 2.0 / w * k1)) / std::abs(k2), 1e-12) << w;
  }
}

TEST(Fundamental, ClosedFormsAtMinusOne) {
  const FundamentalSolution g1(1, -1.0), g3(3, -1.0);
  for (double r : {0.01, 0.5, 1.0, 3.0, 10.0, 25.0}) {
    EXPECT_LT(std::abs(g1(r) - 0.5 * std::exp(-r)) / (0.5 * std::exp(-r)), 1e-10);
    const double e3 = std::exp(-r) / (4.0 * kPi * r);
    EXPECT_LT(std::abs(g3(r) - e3) / e3, 1e-10);
  }
  // Two dimensions: K_0(r) / (2 pi), with K_0(1) = 0.42102443824070834.
  EXPECT_NEAR(FundamentalSolution(2, -1.0)(1.0).real(), 0.42102443824070834 / (2.0 * kPi), 1e-13);
}

TEST(Fundamental, HelmholtzAndRecurrenceResiduals) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    const cplx mu(U(rng), U(rng));
    for (int d = 1; d <= 5; ++d) {
      const FundamentalSolution fs(d, mu);
      for (double r : {0.5, 1.0, 2.5, 4.0}) {
        EXPECT_LT(recurrence_residual(fs, r), 1e-6) << "d=" << d << " mu=" << mu << " r=" << r;
        EXPECT_LT(helmholtz_residual(fs, r), 1e-5) << "d=" << d << " mu=" << mu << " r=" << r;
      }
    }
  }
}

TEST(Fundamental, OddDimensionFiniteExpansion) {
  const cplx kappa(0.3, 1.1);
  const auto c1 = odd_dimension_coefficients(1, kappa);
  const auto c3 = odd_dimension_coefficients(3, kappa);
  const auto c5 = odd_dimension_coefficients(5, kappa);
  auto nonzero = [](const std::vector<cplx>& c) {
    return std::count_if(c.begin(), c.end(), [](cplx z) { return z != 0.0; });
  };
  // e^{-r}/2, e^{-r}/(4 pi r), then one more power of 1/r per two dimensions.
  EXPECT_EQ(nonzero(c1), 1);
  EXPECT_EQ(nonzero(c3), 1);
  EXPECT_EQ(nonzero(c5), 2);
  EXPECT_EQ(nonzero(odd_dimension_coefficients(7, kappa)), 3);
  const FundamentalSolution fs(5, kappa * kappa);
  const double r = 1.7;
  cplx s = 0.0;
  for (std::size_t m = 0; m < c5.size(); ++m) s += c5[m] * std::pow(r, -double(m));
  EXPECT_LT(std::abs(std::exp(cplx(0.0, 1.0) * kappa * r) * s - fs(r)) / std::abs(fs(r)), 1e-12);
}

TEST(Fundamental, DominationWithTau) {
  for (const cplx mu : {cplx(1.0, 1.0), cplx(-2.0, 0.5), cplx(4.0, -0.3)}) {
    const FundamentalSolution fs(3, mu);
    const double th = std::arg(mu) < 0 ? std::arg(mu) + 2.0 * kPi : std::arg(mu);
    EXPECT_NEAR(std::sqrt(fs.tau()), std::sqrt(std::abs(mu)) * std::sin(0.5 * th), 1e-13);
    const auto dc = check_domination(fs, 1e-2, 30.0 / std::sqrt(fs.tau()));
    EXPECT_TRUE(dc.holds) << mu;
    EXPECT_GT(dc.samples, 0u);
  }
}
