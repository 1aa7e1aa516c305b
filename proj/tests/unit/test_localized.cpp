#include <gtest/gtest.h>

#include <cmath>

#include "mslab/boundstate.hpp"
#include "mslab/evolution.hpp"
#include "mslab/localized.hpp"
#include "mslab/soliton.hpp"

using namespace mslab;

TEST(Localized, SmoothStep) {
  EXPECT_EQ(smooth_step(-1.0), 0.0);
  EXPECT_EQ(smooth_step(-3.0), 0.0);
  EXPECT_EQ(smooth_step(1.0), 1.0);
  EXPECT_EQ(smooth_step(2.0), 1.0);
  EXPECT_NEAR(smooth_step(0.0), 0.5, 1e-14);
  double prev = 0.0;
  for (double s = -0.99; s < 1.0; s += 0.01) {
    const double y = smooth_step(s);
    EXPECT_GE(y, prev);
    EXPECT_NEAR(smooth_step(-s), 1.0 - y, 1e-12) << s;
    const double fd = (smooth_step(s + 1e-6) - smooth_step(s - 1e-6)) / 2e-6;
    EXPECT_NEAR(smooth_step_derivative(s), fd, 1e-5) << s;
    prev = y;
  }
}

TEST(Localized, PartitionOfUnity) {
  const GridSpec g(2, 32, 10.0);
  const CutoffFamily cut({1.0, 0.0}, {{1.0, 0.0}, {-1.0, 0.5}, {0.2, 0.0}});
  EXPECT_EQ(cut.size(), 3u);
  EXPECT_EQ(cut.sorted_speeds(), (std::vector<double>{-1.0, 0.2, 1.0}));
  EXPECT_EQ(cut.rank(0), 2u);
  EXPECT_EQ(cut.rank(1), 0u);
  EXPECT_NEAR(cut.midpoints()[1], -0.4, 1e-15);
  const auto psi0 = cut.psi_rank(0, g, 1.0);
  for (double x : psi0) EXPECT_EQ(x, 1.0);
  std::vector<double> sum(g.size(), 0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto phi = cut.phi(j, g, 2.0);
    for (std::size_t i = 0; i < sum.size(); ++i) {
      EXPECT_GE(phi[i], -1e-15);
      sum[i] += phi[i];
    }
  }
  for (double s : sum) EXPECT_NEAR(s, 1.0, 1e-14);
}

TEST(Localized, MassesAddUp) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 512, 40.0);
  const BoundState b = compute_bound_state(nl, 1.0, 0, g);
  const std::vector<SolitonParams> ps{{b, 0.0, {-1.0}, {0.0}}, {b, 0.5, {1.0}, {0.0}}};
  const CutoffFamily cut({1.0}, {{-1.0}, {1.0}});
  const double t = 12.0;
  const Field u = soliton_sum(ps, g, t);
  double local = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const LocalQuantities q = localized_quantities(cut, nl, u, j, ps[j]);
    EXPECT_NEAR(q.M, mass(soliton_field(ps[j], g, t)), 1e-6);
    local += q.M;
  }
  EXPECT_NEAR(local, mass(u), 1e-12);
  EXPECT_NEAR(action_functional(cut, nl, u, ps), action_functional_via_energy(cut, nl, u, ps),
              1e-6);
}

TEST(Localized, CentralDifference) {
  const std::vector<double> t{0.0, 0.5, 1.0, 1.5};
  const std::vector<double> y{0.0, 0.25, 1.0, 2.25};
  EXPECT_NEAR(dS_dt_estimate(t, y, 1.0), 2.0, 1e-14);
  EXPECT_NEAR(dS_dt_estimate(t, y, 0.6), 1.0, 1e-14);
}
