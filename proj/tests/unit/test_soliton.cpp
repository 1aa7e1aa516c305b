#include <gtest/gtest.h>

#include <cmath>

#include "mslab/boundstate.hpp"
#include "mslab/soliton.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

const BoundState& cubic_state() {
  static const BoundState b =
      compute_bound_state(Nonlinearity::pure_power(3.0, 1), 1.0, 0, GridSpec(1, 256, 20.0));
  return b;
}

double linf(const Field& f) { return f.max_abs(); }

}  // namespace

TEST(Soliton, ResidualIsSmall) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  // v/2 on the lattice of the box keeps the phase periodic.
  const SolitonParams p{cubic_state(), 0.4, {0.2 * M_PI}, {-3.0}};
  for (double t : {0.0, 1.3, 4.0})
    EXPECT_LT(linf(soliton_residual(nl, p, cubic_state().profile.grid(), t)), 1e-8) << t;
}

TEST(Soliton, MatchesClosedForm) {
  const GridSpec& g = cubic_state().profile.grid();
  const SolitonParams p{cubic_state(), 0.25, {0.5}, {1.0}};
  const double t = 2.0;
  const Field u = soliton_field(p, g, t);
  const cplx I(0.0, 1.0);
  const Field exact = Field::sample(g, [&](const Point& x) {
    const double y = x[0] - 0.5 * t - 1.0;
    return std::sqrt(2.0) / std::cosh(y) *
           std::exp(I * (0.25 * x[0] - 0.0625 * t + t + 0.25));
  });
  // The periodic image differs from the line profile by Phi(2 l - 2) ~ 4e-8.
  EXPECT_LT(linf(u - exact), 1e-7);
}

TEST(Soliton, CentreAndDefaults) {
  const SolitonParams p{cubic_state(), 0.0, {}, {}};
  EXPECT_EQ(p.velocity(), std::vector<double>{0.0});
  EXPECT_EQ(p.position(), std::vector<double>{0.0});
  const SolitonParams q{cubic_state(), 0.0, {2.0}, {1.0}};
  EXPECT_DOUBLE_EQ(q.center(1.5)[0], 4.0);
  EXPECT_NO_THROW(validate(q));
  const SolitonParams bad{cubic_state(), 0.0, {1.0, 2.0}, {}};
  EXPECT_ANY_THROW(validate(bad));
}

TEST(Soliton, BoostedProfileDropsPhase) {
  const GridSpec& g = cubic_state().profile.grid();
  const SolitonParams p{cubic_state(), 0.8, {0.3}, {0.0}};
  const Field a = soliton_field(p, g, 1.0);
  const Field b = boosted_profile(p, g, 1.0);
  EXPECT_LT(linf(a - std::exp(cplx(0.0, 1.8)) * b), 1e-12);
}

TEST(Soliton, SumIsLinear) {
  const GridSpec& g = cubic_state().profile.grid();
  const SolitonParams p{cubic_state(), 0.0, {1.0}, {-5.0}};
  const SolitonParams q{cubic_state(), 1.0, {-1.0}, {5.0}};
  const Field s = soliton_sum({p, q}, g, 0.5);
  EXPECT_LT(linf(s - soliton_field(p, g, 0.5) - soliton_field(q, g, 0.5)), 1e-14);
}
