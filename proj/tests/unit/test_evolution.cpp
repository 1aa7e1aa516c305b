#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mslab/boundstate.hpp"
#include "mslab/evolution.hpp"
#include "mslab/soliton.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Evolution, PlaneWaveIsExact) {
  // u = A e^{i(kx - (k^2 - |A|^2) t)} solves the cubic equation; Strang reproduces it exactly.
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 32, kPi);
  const double A = 0.8, k = 3.0;
  const Field u0 = Field::sample(g, [&](const Point& p) { return A * std::exp(kI * (k * p[0])); });
  Integrator in;
  in.dt = 0.01;
  const Field u = evolve(in, nl, u0, 1.0).final_state;
  const Field exact = std::exp(-kI * ((k * k - A * A) * 1.0)) * u0;
  EXPECT_LT(norm_l2(u - exact) / norm_l2(exact), 1e-12);
  EXPECT_DOUBLE_EQ(u.time(), 1.0);
}

TEST(Evolution, StepsAreEqualized) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const Field u0 = Field::zeros(GridSpec(1, 16, 1.0), 0.2);
  Integrator in;
  in.dt = 0.3;
  std::vector<double> seen;
  const Trajectory tr = evolve(in, nl, u0, 1.2, {Observer{1, [&](const Field& u) { seen.push_back(u.time()); }}});
  EXPECT_EQ(tr.steps, 4u);
  EXPECT_DOUBLE_EQ(tr.step_size, 0.25);
  ASSERT_EQ(seen.size(), 5u);
  EXPECT_DOUBLE_EQ(seen.front(), 0.2);
  EXPECT_DOUBLE_EQ(seen.back(), 1.2);
}

TEST(Evolution, SolitonStaysOnItsOrbit) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 256, 20.0);
  const BoundState b = compute_bound_state(nl, 1.0, 0, g);
  const SolitonParams p{b, 0.3, {0.5}, {-2.0}};
  Integrator in;
  in.dt = 1e-3;
  const Field u = evolve(in, nl, soliton_field(p, g, 0.0), 2.0).final_state;
  EXPECT_LT(norm_h1(u - soliton_field(p, g, 2.0)), 1e-4);
}

TEST(Evolution, ConservationAndOrder) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 256, 20.0);
  const Field u0 = Field::sample(g, [](const Point& p) { return 1.3 / std::cosh(p[0]) * std::exp(kI * 0.2 * p[0]); });
  const Conserved c0 = conserved(nl, u0);
  double drift[2] = {0.0, 0.0};
  for (int h = 0; h < 2; ++h) {
    Integrator in;
    in.dt = h == 0 ? 2e-3 : 1e-3;
    evolve(in, nl, u0, 2.0, {Observer{10, [&](const Field& u) {
                               const Conserved c = conserved(nl, u);
                               EXPECT_NEAR(c.M, c0.M, 1e-11 * c0.M);
                               EXPECT_NEAR(c.P[0], c0.P[0], 1e-10);
                               drift[h] = std::max(drift[h], std::abs(c.E - c0.E));
                             }}});
  }
  EXPECT_NEAR(std::log2(drift[0] / drift[1]), 2.0, 0.2);
}

TEST(Evolution, ForwardBackwardRoundTrip) {
  const auto nl = Nonlinearity::pure_power(5.0, 1);
  const GridSpec g(1, 128, 15.0);
  const Field u0 = Field::sample(g, [](const Point& p) { return std::exp(-p[0] * p[0]) * cplx(1.0, 0.3 * p[0]); });
  Integrator in;
  in.dt = 1e-3;
  const Field u1 = evolve(in, nl, u0, 1.0).final_state;
  Integrator back = in;
  back.direction = Direction::Backward;
  const Field u2 = evolve(back, nl, u1, 0.0).final_state;
  EXPECT_LT(norm_l2(u2 - u0) / norm_l2(u0), 1e-9);
  EXPECT_NEAR(u2.time(), 0.0, 1e-15);
}

TEST(Evolution, BlowUpGuard) {
  // Negative energy cubic data in 2D.
  const auto nl = Nonlinearity::pure_power(3.0, 2);
  const GridSpec g(2, 64, 4.0);
  const Field u0 = Field::sample(g, [](const Point& p) { return 4.0 * std::exp(-(p[0] * p[0] + p[1] * p[1])); });
  Integrator in;
  in.dt = 1e-4;
  in.blowup_factor = 2.0;
  EXPECT_THROW(evolve(in, nl, u0, 2.0), BlowUpError);
}

TEST(Evolution, MomentumOfBoost) {
  const GridSpec g(1, 256, 20.0);
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.0, 0, g);
  const SolitonParams p{b, 0.0, {0.6}, {0.0}};
  const Field u = soliton_field(p, g, 0.0);
  // P = Im int conj(u) grad u = (v/2) M.
  EXPECT_NEAR(momentum(u)[0], 0.3 * mass(u), 1e-10);
}
