#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "mslab/boundstate.hpp"
#include "mslab/error.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

// Closed form of the 1D ground state of -phi'' + omega phi - phi^p = 0.
double power_ground_state(double p, double omega, double x) {
  return std::pow(0.5 * (p + 1.0) * omega, 1.0 / (p - 1.0)) /
         std::pow(std::cosh(0.5 * (p - 1.0) * std::sqrt(omega) * x), 2.0 / (p - 1.0));
}

double linf_vs_closed_form(const BoundState& b, double p) {
  double e = 0.0;
  const auto& g = b.profile.grid();
  for (std::size_t i = 0; i < g.size(); ++i)
    e = std::max(e, std::abs(b.profile[i] - power_ground_state(p, b.omega, g.coord(i))));
  return e;
}

}  // namespace

TEST(BoundState, CubicGroundStateMatchesSech) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(1, 512, 20.0));
  EXPECT_LE(linf_vs_closed_form(b, 3.0), 1e-6);
  EXPECT_LE(b.residual_linf, 1e-8);
  EXPECT_EQ(b.node_count, 0);
  // S = E + omega M / 2 with M = 4, E = -2/3 for sqrt2 sech.
  EXPECT_NEAR(b.action, -2.0 / 3.0 + 2.0, 1e-8);
}

TEST(BoundState, FrequencyScaling) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 2.5, 0, GridSpec(1, 512, 20.0));
  EXPECT_LE(linf_vs_closed_form(b, 3.0), 1e-6);
  EXPECT_NEAR(b.profile.max_abs(), std::sqrt(5.0), 1e-8);
}

TEST(BoundState, QuinticAndSepticClosedForms) {
  for (double p : {5.0, 7.0}) {
    const auto nl = Nonlinearity::pure_power(p, 1);
    const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(1, 1024, 30.0));
    EXPECT_LE(linf_vs_closed_form(b, p), 1e-6) << "p=" << p;
    EXPECT_LE(b.residual_linf, 1e-8);
  }
}

TEST(BoundState, TownesProfileCentre) {
  // Shooting oracle for Delta phi - phi + phi^3 = 0 in two dimensions: phi(0) = 2.2062008646.
  const auto nl = Nonlinearity::pure_power(3.0, 2);
  const RadialProfile r = shoot_radial(nl, 1.0, 0, 2);
  EXPECT_NEAR(r.phi0, 2.2062008646, 1e-7);
  const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(2, 128, 16.0));
  EXPECT_NEAR(b.profile.max_abs(), 2.2062008646, 1e-5);
  EXPECT_LE(b.residual_linf, 1e-8);
}

TEST(BoundState, NodeCountsOfExcitedStates) {
  const auto nl = Nonlinearity::pure_power(3.0, 2);
  const BoundState b = compute_bound_state(nl, 1.0, 1, GridSpec(2, 64, 12.0));
  EXPECT_EQ(b.node_count, 1);
  EXPECT_EQ(count_nodes(b.profile), 1);
  EXPECT_LE(b.residual_linf, 1e-8);
}

TEST(BoundState, ResidualAndTailRate) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.5, 0, GridSpec(1, 512, 25.0));
  EXPECT_LT(stationary_residual(nl, b.profile, b.omega).max_abs(), 1e-8);
  EXPECT_NEAR(ray_decay_rate(b.profile, 4.0, 10.0), std::sqrt(1.5), 1e-3);
  EXPECT_NEAR(action(nl, b), b.action, 1e-12);
}

TEST(BoundState, NewtonRejectsZeroGuess) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  EXPECT_THROW(newton_refine(nl, Field::zeros(GridSpec(1, 64, 10.0)), 1.0), Error);
}

TEST(BoundState, WriteReadRoundTrip) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(1, 128, 15.0));
  const auto dir = std::filesystem::temp_directory_path() / "mslab_bs_test";
  std::filesystem::create_directories(dir);
  write_bound_state(dir / "gs", b);
  const BoundState r = read_bound_state(dir / "gs");
  EXPECT_EQ(r.omega, b.omega);
  EXPECT_EQ(r.node_count, b.node_count);
  for (std::size_t i = 0; i < b.profile.size(); ++i) EXPECT_EQ(r.profile[i], b.profile[i]);
  std::filesystem::remove_all(dir);
}
