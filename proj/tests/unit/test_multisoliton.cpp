#include <gtest/gtest.h>

#include <cmath>

#include "mslab/boundstate.hpp"
#include "mslab/evolution.hpp"
#include "mslab/multisoliton.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

const Nonlinearity kCubic = Nonlinearity::pure_power(3.0, 1);

const BoundState& state() {
  static const BoundState b = compute_bound_state(kCubic, 1.0, 0, GridSpec(1, 256, 20.0));
  return b;
}

}  // namespace

TEST(Ensemble, Constants) {
  const auto cfg = EnsembleConfig::make({{state(), 0.0, {-1.0}, {-8.0}}, {state(), 0.0, {0.8}, {8.0}}});
  EXPECT_DOUBLE_EQ(cfg.omega_star, 0.5);
  EXPECT_DOUBLE_EQ(cfg.v_star, 0.2);
  EXPECT_DOUBLE_EQ(cfg.alpha, 1.0);
  EXPECT_NEAR(uniform_bound_rate(cfg), 0.2 * std::sqrt(0.5), 1e-15);
  auto broken = cfg;
  broken.v_star *= 2.0;
  EXPECT_ANY_THROW(validate(broken));
  EXPECT_ANY_THROW(EnsembleConfig::make({{state(), 0.0, {1.0}, {}}, {state(), 0.0, {1.0}, {5.0}}}));
  EXPECT_ANY_THROW(EnsembleConfig::make({}));
}

TEST(Ensemble, SingleSolitonMatchesDirectRun) {
  const SolitonParams p{state(), 0.3, {0.4}, {-1.0}};
  Integrator in;
  in.dt = 2e-3;
  BackwardOptions opt;
  opt.stride = 25;
  const auto r = backward_construct(EnsembleConfig::make({p}), kCubic, in, 3.0, 1.0, opt);
  Integrator back = in;
  back.direction = Direction::Backward;
  const Field direct =
      evolve(back, kCubic, soliton_field(p, state().profile.grid(), 3.0).with_time(3.0), 1.0).final_state;
  ASSERT_EQ(r.final_state.size(), direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) ASSERT_EQ(r.final_state[i], direct[i]) << i;
  EXPECT_EQ(r.samples.front().t, 3.0);
  EXPECT_DOUBLE_EQ(r.samples.back().t, 1.0);
  EXPECT_LT(r.samples.front().error_h1, 1e-14);
  for (const auto& s : r.samples) EXPECT_LT(s.error_h1, 1e-4);
}

TEST(Ensemble, BoostRoundTrip) {
  const SolitonParams p{state(), 0.3, {0.4}, {-1.0}};
  const GridSpec& g = state().profile.grid();
  const Field z = Field::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0]) * cplx(1.0, x[0]); });
  const Field back = unboost_field(p, boost_field(p, z, 1.5), 1.5);
  EXPECT_LT(norm_l2(back - z), 1e-12);
  EXPECT_LT(norm_l2(boost_field(p, state().profile, 2.0) - soliton_field(p, g, 2.0)), 1e-12);
}

TEST(Coercivity, CubicSpectrum) {
  const GridSpec g(1, 128, 20.0);
  const BoundState b = compute_bound_state(kCubic, 1.0, 0, g);
  const CoercivityData c = coercivity_data(kCubic, {b, 0.0, {}, {}}, 0.5);
  EXPECT_EQ(c.negative_plus, 1);
  EXPECT_EQ(c.negative_minus, 0);
  EXPECT_EQ(c.nu0, 3);
  ASSERT_EQ(c.eigenvalues.size(), 3u);
  EXPECT_NEAR(c.eigenvalues[0], -3.0, 1e-6);
  EXPECT_NEAR(c.eigenvalues[1], 0.0, 1e-6);
  EXPECT_GT(c.gap, 0.9);
  EXPECT_LT(c.gap, 1.1);
  EXPECT_GT(c.K0, 0.0);
  for (const auto& d : c.directions) EXPECT_NEAR(norm_l2(d), 1.0, 1e-10);
}

TEST(Coercivity, FormIsBoostInvariant) {
  const BoundState& b = state();
  const SolitonParams p{b, 0.2, {0.5}, {1.0}};
  const GridSpec& g = b.profile.grid();
  const Field z = Field::sample(g, [](const Point& x) { return std::exp(-0.5 * x[0] * x[0]) * cplx(0.3, x[0]); });
  const double rest = coercivity_form_rest(kCubic, b, z);
  EXPECT_NEAR(coercivity_form(kCubic, p, 1.2, boost_field(p, z, 1.2)), rest, 1e-9 * std::abs(rest));
}

TEST(FamilyDistance, RecoversModulation) {
  const GridSpec& g = state().profile.grid();
  const double y = 1.3;
  const Field u = std::exp(cplx(0.0, 0.7)) * spectral_shift(state().profile, std::vector<double>{y});
  const FamilyDistance d = family_distance(u, state());
  EXPECT_LT(d.dist, 1e-8);
  EXPECT_NEAR(d.y[0], y, 1e-6);
  EXPECT_NEAR(d.theta, 0.7, 1e-6);
  EXPECT_NEAR(distance_at(u, state().profile, d.y, d.theta), d.dist, 1e-12);
  (void)g;
}

TEST(FamilyDistance, InvariantUnderSymmetries) {
  const GridSpec& g = state().profile.grid();
  const Field bump = Field::sample(g, [](const Point& x) { return 0.2 * std::exp(-(x[0] - 2.0) * (x[0] - 2.0)); });
  const Field u = state().profile + bump;
  const double d0 = family_distance(u, state()).dist;
  EXPECT_GT(d0, 1e-3);
  const Field moved = std::exp(cplx(0.0, -1.1)) * spectral_shift(u, std::vector<double>{-3.7});
  EXPECT_NEAR(family_distance(moved, state()).dist, d0, 1e-10);
  EXPECT_LE(d0, norm_l2(bump) + 1e-12);
}

TEST(FamilyDistance, BallModeConfinesShift) {
  const Field u = spectral_shift(state().profile, std::vector<double>{6.0});
  const FamilyDistance d = family_distance(u, state(), DistanceMode::ball(2.0));
  EXPECT_LE(std::abs(d.y[0]), 2.0 + 1e-12);
  EXPECT_GT(d.dist, 0.1);
}

TEST(FamilyDistance, MultiFamily) {
  const GridSpec g(1, 512, 40.0);
  const BoundState b = compute_bound_state(kCubic, 1.0, 0, g);
  const std::vector<SolitonParams> ps{{b, 0.0, {-1.0}, {0.0}}, {b, 0.9, {1.0}, {0.5}}};
  const double t = 10.0;
  const Field u = soliton_sum(ps, g, t);
  const MultiFamilyDistance m = multi_family_distance(u, ps, t, 3.0);
  EXPECT_LT(m.dist, 1e-5);
  ASSERT_EQ(m.members.size(), 2u);
  EXPECT_NEAR(m.members[0].y[0], -10.0, 1e-4);
  EXPECT_NEAR(m.members[1].y[0], 10.5, 1e-4);
}
