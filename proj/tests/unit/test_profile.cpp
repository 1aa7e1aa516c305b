#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "mslab/boundstate.hpp"
#include "mslab/fit.hpp"
#include "mslab/linearization.hpp"
#include "mslab/profile.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

constexpr cplx kI{0.0, 1.0};

// Coarse septic ground state: enough for structural checks, fast to diagonalize.
struct Coarse {
  Nonlinearity nl = Nonlinearity::pure_power(7.0, 1);
  BoundState b;
  BlockOperator op;
  Spectrum spec;

  Coarse()
      : b(compute_bound_state(nl, 1.0, 0, GridSpec(1, 256, 20.0))),
        op(assemble(nl, b)),
        spec([&] {
          SpectrumOptions so;
          so.all_residuals = false;
          so.mode = SpectrumOptions::Mode::Dense;
          return spectrum(op, 0, so);
        }()) {}
};

const Coarse& coarse() {
  static const Coarse c;
  return c;
}

}  // namespace

TEST(Profile, TaylorRemainderOrder) {
  const auto& c = coarse();
  const GridSpec& g = c.b.profile.grid();
  const Field v = Field::sample(g, [](const Point& p) { return std::exp(-p[0] * p[0]) * cplx(1.0, -0.7); });
  for (int N : {2, 3, 4}) {
    const TaylorTable t = taylor_coeffs(c.nl, c.b, N);
    const double e1 = norm_l2(nonlinear_remainder(c.nl, c.b.profile, 1e-2 * v) - t.evaluate(1e-2 * v));
    const double e2 = norm_l2(nonlinear_remainder(c.nl, c.b.profile, 5e-3 * v) - t.evaluate(5e-3 * v));
    EXPECT_NEAR(std::log2(e1 / e2), N + 1, 0.1) << "N=" << N;
  }
}

TEST(Profile, TaylorCoefficientsOfCubic) {
  // f(z) = |z|^2 z: M(v) = i[2 Phi |v|^2 + Phi v^2 + |v|^2 v] for real Phi.
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(1, 64, 10.0));
  const TaylorTable t = taylor_coeffs(nl, b, 3);
  const Field v = Field::sample(b.profile.grid(), [](const Point& p) { return cplx(0.3 * p[0], 0.2); });
  const Field direct = nonlinear_remainder(nl, b.profile, v);
  EXPECT_LT(norm_l2(t.evaluate(v) - direct), 1e-13);
}

TEST(Profile, TrigPolyEvaluation) {
  const GridSpec g(1, 8, 1.0);
  TrigPoly p;
  p.decay_order = 2;
  const Field one = Field::sample(g, [](const Point&) { return 1.0; });
  p.terms.emplace(0, std::pair{one, Field::zeros(g)});
  p.terms.emplace(1, std::pair{Field::zeros(g), 2.0 * one});
  const double t = 0.3, rho = 1.5, th = 2.0;
  const Field e = p.evaluate(t, rho, th);
  EXPECT_NEAR(e[3].real(), std::exp(-2.0 * rho * t) * (1.0 + 2.0 * std::sin(th * t)), 1e-15);
}

TEST(Profile, SeedIsAmplitudeTimesY) {
  const auto& c = coarse();
  const Profile p = seed_profile(c.spec, 1.0, 3, 0.4);
  for (double t : {0.0, 0.7, 2.0}) EXPECT_LT(norm_l2(p.W(t) - 0.4 * build_Y(c.spec, t)), 1e-14);
}

TEST(Profile, LevelsSolveTheirSystems) {
  const auto& c = coarse();
  const Profile p = build_profile(c.nl, c.b, c.op, c.spec, 3, 1.0);
  ASSERT_EQ(p.levels(), 3);
  for (int k = 2; k <= 3; ++k) EXPECT_LE(p.level_residual[k], 1e-8) << "k=" << k;
  ExpansionStats st;
  expand_nonlinear(p, taylor_coeffs(c.nl, c.b, 3), 3, &st);
  EXPECT_LE(st.worst_frequency_excess, 0);
  EXPECT_GT(st.monomials, 0u);
}

TEST(Profile, TimeDerivativeAndRotatingFrame) {
  const auto& c = coarse();
  const Profile p = build_profile(c.nl, c.b, c.op, c.spec, 2, 0.5);
  const double t = 1.1, h = 1e-5;
  EXPECT_LT(norm_l2(p.dW_dt(t) - (1.0 / (2 * h)) * (p.W(t + h) - p.W(t - h))), 1e-8);
  EXPECT_LT(norm_l2(p.V(t) - std::exp(kI * t) * p.W(t)), 1e-15);
}

TEST(Profile, ResidualDecaysFasterWithOrder) {
  const auto& c = coarse();
  const double rho = c.spec.rho;
  std::vector<double> ts;
  for (int i = 0; i <= 10; ++i) ts.push_back((2.0 + 0.3 * i) / rho);
  double prev = 0.0;
  for (int N0 = 1; N0 <= 3; ++N0) {
    const Profile p = build_profile(c.nl, c.b, c.op, c.spec, N0, 1.0);
    std::vector<double> e;
    for (double t : ts) e.push_back(norm_l2(residual_err(p, c.b, c.nl, t)));
    const double rate = fit_decay_rate(ts, e).rate / rho;
    EXPECT_GE(rate, 0.9 * (N0 + 1)) << "N0=" << N0;
    EXPECT_GT(rate, prev);
    prev = rate;
  }
}

TEST(Profile, DirectoryRoundTrip) {
  const auto& c = coarse();
  const Profile p = build_profile(c.nl, c.b, c.op, c.spec, 2, 0.3);
  const auto dir = std::filesystem::temp_directory_path() / "mslab_profile_test";
  std::filesystem::remove_all(dir);
  write_profile(dir, p);
  const Profile r = read_profile(dir);
  EXPECT_EQ(r.order, p.order);
  EXPECT_EQ(r.a, p.a);
  EXPECT_EQ(r.rho, p.rho);
  for (double t : {0.5, 1.5}) {
    const Field a = p.W(t), b = r.W(t);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  }
  std::filesystem::remove_all(dir);
}
