#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "mslab/boundstate.hpp"
#include "mslab/linearization.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

constexpr cplx kI{0.0, 1.0};

struct Septic {
  Nonlinearity nl = Nonlinearity::pure_power(7.0, 1);
  BoundState b;
  BlockOperator op;
  Spectrum spec;

  Septic()
      : b(compute_bound_state(nl, 1.0, 0, GridSpec(1, 512, 30.0))),
        op(assemble(nl, b)),
        spec([&] {
          SpectrumOptions so;
          so.all_residuals = false;
          so.mode = SpectrumOptions::Mode::Dense;
          return spectrum(op, 0, so);
        }()) {}
};

const Septic& septic() {
  static const Septic s;
  return s;
}

C2Field smooth_pair(const GridSpec& g) {
  return {Field::sample(g, [](const Point& p) { return std::exp(-p[0] * p[0]) * cplx(1.0, p[0]); }),
          Field::sample(g, [](const Point& p) { return std::exp(-0.5 * p[0] * p[0]) * cplx(p[0] * p[0], -0.3); })};
}

}  // namespace

TEST(Linearization, PackingRoundTrips) {
  const GridSpec g(1, 32, 4.0);
  const Field a = Field::sample(g, [](const Point& p) { return std::sin(p[0]); });
  const Field b = Field::sample(g, [](const Point& p) { return std::cos(p[0]); });
  const auto [ra, rb] = split_real_pair(pack_real_pair(a, b));
  EXPECT_LT(norm_l2(ra - a) + norm_l2(rb - b), 1e-15);
  const Field C = pack_real_pair(a, b), D = pack_real_pair(b, -1.0 * a);
  const auto [rc, rd] = decomplexify(complexify(C, D));
  EXPECT_LT(norm_l2(rc - C) + norm_l2(rd - D), 1e-14);
  const C2Field z = smooth_pair(g);
  const C2Field w = apply_P_inverse(apply_P(z));
  EXPECT_LT(norm_l2(w - z), 1e-14);
}

TEST(Linearization, DenseMatchesApply) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(1, 32, 8.0));
  const BlockOperator op = assemble(nl, b);
  const C2Field z = smooth_pair(b.profile.grid());
  Eigen::VectorXcd x(64);
  for (std::size_t i = 0; i < 32; ++i) {
    x[i] = z.plus[i];
    x[32 + i] = z.minus[i];
  }
  const Eigen::VectorXcd y = op.dense() * x;
  const C2Field Lz = op.apply(z);
  double e = 0.0;
  for (std::size_t i = 0; i < 32; ++i) e = std::max({e, std::abs(y[i] - Lz.plus[i]), std::abs(y[32 + i] - Lz.minus[i])});
  EXPECT_LT(e, 1e-10);
  EXPECT_LT((op.apply_flat(x) - y).norm(), 1e-10);
}

TEST(Linearization, GaugeAndTranslationKernel) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(1, 256, 20.0));
  const BlockOperator op = assemble(nl, b);
  // L(i Phi) = 0 and L(grad Phi) = 0 for the packed real form.
  const Field gauge = kI * b.profile;
  const Field trans = gradient(b.profile)[0];
  EXPECT_LT(norm_l2(op.apply_packed(gauge)) / norm_l2(gauge), 1e-9);
  EXPECT_LT(norm_l2(op.apply_packed(trans)) / norm_l2(trans), 1e-9);
}

TEST(Linearization, SepticUnstableEigenvalue) {
  // Oracle: fourth-order finite differences for [[0, L-], [-L+, 0]] on [-30, 30], Richardson
  // extrapolated, rho = 2.9050883779.
  const auto& s = septic();
  EXPECT_NEAR(s.spec.rho, 2.9050883779, 5e-7);
  EXPECT_NEAR(s.spec.theta, 0.0, 1e-12);
  EXPECT_LE(s.spec.Z_residual, 1e-9);
  EXPECT_NEAR(norm_l2(s.spec.Z), 1.0, 1e-12);
}

TEST(Linearization, SpectrumClosedUnderReflections) {
  const auto& ev = septic().spec.eigenvalues;
  double worst = 0.0;
  for (const cplx mu : ev)
    for (const cplx t : {-mu, std::conj(mu)}) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx nu : ev) best = std::min(best, std::abs(nu - t));
      worst = std::max(worst, best);
    }
  EXPECT_LE(worst, 1e-8);
  for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_GE(ev[i - 1].real(), ev[i].real() - 1e-12);
}

TEST(Linearization, ResolventInvertsShiftedOperator) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const BoundState b = compute_bound_state(nl, 1.0, 0, GridSpec(1, 128, 15.0));
  const BlockOperator op = assemble(nl, b);
  const C2Field A = smooth_pair(b.profile.grid());
  for (const cplx mu : {cplx(2.0, 0.5), cplx(-1.0, 3.0)}) {
    const C2Field X = resolvent_solve(op, mu, A);
    const C2Field r = op.apply(X) - mu * X - A;
    EXPECT_LT(norm_l2(r) / norm_l2(A), 1e-9);
  }
  ResolventOptions it;
  it.dense_limit = 0;
  const C2Field X = resolvent_solve(op, cplx(2.0, 0.5), A, it);
  EXPECT_LT(norm_l2(op.apply(X) - cplx(2.0, 0.5) * X - A) / norm_l2(A), 1e-9);
}

TEST(Linearization, NormalizeModeGauge) {
  const C2Field z = normalize_mode(cplx(0.0, 3.0) * smooth_pair(GridSpec(1, 64, 6.0)));
  EXPECT_NEAR(norm_l2(z), 1.0, 1e-14);
  double best = 0.0;
  cplx at;
  for (const Field* f : {&z.plus, &z.minus})
    for (std::size_t i = 0; i < f->size(); ++i)
      if (std::abs((*f)[i]) > best) {
        best = std::abs((*f)[i]);
        at = (*f)[i];
      }
  EXPECT_NEAR(at.imag(), 0.0, 1e-14);
  EXPECT_GT(at.real(), 0.0);
}

TEST(Linearization, ModeFileRoundTrip) {
  const C2Field z = smooth_pair(GridSpec(1, 16, 2.0));
  const auto path = std::filesystem::temp_directory_path() / "mslab_mode_test.nlsf";
  write_mode(path, z);
  const C2Field r = read_mode(path);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_EQ(r.plus[i], z.plus[i]);
    EXPECT_EQ(r.minus[i], z.minus[i]);
  }
  std::filesystem::remove(path);
}
