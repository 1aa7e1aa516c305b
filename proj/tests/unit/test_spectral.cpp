#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mslab/error.hpp"
#include "mslab/fft.hpp"
#include "mslab/snapshot.hpp"
#include "mslab/spectral.hpp"

using namespace mslab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

Field gaussian(const GridSpec& g, double s = 1.0, double x0 = 0.0) {
  return Field::sample(g, [&](const Point& p) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += (p[a] - (a == 0 ? x0 : 0.0)) * (p[a] - (a == 0 ? x0 : 0.0));
    return std::exp(-r2 / (s * s));
  });
}

}  // namespace

TEST(Grid, CoordinatesAndWavenumbers) {
  const GridSpec g(2, 16, 4.0);
  EXPECT_DOUBLE_EQ(g.dx(), 0.5);
  EXPECT_EQ(g.size(), 256u);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 0.25);
  EXPECT_DOUBLE_EQ(g.coord(0), -4.0);
  EXPECT_DOUBLE_EQ(g.coord(8), 0.0);
  EXPECT_DOUBLE_EQ(g.wavenumber(1), kPi / 4.0);
  EXPECT_DOUBLE_EQ(g.wavenumber(8), -8.0 * kPi / 4.0);
  EXPECT_DOUBLE_EQ(g.wavenumber(15), -kPi / 4.0);
  const auto p = g.point(17);
  EXPECT_DOUBLE_EQ(p[0], -3.5);
  EXPECT_DOUBLE_EQ(p[1], -3.5);
}

TEST(Grid, MismatchIsRejected) {
  const Field a = Field::zeros(GridSpec(1, 16, 2.0));
  const Field b = Field::zeros(GridSpec(1, 32, 2.0));
  EXPECT_THROW(inner_l2(a, b), Error);
}

TEST(Fft, RoundTrip) {
  const GridSpec g(3, 8, 1.0);
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(std::sin(0.3 * i), std::cos(1.7 * i));
  auto w = v;
  fft::forward(g, w);
  fft::inverse(g, w);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(w[i] - v[i]), 0.0, 1e-14);
}

TEST(Spectral, LaplacianOfPlaneWaveIsExact) {
  const GridSpec g(1, 64, 5.0);
  const double k = 7.0 * kPi / 5.0;
  const Field u = Field::sample(g, [&](const Point& p) { return std::exp(kI * (k * p[0])); });
  EXPECT_LT(norm_l2(laplacian(u) + (k * k) * u), 1e-10);
  const auto grad = gradient(u);
  EXPECT_LT(norm_l2(grad[0] - (kI * k) * u), 1e-11);
  EXPECT_LT(norm_l2(divergence(grad) - laplacian(u)), 1e-10);
}

TEST(Spectral, ShiftMatchesTranslatedGaussian) {
  const GridSpec g(1, 256, 20.0);
  const double s[1] = {1.37};
  EXPECT_LT(norm_l2(spectral_shift(gaussian(g), s) - gaussian(g, 1.0, 1.37)), 1e-12);
  const double back[1] = {-1.37};
  EXPECT_LT(norm_l2(spectral_shift(spectral_shift(gaussian(g), s), back) - gaussian(g)), 1e-13);
}

TEST(Spectral, ParsevalAndSobolevNorms) {
  const GridSpec g(2, 32, 6.0);
  const Field u = gaussian(g, 1.3);
  EXPECT_NEAR(norm_l2(u), norm_l2_spectral(u), 1e-13);
  // ||e^{-|x|^2/s^2}||^2 = pi s^2 / 2 in 2D.
  EXPECT_NEAR(norm_l2(u) * norm_l2(u), kPi * 1.69 / 2.0, 1e-10);
  const GridSpec g1(1, 64, kPi);
  const Field w = Field::sample(g1, [](const Point& p) { return std::exp(kI * (3.0 * p[0])); });
  EXPECT_NEAR(norm_h1(w) * norm_h1(w), 10.0 * 2.0 * kPi, 1e-10);
  EXPECT_NEAR(gradient_norm_sq(w), 9.0 * 2.0 * kPi, 1e-10);
  EXPECT_NEAR(norm_hs(w, 1.0), norm_h1(w), 1e-12);
}

TEST(Spectral, MultiplierAndDealias) {
  const GridSpec g(1, 32, kPi);
  const Field lo = Field::sample(g, [](const Point& p) { return std::cos(2.0 * p[0]); });
  const Field hi = Field::sample(g, [](const Point& p) { return std::cos(14.0 * p[0]); });
  EXPECT_LT(norm_l2(dealias_two_thirds(lo + hi) - lo), 1e-12);
  const Field m = apply_multiplier(lo, [](double k2) { return 1.0 / (1.0 + k2); });
  EXPECT_LT(norm_l2(m - 0.2 * lo), 1e-13);
}

TEST(Spectral, GalileanBoostPhase) {
  const GridSpec g(1, 64, 4.0);
  const Field u = gaussian(g);
  const double v[1] = {0.8};
  const Field b = galilean_boost(u, v, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double phase = 0.4 * g.coord(i) - 0.25 * 0.64 * 0.5;
    EXPECT_NEAR(std::abs(b[i] - u[i] * std::polar(1.0, phase)), 0.0, 1e-15);
  }
  EXPECT_NEAR(norm_l2(b), norm_l2(u), 1e-14);
}

TEST(Field, ArithmeticKeepsTime) {
  const GridSpec g(1, 8, 1.0);
  const Field a = Field::sample(g, [](const Point& p) { return p[0]; }, 0.25);
  const Field b = (2.0 * a - a).with_time(0.5);
  EXPECT_DOUBLE_EQ(a.time(), 0.25);
  EXPECT_DOUBLE_EQ(b.time(), 0.5);
  EXPECT_LT(norm_l2(b - a), 1e-15);
  const Field sq = pointwise_product(a, a.conj());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(sq[i].real(), std::norm(a[i]));
}

TEST(Snapshot, RoundTripIsBitwise) {
  const GridSpec g(2, 8, 3.0);
  const Field u = Field::sample(g, [](const Point& p) { return cplx(std::sin(p[0]), std::exp(p[1])); }, 1.75);
  std::stringstream ss;
  write_snapshot(ss, u);
  write_snapshot(ss, u.conj());
  const Field r = read_snapshot(ss);
  const Field c = read_snapshot(ss);
  EXPECT_EQ(r.grid(), g);
  EXPECT_EQ(r.time(), 1.75);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(r[i], u[i]);
    EXPECT_EQ(c[i], std::conj(u[i]));
  }
}

TEST(Snapshot, BadMagicThrows) {
  std::stringstream ss("XXXXgarbage");
  EXPECT_THROW(read_snapshot(ss), Error);
}
