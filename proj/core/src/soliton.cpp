#include "mslab/soliton.hpp"

#include <cmath>
#include <sstream>

#include "mslab/error.hpp"
#include "mslab/spectral.hpp"

namespace mslab {
namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<double> padded(const std::vector<double>& v, int dim) {
  if (v.empty()) return std::vector<double>(dim, 0.0);
  return v;
}

double dot_point(const std::vector<double>& v, const Point& x) {
  double s = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) s += v[a] * x[a];
  return s;
}

double norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

std::vector<double> SolitonParams::velocity() const { return padded(v, dim()); }
std::vector<double> SolitonParams::position() const { return padded(x0, dim()); }

std::vector<double> SolitonParams::center(double t) const {
  auto c = position();
  const auto vel = velocity();
  for (std::size_t a = 0; a < c.size(); ++a) c[a] += vel[a] * t;
  return c;
}

void validate(const SolitonParams& p) {
  require(p.state.omega > 0.0, "soliton frequency must be positive");
  const std::size_t d = static_cast<std::size_t>(p.dim());
  require(p.v.empty() || p.v.size() == d, "velocity dimension does not match the grid");
  require(p.x0.empty() || p.x0.size() == d, "position dimension does not match the grid");
}

Field boosted_profile(const SolitonParams& p, const GridSpec& grid, double t) {
  validate(p);
  require_same_grid(grid, p.state.profile.grid());
  const auto c = p.center(t);
  const auto vel = p.velocity();
  const Field shifted = spectral_shift(p.state.profile, c);
  const double vv = norm_sq(vel);
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double eta = 0.5 * dot_point(vel, grid.point(i)) - 0.25 * vv * t;
    out[i] = shifted[i] * std::exp(kI * eta);
  }
  return Field(grid, std::move(out), t);
}

Field soliton_field(const SolitonParams& p, const GridSpec& grid, double t,
                    const WarningSink& warn) {
  Field b = boosted_profile(p, grid, t);
  if (warn) {
    const auto c = p.center(t);
    const double margin = 6.0 / std::sqrt(p.state.omega);
    for (std::size_t a = 0; a < c.size(); ++a)
      if (std::abs(c[a]) > grid.half_length() - margin) {
        std::ostringstream os;
        os << "soliton centre " << c[a] << " on axis " << a << " at t=" << t
           << " is outside the wrap window";
        warn(os.str());
        break;
      }
  }
  b *= std::exp(kI * (p.state.omega * t + p.gamma));
  return b;
}

Field soliton_sum(const std::vector<SolitonParams>& ps, const GridSpec& grid, double t,
                  const WarningSink& warn) {
  Field out = Field::zeros(grid, t);
  for (const auto& p : ps) out += soliton_field(p, grid, t, warn);
  return out;
}

Field soliton_residual(const Nonlinearity& nl, const SolitonParams& p, const GridSpec& grid,
                       double t) {
  const Field u = soliton_field(p, grid, t);
  const auto vel = p.velocity();
  const Field shifted = spectral_shift(p.state.profile, p.center(t));
  const auto grad = gradient(shifted);
  Field drift = Field::zeros(grid, t);
  for (std::size_t a = 0; a < vel.size(); ++a) drift += (-vel[a]) * grad[a];
  std::vector<cplx> phase(grid.size());
  const double vv = norm_sq(vel);
  for (std::size_t i = 0; i < phase.size(); ++i)
    phase[i] = std::exp(kI * (0.5 * dot_point(vel, grid.point(i)) - 0.25 * vv * t +
                              p.state.omega * t + p.gamma));
  const Field ut = pointwise_product(drift, Field(grid, phase, t)) +
                   (kI * (p.state.omega - 0.25 * vv)) * u;
  return kI * ut + laplacian(u) + apply_f(nl, u);
}

}  // namespace mslab
