#include "mslab/spectral.hpp"

#include <cmath>
#include <numbers>

#include "mslab/error.hpp"
#include "mslab/fft.hpp"

namespace mslab {

namespace {

std::vector<cplx> spectrum_of(const Field& f) {
  auto v = f.to_vector();
  fft::forward(f.grid(), v);
  return v;
}

Field back(const Field& like, std::vector<cplx> v) {
  fft::inverse(like.grid(), v);
  return Field(like.grid(), std::move(v), like.time());
}

}  // namespace

Field laplacian(const Field& f) {
  auto v = spectrum_of(f);
  const auto& k2 = fft::k_squared(f.grid());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= -k2[i];
  return back(f, std::move(v));
}

std::vector<Field> gradient(const Field& f) {
  const auto hat = spectrum_of(f);
  std::vector<Field> out;
  out.reserve(f.grid().dim());
  for (int a = 0; a < f.grid().dim(); ++a) {
    const auto& ka = fft::k_axis(f.grid(), a);
    auto v = hat;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= cplx(0.0, ka[i]);
    out.push_back(back(f, std::move(v)));
  }
  return out;
}

Field divergence(const std::vector<Field>& components) {
  require(!components.empty(), "divergence needs at least one component");
  const auto& g = components.front().grid();
  require(static_cast<int>(components.size()) == g.dim(), "divergence needs d components");
  std::vector<cplx> acc(g.size());
  for (int a = 0; a < g.dim(); ++a) {
    require_same_grid(g, components[a].grid());
    auto v = spectrum_of(components[a]);
    const auto& ka = fft::k_axis(g, a);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += cplx(0.0, ka[i]) * v[i];
  }
  return back(components.front(), std::move(acc));
}

Field apply_multiplier(const Field& f, const std::function<double(double)>& m) {
  auto v = spectrum_of(f);
  const auto& k2 = fft::k_squared(f.grid());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m(k2[i]);
  return back(f, std::move(v));
}

Field spectral_shift(const Field& f, std::span<const double> shift) {
  const auto& g = f.grid();
  require(static_cast<int>(shift.size()) == g.dim(), "shift dimension must equal grid dim");
  auto v = spectrum_of(f);
  for (int a = 0; a < g.dim(); ++a) {
    if (shift[a] == 0.0) continue;
    const auto& ka = fft::k_axis(g, a);
    const auto nyq = -std::numbers::pi / g.dx();
    for (std::size_t i = 0; i < v.size(); ++i) {
      // Nyquist content is split symmetrically so real inputs stay real.
      if (ka[i] == nyq)
        v[i] *= std::cos(ka[i] * shift[a]);
      else
        v[i] *= std::polar(1.0, -ka[i] * shift[a]);
    }
  }
  return back(f, std::move(v));
}

cplx inner_l2(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid());
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s * f.grid().cell_volume();
}

double norm_l2(const Field& f) {
  double s = 0.0;
  for (const auto& z : f.values()) s += std::norm(z);
  return std::sqrt(s * f.grid().cell_volume());
}

double norm_l2_spectral(const Field& f) {
  const auto v = spectrum_of(f);
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s * f.grid().cell_volume() / static_cast<double>(f.size()));
}

double norm_hs(const Field& f, double s) {
  const auto v = spectrum_of(f);
  const auto& k2 = fft::k_squared(f.grid());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::pow(1.0 + k2[i], s) * std::norm(v[i]);
  return std::sqrt(acc * f.grid().cell_volume() / static_cast<double>(f.size()));
}

double norm_h1(const Field& f) {
  const auto v = spectrum_of(f);
  const auto& k2 = fft::k_squared(f.grid());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += (1.0 + k2[i]) * std::norm(v[i]);
  return std::sqrt(acc * f.grid().cell_volume() / static_cast<double>(f.size()));
}

double gradient_norm_sq(const Field& f) {
  const auto v = spectrum_of(f);
  const auto& k2 = fft::k_squared(f.grid());
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += k2[i] * std::norm(v[i]);
  return acc * f.grid().cell_volume() / static_cast<double>(f.size());
}

Field galilean_boost(const Field& f, std::span<const double> v, double t) {
  const auto& g = f.grid();
  require(static_cast<int>(v.size()) == g.dim(), "velocity dimension must equal grid dim");
  double v2 = 0.0;
  for (double c : v) v2 += c * c;
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = g.point(i);
    double phase = -0.25 * v2 * t;
    for (int a = 0; a < g.dim(); ++a) phase += 0.5 * v[a] * x[a];
    out[i] = f[i] * std::polar(1.0, phase);
  }
  return Field(g, std::move(out), f.time());
}

Field dealias_two_thirds(const Field& f) {
  const auto& g = f.grid();
  auto v = spectrum_of(f);
  const double kmax = std::numbers::pi / g.dx();
  const double cut = 2.0 / 3.0 * kmax;
  for (int a = 0; a < g.dim(); ++a) {
    const auto& ka = fft::k_axis(g, a);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (std::abs(ka[i]) > cut) v[i] = 0.0;
  }
  return back(f, std::move(v));
}

}  // namespace mslab
