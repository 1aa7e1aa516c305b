#include "mslab/localized.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mslab/error.hpp"
#include "mslab/evolution.hpp"
#include "mslab/spectral.hpp"

namespace mslab {
namespace {

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double dbump(double x) { return x > 0.0 ? std::exp(-1.0 / x) / (x * x) : 0.0; }

double dot3(const std::vector<double>& a, const Point& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

double speed_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

double smooth_step(double s) {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = bump(0.5 * (1.0 + s)), b = bump(0.5 * (1.0 - s));
  return a / (a + b);
}

double smooth_step_derivative(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double x = 0.5 * (1.0 + s), y = 0.5 * (1.0 - s);
  const double a = bump(x), b = bump(y);
  const double da = 0.5 * dbump(x), db = -0.5 * dbump(y);
  return (da * b - a * db) / ((a + b) * (a + b));
}

CutoffFamily::CutoffFamily(std::vector<double> e1,
                           const std::vector<std::vector<double>>& velocities)
    : e1_(std::move(e1)) {
  require(!velocities.empty(), "cutoff family needs at least one velocity");
  double n2 = 0.0;
  for (double x : e1_) n2 += x * x;
  require(std::abs(n2 - 1.0) < 1e-10, "cutoff direction must be a unit vector");
  for (const auto& v : velocities) {
    require(v.size() == e1_.size(), "velocity dimension mismatch");
    proj_.push_back(std::inner_product(v.begin(), v.end(), e1_.begin(), 0.0));
  }
  std::vector<std::size_t> order(proj_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return proj_[a] < proj_[b]; });
  rank_.resize(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank_[order[r]] = r;
    sorted_.push_back(proj_[order[r]]);
  }
  mid_.assign(sorted_.size(), 0.0);
  for (std::size_t r = 1; r < sorted_.size(); ++r) mid_[r] = 0.5 * (sorted_[r - 1] + sorted_[r]);
}

std::vector<double> CutoffFamily::psi_rank(std::size_t r, const GridSpec& g, double t) const {
  require(t > 0.0, "cutoffs need t > 0");
  require(r < size(), "cutoff rank out of range");
  std::vector<double> out(g.size(), 1.0);
  if (r == 0) return out;
  require(static_cast<int>(e1_.size()) == g.dim(), "cutoff direction dimension mismatch");
  const double st = std::sqrt(t);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = smooth_step((dot3(e1_, g.point(i)) - mid_[r] * t) / st);
  return out;
}

std::vector<double> CutoffFamily::phi(std::size_t j, const GridSpec& g, double t) const {
  const std::size_t r = rank(j);
  auto out = psi_rank(r, g, t);
  if (r + 1 < size()) {
    const auto next = psi_rank(r + 1, g, t);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= next[i];
  }
  return out;
}

LocalQuantities localized_quantities(const CutoffFamily& cut, const Nonlinearity& nl,
                                     const Field& u, std::size_t j, const SolitonParams& pj) {
  const GridSpec& g = u.grid();
  const auto phi = cut.phi(j, g, u.time());
  const auto grad = gradient(u);
  LocalQuantities q;
  q.P.assign(g.dim(), 0.0);
  double kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = phi[i];
    q.M += std::norm(u[i]) * w;
    for (int a = 0; a < g.dim(); ++a) {
      q.P[a] += (grad[a][i] * std::conj(u[i])).imag() * w;
      kin += std::norm(grad[a][i]) * w;
    }
    pot += eval_primitive(nl, std::abs(u[i])) * w;
  }
  const double dv = g.cell_volume();
  q.M *= dv;
  for (auto& x : q.P) x *= dv;
  q.E = 0.5 * kin * dv - pot * dv;
  const auto v = pj.velocity();
  double vp = 0.0;
  for (int a = 0; a < g.dim(); ++a) vp += v[a] * q.P[a];
  q.S = q.E + 0.5 * (pj.omega() + 0.25 * speed_sq(v)) * q.M - 0.5 * vp;
  return q;
}

double localized_hessian(const CutoffFamily& cut, const Nonlinearity& nl, const Field& w,
                         std::size_t j, const SolitonParams& pj) {
  const GridSpec& g = w.grid();
  const double t = w.time();
  const auto phi = cut.phi(j, g, t);
  const Field R = soliton_field(pj, g, t);
  const auto grad = gradient(w);
  const auto v = pj.velocity();
  const double c = pj.omega() + 0.25 * speed_sq(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = std::norm(R[i]);
    const double re = (R[i] * std::conj(w[i])).real();
    double term = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      term += std::norm(grad[a][i]);
      term -= v[a] * (std::conj(w[i]) * grad[a][i]).imag();
    }
    term -= nl.g(s) * std::norm(w[i]) + 2.0 * nl.dg(s) * re * re;
    term += c * std::norm(w[i]);
    acc += term * phi[i];
  }
  return acc * g.cell_volume();
}

double action_functional(const CutoffFamily& cut, const Nonlinearity& nl, const Field& u,
                         const std::vector<SolitonParams>& ps) {
  require(ps.size() == cut.size(), "one soliton per cutoff expected");
  double s = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) s += localized_quantities(cut, nl, u, j, ps[j]).S;
  return s;
}

double action_functional_via_energy(const CutoffFamily& cut, const Nonlinearity& nl,
                                    const Field& u, const std::vector<SolitonParams>& ps) {
  require(ps.size() == cut.size(), "one soliton per cutoff expected");
  double s = energy(nl, u);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const auto q = localized_quantities(cut, nl, u, j, ps[j]);
    const auto v = ps[j].velocity();
    double vp = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a) vp += v[a] * q.P[a];
    s += 0.5 * (ps[j].omega() + 0.25 * speed_sq(v)) * q.M - 0.5 * vp;
  }
  return s;
}

double hessian_functional(const CutoffFamily& cut, const Nonlinearity& nl, const Field& w,
                          const std::vector<SolitonParams>& ps) {
  require(ps.size() == cut.size(), "one soliton per cutoff expected");
  double s = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) s += localized_hessian(cut, nl, w, j, ps[j]);
  return s;
}

double dS_dt_estimate(const std::vector<double>& times, const std::vector<double>& values,
                      double t) {
  require(times.size() == values.size(), "times and values differ in length");
  require(times.size() >= 3, "at least three samples are needed");
  std::vector<std::size_t> idx(times.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  require(t >= times[idx.front()] && t <= times[idx.back()], "t outside the sampled window");
  std::size_t best = 1;
  for (std::size_t k = 1; k + 1 < idx.size(); ++k)
    if (std::abs(times[idx[k]] - t) < std::abs(times[idx[best]] - t)) best = k;
  const double t0 = times[idx[best - 1]], t1 = times[idx[best + 1]];
  require(t1 > t0, "repeated sample times");
  return (values[idx[best + 1]] - values[idx[best - 1]]) / (t1 - t0);
}

}  // namespace mslab
