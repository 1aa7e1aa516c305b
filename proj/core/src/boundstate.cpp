#include "mslab/boundstate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>

#include "mslab/error.hpp"
#include "mslab/fft.hpp"
#include "mslab/fit.hpp"
#include "mslab/krylov.hpp"
#include "mslab/snapshot.hpp"
#include "mslab/spectral.hpp"

namespace mslab {

namespace {

using State = std::array<double, 2>;

struct RadialOde {
  const Nonlinearity& nl;
  double omega;
  int dim;

  State rhs(double r, const State& y) const {
    const double phi = y[0], dphi = y[1];
    double acc = omega * phi - nl.g(phi * phi) * phi;
    if (dim > 1) acc -= (dim - 1) / r * dphi;
    return {dphi, acc};
  }

  double energy(const State& y) const {
    return 0.5 * y[1] * y[1] - 0.5 * omega * y[0] * y[0] + eval_primitive(nl, std::abs(y[0]));
  }
};

// Dormand-Prince 5(4) step; returns the error estimate.
double dp45_step(const RadialOde& ode, double r, const State& y, double h, State& out) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  auto add = [](const State& a, double s, const State& k) {
    return State{a[0] + s * k[0], a[1] + s * k[1]};
  };
  const State k1 = ode.rhs(r, y);
  const State k2 = ode.rhs(r + c2 * h, add(y, h * a21, k1));
  State t;
  for (int i = 0; i < 2; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  const State k3 = ode.rhs(r + c3 * h, t);
  for (int i = 0; i < 2; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  const State k4 = ode.rhs(r + c4 * h, t);
  for (int i = 0; i < 2; ++i)
    t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  const State k5 = ode.rhs(r + c5 * h, t);
  for (int i = 0; i < 2; ++i)
    t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  const State k6 = ode.rhs(r + h, t);
  for (int i = 0; i < 2; ++i)
    out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  const State k7 = ode.rhs(r + h, out);
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double ei =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double sc = 1e-14 + std::max(std::abs(y[i]), std::abs(out[i]));
    err = std::max(err, std::abs(ei) / sc);
  }
  return err;
}

// Adaptive integration from r to r_end; on_step is called after each accepted step
// and may stop the integration by returning false.
bool integrate(const RadialOde& ode, double& r, State& y, double r_end, double& h, double rtol,
               const std::function<bool(double, const State&)>& on_step) {
  while (r < r_end) {
    const double step = std::min(h, r_end - r);
    State next;
    const double err = dp45_step(ode, r, y, step, next);
    if (!std::isfinite(err)) {
      h = step * 0.25;
      if (h < 1e-14) return false;
      continue;
    }
    if (err <= rtol) {
      r = (step == r_end - r) ? r_end : r + step;
      y = next;
      const double grow = err > 0 ? std::min(5.0, 0.9 * std::pow(rtol / err, 0.2)) : 5.0;
      if (step == h) h = step * grow;
      if (on_step && !on_step(r, y)) return false;
    } else {
      h = step * std::max(0.1, 0.9 * std::pow(rtol / err, 0.2));
    }
  }
  return true;
}

struct Start {
  double r0;
  State y0;
};

Start start_values(const RadialOde& ode, double a) {
  if (ode.dim == 1) return {0.0, {a, 0.0}};
  const double r0 = 1e-5 / std::sqrt(ode.omega);
  const double c = (ode.omega * a - ode.nl.g(a * a) * a) / ode.dim;
  return {r0, {a + 0.5 * c * r0 * r0, c * r0}};
}

struct Shot {
  int crossings = 0;
  bool undershoot = false;
};

Shot classify(const RadialOde& ode, double a, int nodes, double r_limit, double rtol) {
  auto [r, y] = start_values(ode, a);
  Shot s;
  double h = 1e-3 / std::sqrt(ode.omega);
  double prev = y[0];
  integrate(ode, r, y, r_limit, h, rtol, [&](double, const State& st) {
    if ((st[0] > 0) != (prev > 0) && st[0] != 0.0) ++s.crossings;
    prev = st[0];
    if (s.crossings > nodes) return false;
    // The radial energy is non-increasing; once negative no further crossing is possible.
    if (ode.energy(st) < -1e-12 * a * a) {
      s.undershoot = true;
      return false;
    }
    return true;
  });
  return s;
}

bool is_lo(const Shot& s, int nodes) { return s.crossings <= nodes; }

struct Trajectory {
  std::vector<double> phi, dphi;
};

Trajectory sample(const RadialOde& ode, double a, double dr, std::size_t count, double rtol) {
  auto [r, y] = start_values(ode, a);
  Trajectory t;
  t.phi.push_back(a);
  t.dphi.push_back(0.0);
  double h = dr;
  for (std::size_t i = 1; i < count; ++i) {
    const double target = dr * static_cast<double>(i);
    if (!integrate(ode, r, y, target, h, rtol, nullptr)) break;
    t.phi.push_back(y[0]);
    t.dphi.push_back(y[1]);
  }
  return t;
}

}  // namespace

double RadialProfile::eval(double r) const {
  r = std::abs(r);
  if (r >= r_match) {
    const std::size_t last = phi.size() - 1;
    const double rm = dr * static_cast<double>(last);
    const double base = phi[last];
    double tail = base * std::exp(-std::sqrt(omega) * (r - rm));
    if (dim > 1 && rm > 0) tail *= std::pow(rm / r, 0.5 * (dim - 1));
    return tail;
  }
  const auto i = std::min(static_cast<std::size_t>(r / dr), phi.size() - 2);
  const double s = (r - dr * static_cast<double>(i)) / dr;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * phi[i] + h10 * dr * dphi[i] + h01 * phi[i + 1] + h11 * dr * dphi[i + 1];
}

RadialProfile shoot_radial(const Nonlinearity& nl, double omega, int nodes, int dim,
                           const ShootOptions& opt) {
  require(omega > 0, "omega must be positive");
  require(nodes >= 0, "nodes must be non-negative");
  require(dim >= 1 && dim <= 3, "dim must be 1, 2 or 3");
  const RadialOde ode{nl, omega, dim};
  const double sw = std::sqrt(omega);
  const double r_limit = 60.0 / sw;
  const double r_max = opt.r_max > 0 ? opt.r_max : 12.0 / sw;
  const double dr = opt.dr > 0 ? opt.dr : 4e-3 / sw;

  double lo = -1, hi = -1;
  double prev_a = -1;
  bool prev_lo = false;
  for (int i = 0; i < opt.scan_points; ++i) {
    const double a =
        opt.phi_min * std::pow(opt.phi_max / opt.phi_min, double(i) / (opt.scan_points - 1));
    const Shot s = classify(ode, a, nodes, r_limit, 1e-10);
    const bool lo_k = is_lo(s, nodes) && s.crossings == nodes;
    if (prev_lo && !is_lo(s, nodes)) {
      lo = prev_a;
      hi = a;
      break;
    }
    prev_lo = lo_k;
    prev_a = a;
  }
  if (lo < 0)
    fail(ErrorKind::NoProfileInBracket,
         "no profile in bracket (0, " + std::to_string(opt.phi_max) + "] for " +
             std::to_string(nodes) + " nodes in d=" + std::to_string(dim));

  int it = 0;
  for (; it < opt.max_bisections && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const Shot s = classify(ode, mid, nodes, r_limit, opt.rtol);
    if (is_lo(s, nodes))
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo > 1e-10 * hi)
    fail(ErrorKind::NotConverged, "bisection did not converge, last bracket [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");

  const auto count = static_cast<std::size_t>(std::ceil(r_max / dr)) + 1;
  const Trajectory tl = sample(ode, lo, dr, count, opt.rtol);
  const Trajectory th = sample(ode, hi, dr, count, opt.rtol);
  double peak = 0.0;
  for (double v : tl.phi) peak = std::max(peak, std::abs(v));
  std::size_t cut = std::min(tl.phi.size(), th.phi.size());
  for (std::size_t i = 0; i < cut; ++i) {
    if (std::abs(tl.phi[i] - th.phi[i]) > 1e-6 * std::abs(tl.phi[i]) + 1e-13 * peak) {
      cut = i;
      break;
    }
  }
  require(cut >= 8, "shooting trajectory too short to sample");

  RadialProfile prof;
  prof.dim = dim;
  prof.omega = omega;
  prof.phi0 = lo;
  prof.dr = dr;
  prof.phi.assign(tl.phi.begin(), tl.phi.begin() + cut);
  prof.dphi.assign(tl.dphi.begin(), tl.dphi.begin() + cut);
  prof.r_match = dr * static_cast<double>(cut - 1);
  int crossings = 0;
  for (std::size_t i = 1; i < prof.phi.size(); ++i)
    if ((prof.phi[i] > 0) != (prof.phi[i - 1] > 0) && std::abs(prof.phi[i]) > 1e-10 * peak)
      ++crossings;
  prof.nodes = crossings;
  return prof;
}

Field radial_to_grid(const RadialProfile& prof, const GridSpec& grid) {
  require(prof.dim == grid.dim(), "radial profile dimension must match grid");
  return Field::sample(grid, [&](const Point& x) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) r2 += x[a] * x[a];
    return prof.eval(std::sqrt(r2));
  });
}

Field stationary_residual(const Nonlinearity& nl, const Field& phi, double omega) {
  const Field lap = laplacian(phi);
  std::vector<cplx> v(phi.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -lap[i] + omega * phi[i] - eval_f(nl, phi[i]);
  return phi.with_values(std::move(v));
}

double action(const Nonlinearity& nl, const Field& phi, double omega) {
  double pot = 0.0;
  for (const auto& z : phi.values()) pot += eval_primitive(nl, std::abs(z));
  pot *= phi.grid().cell_volume();
  const double m = norm_l2(phi);
  return 0.5 * gradient_norm_sq(phi) + 0.5 * omega * m * m - pot;
}

double action(const Nonlinearity& nl, const BoundState& b) {
  return action(nl, b.profile, b.omega);
}

namespace {

// Flat index of the grid centre and the stride of axis 0.
std::pair<std::size_t, std::size_t> centre_ray(const GridSpec& g) {
  std::size_t centre = 0, stride = 1;
  for (int a = g.dim() - 1; a >= 0; --a) {
    centre += (g.n() / 2) * stride;
    if (a > 0) stride *= g.n();
  }
  return {centre, stride};
}

}  // namespace

int count_nodes(const Field& phi, double rel_floor) {
  const auto& g = phi.grid();
  const double floor = rel_floor * phi.max_abs();
  const auto [centre, stride] = centre_ray(g);
  int nodes = 0;
  double last = 0.0;
  for (std::size_t i = g.n() / 2; i < g.n(); ++i) {
    const double v = phi[centre + (i - g.n() / 2) * stride].real();
    if (std::abs(v) <= floor) continue;
    if (last != 0.0 && (v > 0) != (last > 0)) ++nodes;
    last = v;
  }
  return nodes;
}

double ray_decay_rate(const Field& phi, double r0, double r1) {
  const auto& g = phi.grid();
  const auto [centre, stride] = centre_ray(g);
  std::vector<double> rs, ys;
  for (std::size_t i = g.n() / 2; i < g.n(); ++i) {
    const double r = g.coord(i);
    if (r < r0 || r > r1) continue;
    rs.push_back(r);
    ys.push_back(std::abs(phi[centre + (i - g.n() / 2) * stride]));
  }
  return fit_decay_rate(rs, ys, 1e-300).rate;
}

BoundState newton_refine(const Nonlinearity& nl, const Field& guess, double omega,
                         const NewtonOptions& opt) {
  require(omega > 0, "omega must be positive");
  const auto& g = guess.grid();
  const double amp = guess.max_abs();
  if (amp < opt.min_amplitude)
    fail(ErrorKind::Divergence, "guess rejected by the min-amplitude guard (max|phi| < " +
                                    std::to_string(opt.min_amplitude) + ")");
  for (const auto& z : guess.values())
    require(std::abs(z.imag()) <= 1e-12 * amp, "newton_refine needs a real-valued guess");

  const std::size_t N = g.size();
  const auto& k2 = fft::k_squared(g);
  Eigen::VectorXd phi(N);
  for (std::size_t i = 0; i < N; ++i) phi(i) = guess[i].real();

  auto helmholtz = [&](const Eigen::VectorXd& x, bool invert) {
    std::vector<cplx> v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = x(i);
    fft::forward(g, v);
    for (std::size_t i = 0; i < N; ++i) v[i] *= invert ? 1.0 / (k2[i] + omega) : (k2[i] + omega);
    fft::inverse(g, v);
    Eigen::VectorXd y(N);
    for (std::size_t i = 0; i < N; ++i) y(i) = v[i].real();
    return y;
  };
  auto residual = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r = helmholtz(p, false);
    for (std::size_t i = 0; i < N; ++i) r(i) -= nl.g(p(i) * p(i)) * p(i);
    return r;
  };

  Eigen::VectorXd G = residual(phi);
  double res = G.lpNorm<Eigen::Infinity>();
  int increases = 0;
  int it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    Eigen::VectorXd pot(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double s = phi(i) * phi(i);
      pot(i) = nl.g(s) + (s > 0 ? 2.0 * nl.dg(s) * s : 0.0);
    }
    RealOp A = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return helmholtz(x, false) - pot.cwiseProduct(x);
    };
    RealOp M = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return helmholtz(x, true); };
    // Translation modes span the Jacobian kernel; keep them out of the update.
    std::vector<Eigen::VectorXd> kernel;
    {
      std::vector<cplx> v(N);
      for (std::size_t i = 0; i < N; ++i) v[i] = phi(i);
      for (const auto& d : gradient(Field(g, std::move(v)))) {
        Eigen::VectorXd k(N);
        for (std::size_t i = 0; i < N; ++i) k(i) = d[i].real();
        for (const auto& q : kernel) k -= q.dot(k) * q;
        const double kn = k.norm();
        if (kn > 0) kernel.push_back(k / kn);
      }
    }
    auto project = [&](Eigen::VectorXd x) {
      for (const auto& q : kernel) x -= q.dot(x) * q;
      return x;
    };
    Eigen::VectorXd delta;
    const auto kr = minres(A, M, project(G), delta, 1e-12, 2000);
    delta = project(delta);
    if (!kr.converged && kr.residual > 1e-3)
      fail(ErrorKind::Stagnation, "Jacobian solve stagnated at relative residual " +
                                      std::to_string(kr.residual));
    phi -= delta;
    if (phi.lpNorm<Eigen::Infinity>() < opt.min_amplitude)
      fail(ErrorKind::Divergence, "iterate collapsed below the min-amplitude guard");
    G = residual(phi);
    const double next = G.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(next)) fail(ErrorKind::Divergence, "newton iterate became non-finite");
    increases = next > res ? increases + 1 : 0;
    res = next;
    if (increases >= 3)
      fail(ErrorKind::Divergence, "newton residual grew on 3 consecutive steps (residual " +
                                      std::to_string(res) + ")");
  }
  if (res > opt.accept)
    fail(ErrorKind::NotConverged,
         "newton stopped after " + std::to_string(it) + " iterations at residual " +
             std::to_string(res));

  std::vector<cplx> v(N);
  for (std::size_t i = 0; i < N; ++i) v[i] = phi(i);
  Field profile(g, std::move(v), 0.0);
  BoundState b{omega, profile, count_nodes(profile), res, action(nl, profile, omega), it};
  return b;
}

BoundState compute_bound_state(const Nonlinearity& nl, double omega, int nodes,
                               const GridSpec& grid, const ShootOptions& shoot,
                               const NewtonOptions& newton) {
  const auto prof = shoot_radial(nl, omega, nodes, grid.dim(), shoot);
  return newton_refine(nl, radial_to_grid(prof, grid), omega, newton);
}

void write_bound_state(const std::filesystem::path& stem, const BoundState& b) {
  auto snap = stem;
  snap += ".nlsf";
  write_snapshot(snap, b.profile);
  nlohmann::json j{{"omega", b.omega},
                   {"nodes", b.node_count},
                   {"residual", b.residual_linf},
                   {"action", b.action}};
  auto side = stem;
  side += ".json";
  std::ofstream os(side);
  if (!os) fail(ErrorKind::Io, "cannot write " + side.string());
  os << j.dump(2) << "\n";
}

BoundState read_bound_state(const std::filesystem::path& stem) {
  auto snap = stem;
  snap += ".nlsf";
  auto side = stem;
  side += ".json";
  std::ifstream is(side);
  if (!is) fail(ErrorKind::Io, "cannot read " + side.string());
  nlohmann::json j;
  is >> j;
  BoundState b{j.at("omega").get<double>(), read_snapshot(snap), j.at("nodes").get<int>(),
               j.at("residual").get<double>(), j.at("action").get<double>(), 0};
  return b;
}

}  // namespace mslab
