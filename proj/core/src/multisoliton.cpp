#include "mslab/multisoliton.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mslab/dense.hpp"
#include "mslab/direction.hpp"
#include "mslab/error.hpp"
#include "mslab/fft.hpp"
#include "mslab/linearization.hpp"
#include "mslab/spectral.hpp"

namespace mslab {
namespace {

constexpr cplx kI{0.0, 1.0};

double norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double wrap(double x, double ell) {
  const double L = 2.0 * ell;
  x = std::fmod(x + ell, L);
  if (x < 0.0) x += L;
  return x - ell;
}

double phase_at(const SolitonParams& p, const Point& x, double t) {
  const auto v = p.velocity();
  double eta = (p.omega() - 0.25 * norm_sq(v)) * t + p.gamma;
  for (std::size_t a = 0; a < v.size(); ++a) eta += 0.5 * v[a] * x[a];
  return eta;
}

}  // namespace

EnsembleConfig EnsembleConfig::make(std::vector<SolitonParams> solitons) {
  require(!solitons.empty(), "an ensemble needs at least one soliton");
  EnsembleConfig cfg;
  cfg.solitons = std::move(solitons);
  double wmin = std::numeric_limits<double>::infinity();
  for (const auto& p : cfg.solitons) {
    validate(p);
    wmin = std::min(wmin, p.omega());
  }
  cfg.omega_star = 0.5 * wmin;
  const std::size_t N = cfg.solitons.size();
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = j + 1; k < N; ++k) {
      const auto a = cfg.solitons[j].velocity(), b = cfg.solitons[k].velocity();
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
      dmin = std::min(dmin, std::sqrt(s));
    }
  cfg.v_star = N >= 2 ? dmin / 9.0 : 0.0;
  cfg.alpha = ensemble_alpha(static_cast<int>(N), cfg.dim());
  validate(cfg);
  return cfg;
}

void validate(const EnsembleConfig& cfg) {
  require(!cfg.solitons.empty(), "an ensemble needs at least one soliton");
  const GridSpec& g = cfg.grid();
  for (const auto& p : cfg.solitons) {
    validate(p);
    require_same_grid(g, p.state.profile.grid());
  }
  const EnsembleConfig ref = [&] {
    EnsembleConfig r;
    double wmin = std::numeric_limits<double>::infinity();
    for (const auto& p : cfg.solitons) wmin = std::min(wmin, p.omega());
    r.omega_star = 0.5 * wmin;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cfg.size(); ++j)
      for (std::size_t k = j + 1; k < cfg.size(); ++k) {
        const auto a = cfg.solitons[j].velocity(), b = cfg.solitons[k].velocity();
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        require(s > 0.0, "soliton velocities must be pairwise distinct");
        dmin = std::min(dmin, std::sqrt(s));
      }
    r.v_star = cfg.size() >= 2 ? dmin / 9.0 : 0.0;
    r.alpha = ensemble_alpha(static_cast<int>(cfg.size()), cfg.dim());
    return r;
  }();
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  require(close(cfg.omega_star, ref.omega_star), "omega_star does not match the soliton list");
  require(close(cfg.v_star, ref.v_star), "v_star does not match the soliton list");
  require(close(cfg.alpha, ref.alpha), "alpha does not match the soliton list");
}

double uniform_bound_rate(const EnsembleConfig& cfg) {
  return cfg.alpha * std::sqrt(cfg.omega_star) * cfg.v_star;
}

std::vector<double> BackwardResult::times() const {
  std::vector<double> t;
  for (const auto& s : samples) t.push_back(s.t);
  return t;
}

std::vector<double> BackwardResult::errors() const {
  std::vector<double> e;
  for (const auto& s : samples) e.push_back(s.error_h1);
  return e;
}

BackwardResult backward_construct(const EnsembleConfig& cfg, const Nonlinearity& nl,
                                  const Integrator& intg, double Tn, double T0,
                                  const BackwardOptions& opt) {
  validate(cfg);
  require(T0 > 0.0, "T0 must be positive");
  require(Tn > T0, "Tn must exceed T0");
  const GridSpec& g = cfg.grid();
  const auto& ps = cfg.solitons;

  BackwardResult out{{}, Field::zeros(g), {}, {}, 0.0, {}};
  bool warned = false;
  WarningSink warn = [&](const std::string& w) {
    if (!warned) out.warnings.push_back(w);
    warned = true;
  };

  std::vector<std::vector<double>> vel;
  for (const auto& p : ps) vel.push_back(p.velocity());
  if (cfg.dim() == 1 || ps.size() < 2) {
    out.direction.assign(cfg.dim(), 0.0);
    out.direction[0] = 1.0;
  } else {
    out.direction = select_direction(vel, cfg.alpha).basis.at(0);
  }
  const CutoffFamily cut(out.direction, vel);

  Integrator back = intg;
  back.direction = Direction::Backward;

  auto record = [&](const Field& u) {
    BackwardSample s;
    s.t = u.time();
    const Field R = soliton_sum(ps, g, s.t, warn);
    const Field diff = u - R;
    s.error_l2 = norm_l2(diff);
    s.error_h1 = norm_h1(diff);
    s.mass = mass(u);
    s.energy = energy(nl, u);
    s.momentum = momentum(u);
    if (opt.localized)
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const auto q = localized_quantities(cut, nl, u, j, ps[j]);
        s.local_mass.push_back(q.M);
        s.local_momentum.push_back(q.P);
        s.local_action.push_back(q.S);
      }
    out.samples.push_back(std::move(s));
  };

  const Field u0 = soliton_sum(ps, g, Tn, warn).with_time(Tn);
  const auto traj = evolve(back, nl, u0, T0, {Observer{opt.stride, record}});
  out.final_state = traj.final_state;

  const auto t = out.times();
  const auto e = out.errors();
  std::vector<double> tf, ef;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (e[i] > opt.fit_floor) {
      tf.push_back(t[i]);
      ef.push_back(e[i]);
    }
  if (tf.size() >= 3) out.error_fit = fit_decay_rate(tf, ef);
  const double rate = uniform_bound_rate(cfg);
  for (std::size_t i = 0; i < t.size(); ++i)
    out.bound_sup = std::max(out.bound_sup, e[i] * std::exp(rate * t[i]));
  return out;
}

double discretization_floor(const EnsembleConfig& cfg, const Nonlinearity& nl,
                            const Integrator& intg, double Tn, double T0, std::size_t stride) {
  BackwardOptions opt;
  opt.stride = stride;
  opt.localized = false;
  double floor = 0.0;
  for (const auto& p : cfg.solitons) {
    const auto r = backward_construct(EnsembleConfig::make({p}), nl, intg, Tn, T0, opt);
    for (const auto& s : r.samples) floor = std::max(floor, s.error_h1);
  }
  return floor;
}

Field boost_field(const SolitonParams& p, const Field& z, double t) {
  validate(p);
  const GridSpec& g = z.grid();
  const auto c = p.center(t);
  const Field s = spectral_shift(z, c);
  std::vector<cplx> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s[i] * std::polar(1.0, phase_at(p, g.point(i), t));
  return Field(g, std::move(out), t);
}

Field unboost_field(const SolitonParams& p, const Field& w, double t) {
  validate(p);
  const GridSpec& g = w.grid();
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] * std::polar(1.0, -phase_at(p, g.point(i), t));
  auto c = p.center(t);
  for (auto& x : c) x = -x;
  return spectral_shift(Field(g, std::move(v), t), c);
}

CoercivityData coercivity_data(const Nonlinearity& nl, const SolitonParams& p, double threshold) {
  validate(p);
  const BoundState& b = p.state;
  require(threshold < b.omega, "threshold must lie below omega");
  const GridSpec& g = b.profile.grid();
  const std::size_t N = g.size();
  std::vector<cplx> vp(N), vm(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double s = std::norm(b.profile[i]);
    const double gs = nl.g(s);
    const double dg = s > 0.0 ? nl.dg(s) : 0.0;
    vp[i] = -gs - 2.0 * dg * s;
    vm[i] = -gs;
  }
  BlockOperator::Potentials V;
  V[0][0] = std::move(vp);
  V[1][1] = std::move(vm);
  const BlockOperator op(g, b.omega, {{{1.0, 0.0}, {0.0, 1.0}}}, std::move(V));
  const Eigen::MatrixXd A = op.dense_real();

  CoercivityData out;
  out.gap = std::numeric_limits<double>::infinity();
  struct Candidate {
    double value;
    int block;
    Field dir;
  };
  std::vector<Candidate> found;
  const double scale = 1.0 / std::sqrt(g.cell_volume());
  for (int blk = 0; blk < 2; ++blk) {
    Eigen::MatrixXd B = A.block(blk * N, blk * N, N, N);
    B = 0.5 * (B + B.transpose()).eval();
    const auto eig = dense::eig_symmetric(B, true);
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
      const double lam = eig.values(k);
      if (lam < -1e-6) (blk == 0 ? out.negative_plus : out.negative_minus)++;
      if (lam >= threshold) {
        out.gap = std::min(out.gap, lam);
        break;
      }
      std::vector<cplx> v(N);
      const cplx unit = blk == 0 ? cplx(1.0) : kI;
      for (std::size_t i = 0; i < N; ++i) v[i] = unit * (scale * eig.vectors(i, k));
      Field f(g, std::move(v));
      f *= 1.0 / norm_l2(f);
      found.push_back({lam, blk == 0 ? 1 : -1, std::move(f)});
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  for (auto& c : found) {
    out.eigenvalues.push_back(c.value);
    out.block.push_back(c.block);
    out.directions.push_back(std::move(c.dir));
  }
  out.nu0 = static_cast<int>(out.directions.size());
  if (!std::isfinite(out.gap) || out.gap <= 0.0)
    fail(ErrorKind::NotConverged, "no eigenvalue above the coercivity threshold was resolved");
  out.K0 = 1.0 / out.gap;
  return out;
}

double coercivity_form_rest(const Nonlinearity& nl, const BoundState& b, const Field& z) {
  require_same_grid(b.profile.grid(), z.grid());
  const GridSpec& g = z.grid();
  const auto grad = gradient(z);
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double s = std::norm(b.profile[i]);
    const double re = (b.profile[i] * std::conj(z[i])).real();
    double term = (b.omega - nl.g(s)) * std::norm(z[i]) - 2.0 * nl.dg(s) * re * re;
    for (int a = 0; a < g.dim(); ++a) term += std::norm(grad[a][i]);
    acc += term;
  }
  return acc * g.cell_volume();
}

double coercivity_form(const Nonlinearity& nl, const SolitonParams& p, double t, const Field& w) {
  const GridSpec& g = w.grid();
  const Field R = soliton_field(p, g, t);
  const auto grad = gradient(w);
  const auto v = p.velocity();
  const double c = p.omega() + 0.25 * norm_sq(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = std::norm(R[i]);
    const double re = (R[i] * std::conj(w[i])).real();
    double term = (c - nl.g(s)) * std::norm(w[i]) - 2.0 * nl.dg(s) * re * re;
    for (int a = 0; a < g.dim(); ++a) {
      term += std::norm(grad[a][i]);
      term -= v[a] * (std::conj(w[i]) * grad[a][i]).imag();
    }
    acc += term;
  }
  return acc * g.cell_volume();
}

namespace {

std::vector<double> ball_mask(const GridSpec& g, const DistanceMode& mode) {
  std::vector<double> chi(g.size(), 1.0);
  if (mode.kind == DistanceMode::Kind::Global) return chi;
  require(mode.radius > 0.0, "ball radius must be positive");
  require(mode.center.empty() || static_cast<int>(mode.center.size()) == g.dim(),
          "ball centre dimension must equal grid dim");
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const auto x = g.point(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double c = mode.center.empty() ? 0.0 : mode.center[a];
      const double d = wrap(x[a] - c, g.half_length());
      r2 += d * d;
    }
    chi[i] = r2 <= mode.radius * mode.radius ? 1.0 : 0.0;
  }
  return chi;
}

// h(y) = n(y) - 2|c(y)| with c(y) = <chi u, T(. - y)> and n(y) = int chi |T(. - y)|^2, both
// trigonometric polynomials in y.
class ShiftObjective {
 public:
  ShiftObjective(const Field& u, const Field& templ, const std::vector<double>& chi, bool global)
      : g_(u.grid()) {
    require_same_grid(u.grid(), templ.grid());
    const std::size_t N = g_.size();
    const double w = g_.cell_volume() / static_cast<double>(N);
    std::vector<cplx> U(N), T = templ.to_vector(), C(N), Q(N);
    for (std::size_t i = 0; i < N; ++i) {
      U[i] = chi[i] * u[i];
      C[i] = chi[i];
      Q[i] = std::norm(templ[i]);
    }
    fft::forward(g_, U);
    fft::forward(g_, T);
    a_.resize(N);
    for (std::size_t i = 0; i < N; ++i) a_[i] = w * U[i] * std::conj(T[i]);
    if (global) {
      b_.assign(N, 0.0);
      for (std::size_t i = 0; i < N; ++i) b_[i] = w * std::norm(T[i]);
    } else {
      fft::forward(g_, C);
      fft::forward(g_, Q);
      b_.resize(N);
      for (std::size_t i = 0; i < N; ++i) b_[i] = w * C[i] * std::conj(Q[i]);
    }
    global_ = global;
  }

  // c and n on every grid shift y = m dx, m in row-major order.
  std::pair<std::vector<cplx>, std::vector<double>> on_grid() const {
    const std::size_t N = g_.size();
    std::vector<cplx> c = a_;
    fft::inverse(g_, c);
    for (auto& x : c) x *= static_cast<double>(N);
    std::vector<double> n(N);
    if (global_) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) s += b_[i].real();
      std::fill(n.begin(), n.end(), s);
    } else {
      std::vector<cplx> q = b_;
      fft::inverse(g_, q);
      for (std::size_t i = 0; i < N; ++i) n[i] = static_cast<double>(N) * q[i].real();
    }
    return {c, n};
  }

  struct Eval {
    double h = 0.0;
    cplx c;
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
  };

  Eval eval(const std::vector<double>& y) const {
    const int d = g_.dim();
    const std::size_t N = g_.size();
    const double nyq = -std::numbers::pi / g_.dx();
    cplx c = 0.0;
    Eigen::Vector3cd dc = Eigen::Vector3cd::Zero();
    Eigen::Matrix3cd ddc = Eigen::Matrix3cd::Zero();
    double n = 0.0;
    Eigen::Vector3d dn = Eigen::Vector3d::Zero();
    Eigen::Matrix3d ddn = Eigen::Matrix3d::Zero();
    std::array<cplx, 3> m, dm, ddm;
    for (std::size_t i = 0; i < N; ++i) {
      for (int a = 0; a < d; ++a) {
        const double k = fft::k_axis(g_, a)[i];
        if (k == nyq) {
          m[a] = std::cos(k * y[a]);
          dm[a] = -k * std::sin(k * y[a]);
        } else {
          m[a] = std::polar(1.0, k * y[a]);
          dm[a] = kI * k * m[a];
        }
        ddm[a] = -k * k * m[a];
      }
      cplx prod = 1.0;
      for (int a = 0; a < d; ++a) prod *= m[a];
      auto partial = [&](int skip1, int skip2) {
        cplx r = 1.0;
        for (int a = 0; a < d; ++a)
          if (a != skip1 && a != skip2) r *= m[a];
        return r;
      };
      for (int a = 0; a < d; ++a) {
        const cplx da = dm[a] * partial(a, -1);
        for (int bb = 0; bb < d; ++bb) {
          const cplx dab = a == bb ? ddm[a] * partial(a, -1) : dm[a] * dm[bb] * partial(a, bb);
          ddc(a, bb) += a_[i] * dab;
          if (!global_) ddn(a, bb) += (b_[i] * dab).real();
        }
        dc(a) += a_[i] * da;
        if (!global_) dn(a) += (b_[i] * da).real();
      }
      c += a_[i] * prod;
      n += global_ ? b_[i].real() : (b_[i] * prod).real();
    }
    Eval e;
    e.c = c;
    const double ac = std::abs(c);
    e.h = n - 2.0 * ac;
    if (ac == 0.0) return e;
    Eigen::Vector3d ga = Eigen::Vector3d::Zero();
    for (int a = 0; a < d; ++a) ga(a) = (std::conj(c) * dc(a)).real() / ac;
    for (int a = 0; a < d; ++a) {
      e.grad(a) = dn(a) - 2.0 * ga(a);
      for (int bb = 0; bb < d; ++bb) {
        const double ha = ((std::conj(dc(bb)) * dc(a)).real() + (std::conj(c) * ddc(a, bb)).real()) / ac -
                          ga(a) * ga(bb) / ac;
        e.hess(a, bb) = ddn(a, bb) - 2.0 * ha;
      }
    }
    return e;
  }

 private:
  GridSpec g_;
  std::vector<cplx> a_, b_;
  bool global_ = true;
};

std::vector<double> signed_shift(const GridSpec& g, std::size_t idx) {
  const auto m = g.unflatten(idx);
  std::vector<double> y(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    long s = static_cast<long>(m[a]);
    if (s >= static_cast<long>(g.n() / 2)) s -= static_cast<long>(g.n());
    y[a] = static_cast<double>(s) * g.dx();
  }
  return y;
}

}  // namespace

double distance_at(const Field& u, const Field& templ, std::span<const double> y, double theta,
                   const DistanceMode& mode) {
  require_same_grid(u.grid(), templ.grid());
  const auto chi = ball_mask(u.grid(), mode);
  const Field s = spectral_shift(templ, y);
  const cplx ph = std::polar(1.0, theta);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += chi[i] * std::norm(u[i] - ph * s[i]);
  return std::sqrt(acc * u.grid().cell_volume());
}

double optimal_phase(const Field& u, const Field& templ, std::span<const double> y,
                     const DistanceMode& mode) {
  require_same_grid(u.grid(), templ.grid());
  const auto chi = ball_mask(u.grid(), mode);
  const Field s = spectral_shift(templ, y);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += chi[i] * u[i] * std::conj(s[i]);
  return std::arg(acc);
}

FamilyDistance family_distance(const Field& u, const Field& templ, const DistanceMode& mode) {
  const GridSpec& g = u.grid();
  const int d = g.dim();
  const bool global = mode.kind == DistanceMode::Kind::Global;
  const auto chi = ball_mask(g, mode);
  const ShiftObjective obj(u, templ, chi, global);

  const auto [cg, ng] = obj.on_grid();
  std::size_t best = g.size();
  double hbest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto y = signed_shift(g, i);
    if (!global) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double c = mode.center.empty() ? 0.0 : mode.center[a];
        const double dd = wrap(y[a] - c, g.half_length());
        r2 += dd * dd;
      }
      if (r2 > mode.radius * mode.radius) continue;
    }
    const double h = ng[i] - 2.0 * std::abs(cg[i]);
    if (h < hbest) {
      hbest = h;
      best = i;
    }
  }
  require(best < g.size(), "no admissible shift inside the ball");

  auto confine = [&](std::vector<double>& y) {
    if (global) return;
    double r2 = 0.0;
    std::vector<double> off(d);
    for (int a = 0; a < d; ++a) {
      off[a] = wrap(y[a] - (mode.center.empty() ? 0.0 : mode.center[a]), g.half_length());
      r2 += off[a] * off[a];
    }
    if (r2 <= mode.radius * mode.radius) return;
    const double s = mode.radius / std::sqrt(r2);
    for (int a = 0; a < d; ++a) y[a] -= off[a] * (1.0 - s);
  };
  std::vector<double> y = signed_shift(g, best);
  auto e = obj.eval(y);
  const double dx = g.dx();
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd gr = e.grad.head(d);
    Eigen::MatrixXd H = e.hess.topLeftCorner(d, d);
    Eigen::VectorXd s;
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    const bool newton = llt.info() == Eigen::Success && H.diagonal().minCoeff() > 0.0;
    if (newton)
      s = -llt.solve(gr);
    else
      s = -gr * (dx * dx / std::max(1e-300, std::abs(e.h) + gr.norm()));
    const double sn = s.norm();
    if (sn > dx) s *= dx / sn;
    if (newton && sn < 1e-3 * dx) {
      for (int a = 0; a < d; ++a) y[a] += s(a);
      confine(y);
      e = obj.eval(y);
      if (sn < 1e-14 * std::max(1.0, g.half_length())) break;
      continue;
    }
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      std::vector<double> yt = y;
      for (int a = 0; a < d; ++a) yt[a] += s(a);
      confine(yt);
      const auto et = obj.eval(yt);
      if (et.h < e.h) {
        y = yt;
        e = et;
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;
  }
  for (auto& x : y) x = wrap(x, g.half_length());
  FamilyDistance out;
  out.y = y;
  out.theta = std::arg(obj.eval(y).c);
  out.dist = distance_at(u, templ, y, out.theta, mode);
  return out;
}

FamilyDistance family_distance(const Field& u, const BoundState& b, const DistanceMode& mode) {
  return family_distance(u, b.profile, mode);
}

MultiFamilyDistance multi_family_distance(const Field& u, const std::vector<SolitonParams>& ps,
                                          double t, double M, int max_sweeps) {
  require(!ps.empty(), "at least one soliton is needed");
  const GridSpec& g = u.grid();
  std::vector<Field> templ;
  for (const auto& p : ps) {
    SolitonParams q = p;
    q.x0.clear();
    q.gamma = 0.0;
    templ.push_back(boosted_profile(q, g, 0.0));
  }
  MultiFamilyDistance out;
  if (ps.size() == 1) {
    out.members.push_back(family_distance(u, templ[0]));
    out.dist = out.members[0].dist;
    out.sweeps = 1;
    return out;
  }
  for (std::size_t j = 0; j < ps.size(); ++j) {
    FamilyDistance m;
    m.y = ps[j].center(t);
    for (auto& x : m.y) x = wrap(x, g.half_length());
    m.theta = optimal_phase(u, templ[j], m.y, DistanceMode::ball(M, m.y));
    out.members.push_back(std::move(m));
  }
  auto member = [&](std::size_t k) {
    return std::polar(1.0, out.members[k].theta) * spectral_shift(templ[k], out.members[k].y);
  };
  auto total_residual = [&] {
    Field r = u;
    for (std::size_t k = 0; k < ps.size(); ++k) r -= member(k);
    return norm_l2(r);
  };
  double prev = total_residual();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      Field r = u;
      for (std::size_t k = 0; k < ps.size(); ++k)
        if (k != j) r -= member(k);
      const auto fd = family_distance(r, templ[j], DistanceMode::ball(M, out.members[j].y));
      out.members[j].y = fd.y;
      out.members[j].theta = fd.theta;
    }
    out.sweeps = sweep + 1;
    const double now = total_residual();
    const bool done = prev - now <= 1e-13 * std::max(1.0, prev);
    prev = now;
    if (done) break;
  }
  for (std::size_t j = 0; j < ps.size(); ++j) {
    Field r = u;
    for (std::size_t k = 0; k < ps.size(); ++k)
      if (k != j) r -= member(k);
    out.members[j].dist = distance_at(r, templ[j], out.members[j].y, out.members[j].theta);
  }
  out.dist = prev;
  return out;
}

}  // namespace mslab
