#include "mslab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "mslab/boundstate.hpp"
#include "mslab/direction.hpp"
#include "mslab/evolution.hpp"
#include "mslab/fit.hpp"
#include "mslab/fundamental.hpp"
#include "mslab/instability.hpp"
#include "mslab/linearization.hpp"
#include "mslab/multisoliton.hpp"
#include "mslab/profile.hpp"
#include "mslab/spectral.hpp"

namespace mslab {
namespace {

constexpr cplx kI{0.0, 1.0};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Detail {
  std::ostringstream os;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    if (os.tellp() > 0) os << "; ";
    os << what << (cond ? "" : " [X]");
    ok = ok && cond;
  }
};

Spectrum dense_spectrum(const BlockOperator& op) {
  SpectrumOptions so;
  so.all_residuals = false;
  so.mode = SpectrumOptions::Mode::Dense;
  return spectrum(op, 0, so);
}

// d = 1, p = 7 ground state shared by the profile and instability criteria.
struct UnstableSetup {
  Nonlinearity nl;
  GridSpec g;
  BoundState b;
  BlockOperator op;
  Spectrum spec;

  UnstableSetup()
      : nl(Nonlinearity::pure_power(7.0, 1)),
        g(1, 512, 30.0),
        b(compute_bound_state(nl, 1.0, 0, g)),
        op(assemble(nl, b)),
        spec(dense_spectrum(op)) {}
};

const UnstableSetup& p7() {
  static const UnstableSetup s;
  return s;
}

std::vector<double> random_times(std::uint64_t seed, int count, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> t(count);
  for (auto& x : t) x = U(rng);
  std::sort(t.begin(), t.end());
  return t;
}

void c1(Detail& d) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 512, 20.0);
  const BoundState b = compute_bound_state(nl, 1.0, 0, g);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    err = std::max(err, std::abs(b.profile[i] - std::sqrt(2.0) / std::cosh(g.coord(i))));
  d.check(err <= 1e-6, "Linf error vs sqrt2 sech " + fmt("%.2e", err) + " <= 1e-6");
  d.check(b.residual_linf <= 1e-8, "stationary residual " + fmt("%.2e", b.residual_linf) + " <= 1e-8");
}

double closure_defect(const std::vector<cplx>& ev) {
  double worst = 0.0;
  for (const cplx mu : ev)
    for (const cplx t : {-mu, std::conj(mu), -std::conj(mu)}) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx nu : ev) best = std::min(best, std::abs(nu - t));
      worst = std::max(worst, best);
    }
  return worst;
}

void c2(Detail& d) {
  const auto& s = p7();
  const double defect = closure_defect(s.spec.eigenvalues);
  d.check(defect <= 1e-8, "quadruple closure defect " + fmt("%.2e", defect) + " <= 1e-8 over " +
                              std::to_string(s.spec.eigenvalues.size()) + " eigenvalues");
  d.check(s.spec.rho > 0.0 && std::abs(s.spec.lambda.imag()) <= 1e-10,
          "real unstable rho " + fmt("%.10f", s.spec.rho));
  const GridSpec g2(1, 1024, 30.0);
  const BoundState b2 = compute_bound_state(s.nl, 1.0, 0, g2);
  const Spectrum s2 = dense_spectrum(assemble(s.nl, b2));
  const double drift = std::abs(s2.rho - s.spec.rho);
  d.check(drift <= 1e-4, "rho drift under n 512->1024 " + fmt("%.2e", drift) + " <= 1e-4");
}

void c3(Detail& d) {
  const auto& s = p7();
  double worst = 0.0;
  const double h = 1e-4;
  for (double t : random_times(3, 10, 0.0, 2.0)) {
    const Field dY = (1.0 / (2.0 * h)) * (build_Y(s.spec, t + h) - build_Y(s.spec, t - h));
    worst = std::max(worst, norm_l2(dY + s.op.apply_packed(build_Y(s.spec, t))));
  }
  d.check(worst <= 1e-5, "max ||dY/dt + LY|| " + fmt("%.2e", worst) + " <= 1e-5 at 10 times (d=1 p=7)");

  // A state with a complex top eigenvalue: 2D cubic, one node, coarse grid.
  const auto nl2 = Nonlinearity::pure_power(3.0, 2);
  const GridSpec g2(2, 32, 8.0);
  const BoundState b2 = compute_bound_state(nl2, 1.0, 1, g2);
  const BlockOperator op2 = assemble(nl2, b2);
  const Spectrum s2 = dense_spectrum(op2);
  d.check(s2.theta != 0.0, "2D node-1 lambda " + fmt("%.6f", s2.rho) + fmt("%+.6fi", s2.theta));
  if (s2.theta == 0.0) return;
  double flow = 0.0, per = 0.0;
  const double T = 2.0 * M_PI / std::abs(s2.theta);
  for (double t : random_times(5, 10, 0.0, 3.0)) {
    const Field dY = (1.0 / (2.0 * h)) * (build_Y(s2, t + h) - build_Y(s2, t - h));
    const Field Y = build_Y(s2, t);
    flow = std::max(flow, norm_l2(dY + op2.apply_packed(Y)));
    const double q0 = std::exp(s2.rho * t) * norm_h1(Y);
    const double q1 = std::exp(s2.rho * (t + T)) * norm_h1(build_Y(s2, t + T));
    per = std::max(per, std::abs(q1 - q0) / q0);
  }
  d.check(flow <= 1e-5, "2D flow identity " + fmt("%.2e", flow) + " <= 1e-5");
  d.check(per <= 1e-10, "e^{rho t}||Y||_H1 period defect " + fmt("%.2e", per) + " <= 1e-10");
}

void c4(Detail& d) {
  const auto& s = p7();
  const double rho = s.spec.rho;
  std::vector<double> ts;
  for (int i = 0; i <= 20; ++i) ts.push_back((2.0 + 3.0 * i / 20.0) / rho);
  const double a = 1.0;
  for (int N0 = 1; N0 <= 3; ++N0) {
    const Profile p = build_profile(s.nl, s.b, s.op, s.spec, N0, a);
    std::vector<double> es, ws;
    for (double t : ts) {
      es.push_back(norm_l2(residual_err(p, s.b, s.nl, t)));
      ws.push_back(norm_l2(p.W(t) - a * build_Y(s.spec, t)));
    }
    const RateFit fe = fit_decay_rate(ts, es);
    d.check(fe.rate >= 0.9 * (N0 + 1) * rho,
            "N0=" + std::to_string(N0) + " Err rate/rho " + fmt("%.3f", fe.rate / rho) + " >= " + fmt("%.2f", 0.9 * (N0 + 1)));
    if (N0 >= 2) {
      const RateFit fw = fit_decay_rate(ts, ws);
      d.check(fw.rate >= 0.95 * 2.0 * rho, "W-aY rate/rho " + fmt("%.3f", fw.rate / rho) + " >= 1.90");
    }
  }
}

void c5(Detail& d) {
  const auto& s = p7();
  const double rho = s.spec.rho;
  const auto times = random_times(7, 20, 2.0 / rho, 5.0 / rho);
  for (int N0 = 1; N0 <= 3; ++N0) {
    const TaylorTable tay = taylor_coeffs(s.nl, s.b, N0);
    for (double a : {0.1, -0.1}) {
      const Profile p = build_profile(s.nl, s.b, s.op, s.spec, N0, a);
      const auto terms = expand_nonlinear(p, tay, N0);
      std::vector<double> x, y;
      for (double t : times) {
        Field sum = Field::zeros(s.g);
        for (const auto& q : terms) sum += q.evaluate(t, rho, s.spec.theta);
        x.push_back(rho * t);
        y.push_back(norm_l2(nonlinear_remainder(s.nl, s.b.profile, p.W(t)) - sum));
      }
      const RateFit f = fit_decay_rate(x, y);
      d.check(f.rate >= N0 + 1, "N0=" + std::to_string(N0) + " a=" + fmt("%+.1f", a) + " order " +
                                    fmt("%.4f", f.rate) + " >= " + std::to_string(N0 + 1));
    }
  }
}

void c6(Detail& d) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 1024, 40.0);
  const BoundState b = compute_bound_state(nl, 1.0, 0, g);
  Integrator in;
  in.dt = 2.5e-4;
  const double T0 = 1.0, Tn = 11.0;
  BackwardOptions opt;
  opt.stride = 1000;
  opt.localized = false;
  std::vector<double> rates;
  double sup_last = 0.0;
  for (double v : {1.0, 1.5, 2.0}) {
    const auto cfg = EnsembleConfig::make({SolitonParams{b, 0.0, {v}, {0.0}}, SolitonParams{b, 0.0, {-v}, {0.0}}});
    BackwardOptions o = opt;
    o.fit_floor = 100.0 * discretization_floor(cfg, nl, in, Tn, T0, opt.stride);
    const BackwardResult r = backward_construct(cfg, nl, in, Tn, T0, o);
    rates.push_back(r.error_fit.rate);
    sup_last = r.bound_sup;
    d.check(r.error_fit.samples >= 3, "v=" + fmt("%.1f", v) + " rate " + fmt("%.3f", r.error_fit.rate) +
                                          " (" + std::to_string(r.error_fit.samples) + " pts)");
  }
  d.check(sup_last <= 1.0, "sup e(t) e^{alpha w*^1/2 v* t} at v=2 " + fmt("%.3f", sup_last) + " <= 1");
  d.check(rates[0] < rates[1] && rates[1] < rates[2], "rates increase with v");
}

void c7(Detail& d) {
  const auto& s = p7();
  const double rho = s.spec.rho;
  const SolitonParams p1{s.b, 0.0, {}, {}};
  Integrator in;
  in.dt = 1e-4;
  InstabilityOptions opt;
  opt.S = 2.3;
  opt.T0 = 0.3;
  opt.stride = 20;
  opt.keep_states = true;
  const Profile pa = build_profile(s.nl, s.b, s.op, s.spec, 3, 0.1);
  const Profile pb = build_profile(s.nl, s.b, s.op, s.spec, 3, -0.1);
  const InstabilityResult ra = instability_run(s.nl, p1, s.spec, pa, in, opt);
  const InstabilityResult rb = instability_run(s.nl, p1, s.spec, pb, in, opt);
  for (const auto* r : {&ra, &rb}) {
    const double rel = r->fitted_rate / rho - 1.0;
    d.check(std::abs(rel) <= 0.1 && r->window >= 3, "a=" + std::string(r == &ra ? "+0.1" : "-0.1") + " rate/rho " +
                                                        fmt("%.4f", r->fitted_rate / rho));
  }

  InstabilityOptions o0 = opt;
  o0.keep_states = false;
  const Profile p0 = build_profile(s.nl, s.b, s.op, s.spec, 3, 0.0);
  const InstabilityResult r1 = instability_run(s.nl, p1, s.spec, p0, in, o0);
  Integrator half = in;
  half.dt = in.dt / 2.0;
  o0.stride = 2 * opt.stride;
  const InstabilityResult r2 = instability_run(s.nl, p1, s.spec, p0, half, o0);
  double delta = 0.0, disc = 0.0;
  const std::size_t n = std::min(r1.samples.size(), r2.samples.size());
  for (std::size_t i = 0; i < n; ++i) {
    delta = std::max(delta, r1.samples[i].distance);
    disc = std::max(disc, 4.0 / 3.0 * std::abs(r1.samples[i].distance - r2.samples[i].distance));
  }
  d.check(n > 0 && delta <= 5.0 * disc, "a=0 max delta " + fmt("%.2e", delta) + " <= 5 x disc " + fmt("%.2e", disc));

  const SeparationCheck sep = separation_check(ra, 0.1, rb, -0.1, rho);
  d.check(sep.holds, "separation margin " + fmt("%.2e", sep.worst_margin) + " (C " + fmt("%.3g", sep.C) + ")");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ra.window && i < ra.samples.size(); ++i) {
    x.push_back(ra.samples[i].s);
    y.push_back(ra.samples[i].remainder);
  }
  if (x.size() >= 3) d.os << "; remainder decay rate/rho " << fmt("%.3f", fit_decay_rate(x, y).rate / rho);
}

void c8(Detail& d) {
  const FundamentalSolution g1(1, -1.0), g3(3, -1.0);
  double e1 = 0.0, e3 = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double r = 0.05 * std::pow(400.0, i / 60.0);
    e1 = std::max(e1, std::abs(g1(r) - 0.5 * std::exp(-r)) / (0.5 * std::exp(-r)));
    e3 = std::max(e3, std::abs(g3(r) - std::exp(-r) / (4.0 * M_PI * r)) / (std::exp(-r) / (4.0 * M_PI * r)));
  }
  d.check(e1 <= 1e-10 && e3 <= 1e-10, "closed forms d=1 " + fmt("%.1e", e1) + ", d=3 " + fmt("%.1e", e3) + " <= 1e-10");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  double worst = 0.0;
  int dom_fail = 0;
  for (int k = 0; k < 10; ++k) {
    const cplx mu(U(rng), U(rng));
    for (int dim = 1; dim <= 4; ++dim) {
      const FundamentalSolution fs(dim, mu);
      for (int i = 0; i <= 18; ++i) worst = std::max(worst, recurrence_residual(fs, 0.5 + 0.25 * i));
      if (!check_domination(fs, 1e-2, 30.0 / std::sqrt(fs.tau())).holds) ++dom_fail;
    }
  }
  d.check(worst <= 1e-6, "recurrence residual " + fmt("%.1e", worst) + " <= 1e-6 over 10 mu, d=1..4");
  d.check(dom_fail == 0, "domination failures " + std::to_string(dom_fail) + " of 40");
}

Field random_smooth(const GridSpec& g, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  const double c1 = N(rng), c2 = N(rng), c3 = N(rng), c4 = N(rng), s = 1.0 + 0.5 * std::abs(N(rng));
  const double x0 = 0.5 * N(rng);
  return Field::sample(g, [&](const Point& p) {
    const double x = p[0] - x0;
    return std::exp(-x * x / (s * s)) * cplx(c1 + c2 * x, c3 + c4 * x * x);
  });
}

void c9(Detail& d) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 256, 20.0);
  const BoundState b = compute_bound_state(nl, 1.0, 0, g);
  const SolitonParams p{b, 0.2, {0.7}, {1.5}};
  const double t = 0.9;
  const Field gauge = kI * soliton_field(p, g, t);
  const Field trans = boost_field(p, gradient(b.profile)[0], t);
  const double rg = std::abs(coercivity_form(nl, p, t, gauge)) / std::pow(norm_h1(gauge), 2);
  const double rt = std::abs(coercivity_form(nl, p, t, trans)) / std::pow(norm_h1(trans), 2);
  d.check(rg <= 1e-6 && rt <= 1e-6, "gauge " + fmt("%.1e", rg) + ", translation " + fmt("%.1e", rt) + " <= 1e-6 relative");

  const CoercivityData cd = coercivity_data(nl, p, 0.5);
  const GridSpec g2(1, 512, 20.0);
  const BoundState b2 = compute_bound_state(nl, 1.0, 0, g2);
  const CoercivityData cd2 = coercivity_data(nl, SolitonParams{b2, 0.2, {0.7}, {1.5}}, 0.5);
  d.check(cd.negative_plus == 1 && cd2.negative_plus == 1 && cd.negative_minus == 0 && cd2.negative_minus == 0,
          "negative directions (+,-): n=256 (" + std::to_string(cd.negative_plus) + "," + std::to_string(cd.negative_minus) +
              "), n=512 (" + std::to_string(cd2.negative_plus) + "," + std::to_string(cd2.negative_minus) + ")");

  std::mt19937_64 rng(9);
  double cmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    Field z = random_smooth(g, rng);
    for (const Field& e : cd.directions) {
      // Real L2 projection of a packed R^2 field.
      const double c = inner_l2(e, z).real();
      z -= cplx(c) * e;
    }
    const Field w = boost_field(p, z, t);
    cmin = std::min(cmin, coercivity_form(nl, p, t, w) / std::pow(norm_h1(w), 2));
  }
  d.check(cmin > 0.0, "projected H0 / ||.||_H1^2 min " + fmt("%.3e", cmin) + " > 0 over 20 fields");
}

void c10(Detail& d) {
  const auto nl = Nonlinearity::pure_power(3.0, 1);
  const GridSpec g(1, 256, 20.0);
  const Field u0 = Field::sample(g, [](const Point& p) {
    return 1.2 / std::cosh(p[0]) * std::exp(kI * (0.3 * p[0]));
  });
  Integrator in;
  in.dt = 1e-3;
  const double m0 = mass(u0), e0 = energy(nl, u0);
  double dm = 0.0;
  std::vector<double> de(2, 0.0);
  const Trajectory tr = evolve(in, nl, u0, 1e4 * in.dt, {Observer{100, [&](const Field& u) {
                                                             dm = std::max(dm, std::abs(mass(u) - m0) / m0);
                                                             de[0] = std::max(de[0], std::abs(energy(nl, u) - e0));
                                                           }}});
  d.check(tr.steps == 10000 && dm <= 1e-10, "mass drift " + fmt("%.1e", dm) + " <= 1e-10 over 1e4 steps");
  Integrator half = in;
  half.dt = in.dt / 2.0;
  evolve(half, nl, u0, 1e4 * in.dt, {Observer{200, [&](const Field& u) { de[1] = std::max(de[1], std::abs(energy(nl, u) - e0)); }}});
  const double order = std::log2(de[0] / de[1]);
  d.check(order >= 1.8 && order <= 2.2, "energy drift order " + fmt("%.3f", order) + " in [1.8, 2.2]");
  const Field u1 = evolve(in, nl, u0, 2.0).final_state;
  Integrator back = in;
  back.direction = Direction::Backward;
  const Field u2 = evolve(back, nl, u1, 0.0).final_state;
  const double rt = norm_l2(u2 - u0) / norm_l2(u0);
  d.check(rt <= 1e-9, "forward-backward round trip " + fmt("%.1e", rt) + " <= 1e-9");
}

void c11(Detail& d) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  const int ensembles = 100, members = 5, dim = 3, samples = 1000000;
  std::vector<std::vector<double>> dirs(samples, std::vector<double>(dim));
  for (auto& e : dirs) {
    double n2 = 0.0;
    for (auto& x : e) {
      x = N(rng);
      n2 += x * x;
    }
    for (auto& x : e) x /= std::sqrt(n2);
  }
  const double alpha = ensemble_alpha(members, dim);
  int violations = 0, worse = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < ensembles; ++k) {
    std::vector<Vec> vs(members, Vec(dim));
    for (auto& v : vs)
      for (auto& x : v) x = 2.0 * N(rng);
    const DirectionResult r = select_direction(vs, alpha);
    for (int j = 0; j < members; ++j)
      for (int l = j + 1; l < members; ++l) {
        double dot = 0.0, n2 = 0.0;
        for (int a = 0; a < dim; ++a) {
          const double dv = vs[j][a] - vs[l][a];
          dot += dv * r.basis[0][a];
          n2 += dv * dv;
        }
        if (std::abs(dot) < alpha * std::sqrt(n2)) ++violations;
      }
    std::vector<Vec> units;
    for (int j = 0; j < members; ++j)
      for (int l = j + 1; l < members; ++l) {
        Vec u(dim);
        double n2 = 0.0;
        for (int a = 0; a < dim; ++a) {
          u[a] = vs[j][a] - vs[l][a];
          n2 += u[a] * u[a];
        }
        for (auto& x : u) x /= std::sqrt(n2);
        units.push_back(std::move(u));
      }
    double brute = 0.0;
    for (const auto& e : dirs) {
      double m = 1.0;
      for (const auto& u : units) m = std::min(m, std::abs(u[0] * e[0] + u[1] * e[1] + u[2] * e[2]));
      brute = std::max(brute, m);
    }
    if (r.score < brute) ++worse;
    worst_ratio = std::min(worst_ratio, r.score / brute);
  }
  d.check(violations == 0, "pair violations " + std::to_string(violations) + " at alpha " + fmt("%.4f", alpha));
  d.check(worse == 0, "score below 1e6-sample brute force in " + std::to_string(worse) + " of 100 (min ratio " +
                          fmt("%.5f", worst_ratio) + ")");
}

struct Spec {
  const char* name;
  double limit;
  void (*fn)(Detail&);
};

const Spec kSpecs[kCriteria] = {
    {"bound-state fidelity", 10.0, c1},
    {"spectral symmetry", 60.0, c2},
    {"linear-flow identity", 0.0, c3},
    {"profile residual rates", 300.0, c4},
    {"nonlinear expansion order", 0.0, c5},
    {"backward construction", 600.0, c6},
    {"instability growth", 300.0, c7},
    {"fundamental solutions", 10.0, c8},
    {"coercivity", 0.0, c9},
    {"conservation and integrator order", 0.0, c10},
    {"direction selection", 0.0, c11},
};

}  // namespace

CriterionResult run_criterion(int id) {
  require(id >= 1 && id <= kCriteria, "criterion id out of range");
  const Spec& s = kSpecs[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = s.name;
  r.time_limit = s.limit;
  Detail d;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    s.fn(d);
    r.passed = d.ok;
    r.detail = d.os.str();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = d.os.str() + (d.os.tellp() > 0 ? "; " : "") + "error: " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.time_limit > 0.0 && r.seconds > r.time_limit) {
    r.passed = false;
    r.detail += "; runtime over " + fmt("%.0f", r.time_limit) + " s";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream* out) {
  std::vector<int> todo = ids;
  if (todo.empty())
    for (int i = 1; i <= kCriteria; ++i) todo.push_back(i);
  std::vector<CriterionResult> rs;
  for (int id : todo) {
    rs.push_back(run_criterion(id));
    if (out) *out << format_line(rs.back()) << std::endl;
  }
  return rs;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " ("
     << fmt("%.1f", r.seconds) << " s";
  if (r.time_limit > 0.0) os << ", limit " << fmt("%.0f", r.time_limit) << " s";
  os << ")";
  return os.str();
}

}  // namespace mslab
