#include "mslab/instability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mslab/error.hpp"
#include "mslab/spectral.hpp"

namespace mslab {
namespace {

constexpr cplx kI{0.0, 1.0};

bool at_rest(const SolitonParams& p) {
  for (double x : p.velocity())
    if (x != 0.0) return false;
  for (double x : p.position())
    if (x != 0.0) return false;
  return p.gamma == 0.0;
}

// conj(e^{i omega S}(Phi + W(S))) e^{i omega S} = Phi + conj(W(S)).
Field reversed_start(const BoundState& b, const Profile& profile, double S) {
  return (b.profile + profile.W(S).conj()).with_time(0.0);
}

LinearFit growth_fit(const std::vector<double>& t, const std::vector<double>& y, double cap,
                     std::size_t& window) {
  std::vector<double> x, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    if (y[i] >= cap) break;
    x.push_back(t[i]);
    ly.push_back(std::log(y[i]));
  }
  window = x.size();
  if (x.size() < 3) return {};
  return fit_linear(x, ly);
}

}  // namespace

InstabilityResult instability_run(const Nonlinearity& nl, const SolitonParams& p1,
                                  const Spectrum& spec, const Profile& profile,
                                  const Integrator& intg, const InstabilityOptions& opt) {
  validate(p1);
  require(spec.rho > 0.0, "instability runs need an unstable eigenvalue");
  require(at_rest(p1), "the unstable soliton must be at rest at the origin with zero phase");
  require(opt.S > opt.T0, "S must exceed T0");
  const BoundState& b = p1.state;
  require_same_grid(b.profile.grid(), profile.grid);
  const double w = b.omega, S = opt.S;
  const double cap = opt.saturation * norm_h1(b.profile);

  InstabilityResult out;
  const cplx back_phase = std::exp(kI * (w * S));
  auto record = [&](const Field& un) {
    InstabilitySample s;
    s.t = un.time();
    s.s = S - s.t;
    const Field R1 = std::exp(kI * (w * s.t)) * b.profile;
    s.distance = family_distance(un, b).dist;
    s.perturbation = norm_h1(un - R1);
    const Field u = (back_phase * un.conj()).with_time(s.s);
    const Field Rt = std::exp(kI * (w * s.s)) * b.profile;
    const Field Y = build_Y(spec, s.s);
    s.remainder = norm_h1(u - Rt - (profile.a * std::exp(kI * (w * s.s))) * Y);
    s.y_norm = norm_h1(Y);
    if (opt.keep_states) out.states.push_back(u);
    out.samples.push_back(s);
  };

  Integrator fwd = intg;
  fwd.direction = Direction::Forward;
  try {
    evolve(fwd, nl, reversed_start(b, profile, S), S - opt.T0, {Observer{opt.stride, record}});
  } catch (const BlowUpError& e) {
    out.blew_up = true;
    out.note = e.what();
  }

  std::vector<double> t, y;
  for (const auto& s : out.samples) {
    t.push_back(s.t);
    y.push_back(s.perturbation);
  }
  out.growth = growth_fit(t, y, cap, out.window);
  out.fitted_rate = out.growth.slope;
  return out;
}

SeparationCheck separation_check(const InstabilityResult& a, double amp_a, const InstabilityResult& b,
                                 double amp_b, double rho) {
  require(a.states.size() == a.samples.size() && b.states.size() == b.samples.size(),
          "separation check needs runs with stored states");
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  SeparationCheck out;
  for (const auto* r : {&a, &b})
    for (std::size_t i = 0; i < n; ++i)
      out.C = std::max(out.C, r->samples[i].remainder * std::exp(2.0 * rho * r->samples[i].s));
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    require(std::abs(a.samples[i].s - b.samples[i].s) <= 1e-9, "runs are on different time grids");
    const double s = a.samples[i].s;
    const double lhs = norm_h1(a.states[i] - b.states[i]);
    const double rhs = std::abs(amp_a - amp_b) * a.samples[i].y_norm - 2.0 * out.C * std::exp(-2.0 * rho * s);
    out.worst_margin = std::min(out.worst_margin, lhs - rhs);
  }
  out.samples = n;
  out.holds = n > 0 && out.worst_margin >= 0.0;
  return out;
}

double initial_interaction(const EnsembleConfig& cfg) {
  const GridSpec& g = cfg.grid();
  const Field R1 = soliton_field(cfg.solitons[0], g, 0.0);
  double eta = 0.0;
  for (std::size_t j = 1; j < cfg.size(); ++j)
    eta += norm_l2(pointwise_product(R1, soliton_field(cfg.solitons[j], g, 0.0)));
  return eta;
}

GluedResult glued_instability_run(const EnsembleConfig& cfg, const Nonlinearity& nl,
                                  const Spectrum& spec, const Profile& profile,
                                  const Integrator& intg, const GluedOptions& opt) {
  validate(cfg);
  require(spec.rho > 0.0, "instability runs need an unstable eigenvalue");
  const auto& ps = cfg.solitons;
  require(at_rest(ps[0]), "soliton 0 must be at rest at the origin with zero phase");
  require(opt.base.S > opt.base.T0, "S must exceed T0");
  const GridSpec& g = cfg.grid();
  const BoundState& b = ps[0].state;
  require_same_grid(g, profile.grid);

  double wmin = ps[0].omega();
  for (const auto& p : ps) wmin = std::min(wmin, p.omega());
  const double M = opt.ball_radius > 0.0 ? opt.ball_radius : 6.0 / std::sqrt(wmin);
  const double cap = opt.base.saturation * norm_h1(b.profile);

  GluedResult out;
  bool overlap_warned = false;
  auto record = [&](const Field& u) {
    GluedSample s;
    s.t = u.time();
    Field others = Field::zeros(g, s.t);
    for (std::size_t j = 1; j < ps.size(); ++j) others += soliton_field(ps[j], g, s.t);
    const Field ut = u - others;
    for (std::size_t j = 1; j < ps.size(); ++j)
      s.interaction += norm_l2(pointwise_product(ut, soliton_field(ps[j], g, s.t)));
    s.perturbation = norm_h1(u - soliton_sum(ps, g, s.t));
    s.family = multi_family_distance(u, ps, s.t, M).dist;
    if (!overlap_warned)
      for (std::size_t j = 0; j < ps.size() && !overlap_warned; ++j)
        for (std::size_t k = j + 1; k < ps.size(); ++k) {
          const auto cj = ps[j].center(s.t), ck = ps[k].center(s.t);
          double d2 = 0.0;
          for (std::size_t a = 0; a < cj.size(); ++a) d2 += (cj[a] - ck[a]) * (cj[a] - ck[a]);
          if (std::sqrt(d2) < 2.0 * M) {
            std::ostringstream os;
            os << "family balls of solitons " << j << " and " << k << " overlap at t=" << s.t;
            out.warnings.push_back(os.str());
            overlap_warned = true;
            break;
          }
        }
    out.samples.push_back(s);
  };

  Field u0 = reversed_start(b, profile, opt.base.S);
  for (std::size_t j = 1; j < ps.size(); ++j) u0 += soliton_field(ps[j], g, 0.0);
  Integrator fwd = intg;
  fwd.direction = Direction::Forward;
  try {
    evolve(fwd, nl, u0, opt.base.S - opt.base.T0, {Observer{opt.base.stride, record}});
  } catch (const BlowUpError& e) {
    out.blew_up = true;
    out.warnings.push_back(e.what());
  }

  std::vector<double> t, y;
  for (const auto& s : out.samples) {
    t.push_back(s.t);
    y.push_back(s.perturbation);
  }
  out.growth = growth_fit(t, y, cap, out.window);
  out.fitted_rate = out.growth.slope;
  return out;
}

}  // namespace mslab
