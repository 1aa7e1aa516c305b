#include "mslab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "mslab/boundstate.hpp"
#include "mslab/error.hpp"
#include "mslab/fit.hpp"
#include "mslab/fundamental.hpp"
#include "mslab/instability.hpp"
#include "mslab/linearization.hpp"
#include "mslab/profile.hpp"
#include "mslab/spectral.hpp"

namespace mslab {

void SeriesTable::add(std::vector<double> row) {
  require(row.size() == columns.size(), "series row width does not match its columns");
  rows.push_back(std::move(row));
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"boundstate", "spectrum", "profile", "backward",
                                              "instability", "glued", "fundsol-check"};
  return names;
}

namespace {

constexpr double kBig = 1e300;

[[noreturn]] void key_error(const RunConfig& cfg, const std::string& key, const std::string& what) {
  const auto it = cfg.values().find(key);
  if (it == cfg.values().end()) throw ConfigError(key, 0, 0, what);
  throw ConfigError(key, it->second.line, it->second.column, what);
}

FitRecord to_record(const RateFit& f) { return {f.rate, f.intercept, f.r2}; }
FitRecord to_record(const LinearFit& f) { return {f.slope, f.intercept, f.r2}; }

std::vector<double> vector_key(const RunConfig& cfg, const std::string& key, int dim) {
  std::vector<double> v = cfg.get_doubles(key, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  if (static_cast<int>(v.size()) != dim) {
    const auto& cv = cfg.values().at(key);
    throw ConfigError(key, cv.line, cv.column, "expected " + std::to_string(dim) + " components");
  }
  return v;
}

Integrator config_integrator(const RunConfig& cfg) {
  Integrator in;
  in.dt = cfg.get_double("run.dt", 1e-3, 1e-7, 1.0);
  in.dealias = cfg.get_bool("run.dealias", false);
  return in;
}

std::size_t config_stride(const RunConfig& cfg, long fallback) {
  return static_cast<std::size_t>(cfg.get_int("run.stride", fallback, 1, 1000000));
}

double config_omega(const RunConfig& cfg) {
  const double w = cfg.get_double("state.omega", 1.0, 0.0, 100.0);
  if (w <= 0.0) key_error(cfg, "state.omega", "must be positive");
  return w;
}

int config_nodes(const RunConfig& cfg) { return static_cast<int>(cfg.get_int("state.nodes", 0, 0, 8)); }

struct Unstable {
  BoundState b;
  BlockOperator op;
  Spectrum spec;
};

Unstable unstable_state(const Nonlinearity& nl, const BoundState& b) {
  BlockOperator op = assemble(nl, b);
  SpectrumOptions so;
  so.all_residuals = false;
  Spectrum spec = spectrum(op, 0, so);
  if (!(spec.rho > 0.0)) fail(ErrorKind::SpectralMaximality, "the bound state has no unstable eigenvalue");
  return {b, std::move(op), std::move(spec)};
}

void run_boundstate(const RunConfig& cfg, RunResult& out, const std::filesystem::path& art) {
  const Nonlinearity nl = config_nonlinearity(cfg);
  const GridSpec g = config_grid(cfg);
  const double w = config_omega(cfg);
  const BoundState b = compute_bound_state(nl, w, config_nodes(cfg), g);
  out.values["residual_linf"] = b.residual_linf;
  out.values["action"] = b.action;
  out.values["node_count"] = b.node_count;
  out.values["newton_iterations"] = b.newton_iterations;
  out.values["max_abs"] = b.profile.max_abs();
  out.values["mass"] = mass(b.profile);

  const bool cubic_line = g.dim() == 1 && std::holds_alternative<PurePower>(nl.kind()) &&
                          std::get<PurePower>(nl.kind()).p == 3.0 && b.node_count == 0;
  SeriesTable ray{{"x", "re", "im"}, {}};
  std::size_t stride_rest = 1, centre = 0;
  for (int a = 1; a < g.dim(); ++a) stride_rest *= g.n();
  for (int a = 1; a < g.dim(); ++a) centre = centre * g.n() + g.n() / 2;
  double exact_err = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const cplx z = b.profile[i * stride_rest + centre];
    const double x = g.coord(i);
    ray.add({x, z.real(), z.imag()});
    if (cubic_line) exact_err = std::max(exact_err, std::abs(z - std::sqrt(2.0 * w) / std::cosh(std::sqrt(w) * x)));
  }
  if (cubic_line) out.values["exact_linf_error"] = exact_err;
  out.series["profile"] = std::move(ray);
  if (!art.empty()) {
    write_bound_state(art / "boundstate", b);
    out.artifacts.push_back("boundstate");
  }
}

void run_spectrum(const RunConfig& cfg, RunResult& out, const std::filesystem::path& art) {
  const Nonlinearity nl = config_nonlinearity(cfg);
  const GridSpec g = config_grid(cfg);
  const BoundState b = compute_bound_state(nl, config_omega(cfg), config_nodes(cfg), g);
  const BlockOperator op = assemble(nl, b);
  SpectrumOptions so;
  so.all_residuals = cfg.get_bool("spectrum.residuals", true);
  const std::string mode = cfg.get_string("spectrum.mode", "auto");
  if (mode == "dense") {
    so.mode = SpectrumOptions::Mode::Dense;
  } else if (mode == "shift-invert") {
    so.mode = SpectrumOptions::Mode::ShiftInvert;
  } else if (mode != "auto") {
    key_error(cfg, "spectrum.mode", "expected auto, dense or shift-invert");
  }
  const int count = static_cast<int>(cfg.get_int("spectrum.count", 0, 0, 100000));
  const Spectrum s = spectrum(op, count, so);
  SeriesTable t{{"re", "im", "residual"}, {}};
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    t.add({s.eigenvalues[i].real(), s.eigenvalues[i].imag(), i < s.residuals.size() ? s.residuals[i] : NAN});
  out.series["eigenvalues"] = std::move(t);
  out.values["rho"] = s.rho;
  out.values["theta"] = s.theta;
  out.values["Z_residual"] = s.Z_residual;
  out.values["eigenvalue_count"] = static_cast<double>(s.eigenvalues.size());
  if (cfg.get_bool("spectrum.decay_fit", false)) {
    const DecayFit f = decay_rate_fit(s.Z);
    out.fits["mode_decay"] = {f.alpha, std::log(f.C), f.r2};
  }
  if (!art.empty() && s.rho > 0.0) {
    write_mode(art / "mode.nlsf", s.Z);
    out.artifacts.push_back("mode.nlsf");
  }
}

void run_profile(const RunConfig& cfg, RunResult& out, const std::filesystem::path& art) {
  const Nonlinearity nl = config_nonlinearity(cfg);
  const GridSpec g = config_grid(cfg);
  const Unstable u = unstable_state(nl, compute_bound_state(nl, config_omega(cfg), config_nodes(cfg), g));
  const int N0 = static_cast<int>(cfg.get_int("profile.N0", 3, 1, 6));
  const double a = cfg.get_double("profile.a", 1.0, -10.0, 10.0);
  const int samples = static_cast<int>(cfg.get_int("profile.samples", 21, 3, 10000));
  const double t_lo = cfg.get_double("profile.t_min", 2.0, 0.0, 1e3);
  const double t_hi = cfg.get_double("profile.t_max", 5.0, 0.0, 1e3);
  if (t_hi <= t_lo) key_error(cfg, "profile.t_max", "must exceed profile.t_min");
  const Profile p = build_profile(nl, u.b, u.op, u.spec, N0, a);
  const double rho = u.spec.rho;
  out.values["rho"] = rho;
  out.values["theta"] = u.spec.theta;
  double worst_level = 0.0;
  for (double r : p.level_residual) worst_level = std::max(worst_level, r);
  out.values["level_residual_max"] = worst_level;

  SeriesTable t{{"t", "err_l2", "w_minus_ay_l2"}, {}};
  std::vector<double> ts, es, ws;
  for (int i = 0; i < samples; ++i) {
    const double tt = (t_lo + (t_hi - t_lo) * i / (samples - 1)) / rho;
    ts.push_back(tt);
    es.push_back(norm_l2(residual_err(p, u.b, nl, tt)));
    ws.push_back(norm_l2(p.W(tt) - a * build_Y(u.spec, tt)));
    t.add({tt, es.back(), ws.back()});
  }
  out.series["residual"] = std::move(t);
  out.fits["err_decay"] = to_record(fit_decay_rate(ts, es));
  out.values["err_rate_over_rho"] = out.fits["err_decay"].rate / rho;
  if (N0 >= 2) {
    out.fits["w_minus_ay_decay"] = to_record(fit_decay_rate(ts, ws));
    out.values["w_minus_ay_rate_over_rho"] = out.fits["w_minus_ay_decay"].rate / rho;
  }
  if (!art.empty()) {
    write_profile(art / "profile", p);
    out.artifacts.push_back("profile");
  }
}

void run_backward(const RunConfig& cfg, RunResult& out) {
  const Nonlinearity nl = config_nonlinearity(cfg);
  const GridSpec g = config_grid(cfg);
  const EnsembleConfig ens = config_ensemble(cfg, nl, g);
  const Integrator in = config_integrator(cfg);
  const double T0 = cfg.get_double("ensemble.T0", 1.0, 0.0, 1e6);
  const double Tn = cfg.get_double("ensemble.Tn", T0 + 10.0, 0.0, 1e6);
  if (Tn <= T0) key_error(cfg, "ensemble.Tn", "must exceed ensemble.T0");
  BackwardOptions opt;
  opt.stride = config_stride(cfg, 50);
  opt.localized = cfg.get_bool("backward.localized", false);
  if (cfg.get_bool("backward.floor", true)) {
    const double floor = discretization_floor(ens, nl, in, Tn, T0, opt.stride);
    out.values["discretization_floor"] = floor;
    opt.fit_floor = std::max(opt.fit_floor, 100.0 * floor);
  }
  opt.fit_floor = cfg.get_double("backward.fit_floor", opt.fit_floor, 0.0, 1.0);
  out.values["fit_floor"] = opt.fit_floor;
  const BackwardResult r = backward_construct(ens, nl, in, Tn, T0, opt);
  SeriesTable t{{"t", "error_l2", "error_h1", "mass", "energy"}, {}};
  for (const auto& s : r.samples) t.add({s.t, s.error_l2, s.error_h1, s.mass, s.energy});
  out.series["backward"] = std::move(t);
  if (opt.localized && !r.samples.empty()) {
    std::vector<std::string> cols{"t"};
    for (std::size_t j = 0; j < ens.size(); ++j) {
      cols.push_back("M" + std::to_string(j));
      cols.push_back("S" + std::to_string(j));
    }
    SeriesTable loc{cols, {}};
    for (const auto& s : r.samples) {
      std::vector<double> row{s.t};
      for (std::size_t j = 0; j < ens.size(); ++j) {
        row.push_back(s.local_mass.at(j));
        row.push_back(s.local_action.at(j));
      }
      loc.add(std::move(row));
    }
    out.series["localized"] = std::move(loc);
  }
  out.fits["error_decay"] = to_record(r.error_fit);
  const double rate = uniform_bound_rate(ens);
  out.values["bound_rate"] = rate;
  out.values["bound_sup"] = r.bound_sup;
  out.values["bound_holds"] = r.bound_sup <= 1.0 ? 1.0 : 0.0;
  out.values["v_star"] = ens.v_star;
  out.values["omega_star"] = ens.omega_star;
  out.values["alpha"] = ens.alpha;
  if (!r.samples.empty()) {
    const double m0 = r.samples.front().mass, e0 = r.samples.front().energy;
    double dm = 0.0, de = 0.0;
    for (const auto& s : r.samples) {
      dm = std::max(dm, std::abs(s.mass - m0) / std::abs(m0));
      de = std::max(de, std::abs(s.energy - e0) / std::max(1.0, std::abs(e0)));
    }
    out.values["mass_drift"] = dm;
    out.values["energy_drift"] = de;
  }
  for (const auto& w : r.warnings) out.error += (out.error.empty() ? "" : "; ") + w;
}

void instability_series(const InstabilityResult& r, double rho, RunResult& out) {
  SeriesTable t{{"t", "s", "distance", "perturbation", "remainder", "y_norm"}, {}};
  std::vector<double> s, rem;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& x = r.samples[i];
    t.add({x.t, x.s, x.distance, x.perturbation, x.remainder, x.y_norm});
    if (i < r.window && x.remainder > 0.0) {
      s.push_back(x.s);
      rem.push_back(x.remainder);
    }
  }
  out.series["instability"] = std::move(t);
  out.fits["growth"] = to_record(r.growth);
  out.values["rho"] = rho;
  out.values["fitted_rate"] = r.fitted_rate;
  out.values["rate_over_rho"] = r.fitted_rate / rho;
  out.values["window"] = static_cast<double>(r.window);
  out.values["blew_up"] = r.blew_up ? 1.0 : 0.0;
  if (s.size() >= 3) out.fits["remainder_decay"] = to_record(fit_decay_rate(s, rem));
  double dmax = 0.0;
  for (const auto& x : r.samples) dmax = std::max(dmax, x.distance);
  out.values["max_distance"] = dmax;
}

void run_instability(const RunConfig& cfg, RunResult& out) {
  const Nonlinearity nl = config_nonlinearity(cfg);
  const GridSpec g = config_grid(cfg);
  const Unstable u = unstable_state(nl, compute_bound_state(nl, config_omega(cfg), config_nodes(cfg), g));
  const int N0 = static_cast<int>(cfg.get_int("profile.N0", 3, 1, 6));
  const double a = cfg.get_double("profile.a", 0.1, -10.0, 10.0);
  const Profile p = build_profile(nl, u.b, u.op, u.spec, N0, a);
  InstabilityOptions opt;
  opt.S = cfg.get_double("instability.S", 2.3, 0.0, 1e4);
  opt.T0 = cfg.get_double("instability.T0", 0.3, 0.0, 1e4);
  if (opt.S <= opt.T0) key_error(cfg, "instability.S", "must exceed instability.T0");
  opt.stride = config_stride(cfg, 20);
  opt.saturation = cfg.get_double("instability.saturation", 0.1, 1e-6, 1.0);
  const InstabilityResult r = instability_run(nl, SolitonParams{u.b, 0.0, {}, {}}, u.spec, p, config_integrator(cfg), opt);
  instability_series(r, u.spec.rho, out);
  out.values["a"] = a;
  if (r.blew_up) out.error = r.note;
}

void run_glued(const RunConfig& cfg, RunResult& out) {
  const Nonlinearity nl = config_nonlinearity(cfg);
  const GridSpec g = config_grid(cfg);
  const EnsembleConfig ens = config_ensemble(cfg, nl, g);
  const Unstable u = unstable_state(nl, ens.solitons.at(0).state);
  const int N0 = static_cast<int>(cfg.get_int("profile.N0", 3, 1, 6));
  const double a = cfg.get_double("profile.a", 0.1, -10.0, 10.0);
  const Profile p = build_profile(nl, u.b, u.op, u.spec, N0, a);
  GluedOptions opt;
  opt.base.S = cfg.get_double("instability.S", 2.3, 0.0, 1e4);
  opt.base.T0 = cfg.get_double("instability.T0", 0.3, 0.0, 1e4);
  if (opt.base.S <= opt.base.T0) key_error(cfg, "instability.S", "must exceed instability.T0");
  opt.base.stride = config_stride(cfg, 20);
  opt.base.saturation = cfg.get_double("instability.saturation", 0.1, 1e-6, 1.0);
  opt.ball_radius = cfg.get_double("glued.ball_radius", 0.0, 0.0, 1e3);
  const GluedResult r = glued_instability_run(ens, nl, u.spec, p, config_integrator(cfg), opt);
  SeriesTable t{{"t", "interaction", "family", "perturbation"}, {}};
  double fmax = 0.0;
  for (const auto& s : r.samples) {
    t.add({s.t, s.interaction, s.family, s.perturbation});
    fmax = std::max(fmax, s.family);
  }
  out.series["glued"] = std::move(t);
  out.fits["growth"] = to_record(r.growth);
  out.values["rho"] = u.spec.rho;
  out.values["fitted_rate"] = r.fitted_rate;
  out.values["rate_over_rho"] = r.fitted_rate / u.spec.rho;
  out.values["window"] = static_cast<double>(r.window);
  out.values["initial_interaction"] = initial_interaction(ens);
  out.values["max_family_distance"] = fmax;
  out.values["blew_up"] = r.blew_up ? 1.0 : 0.0;
  for (const auto& w : r.warnings) out.error += (out.error.empty() ? "" : "; ") + w;
}

void run_fundsol(const RunConfig& cfg, RunResult& out) {
  const long samples = cfg.get_int("fundsol.samples", 10, 0, 100000);
  const double r_min = cfg.get_double("fundsol.r_min", 0.5, 1e-6, 1e3);
  const double r_max = cfg.get_double("fundsol.r_max", 5.0, 1e-6, 1e3);
  if (r_max <= r_min) key_error(cfg, "fundsol.r_max", "must exceed fundsol.r_min");
  const int dmax = static_cast<int>(cfg.get_int("fundsol.max_dim", 3, 1, 9));
  const double mu_max = cfg.get_double("fundsol.mu_max", 3.0, 1e-3, 1e3);
  const double tol = cfg.get_double("fundsol.tolerance", 1e-6, 0.0, 1.0);

  double closed1 = 0.0, closed3 = 0.0;
  const FundamentalSolution g1(1, -1.0), g3(3, -1.0);
  SeriesTable closed{{"r", "err_d1", "err_d3"}, {}};
  for (int i = 0; i <= 40; ++i) {
    const double r = r_min * std::pow(r_max / r_min, i / 40.0);
    const double e1 = std::abs(g1(r) - 0.5 * std::exp(-r));
    const double e3 = std::abs(g3(r) - std::exp(-r) / (4.0 * M_PI * r));
    closed1 = std::max(closed1, e1);
    closed3 = std::max(closed3, e3);
    closed.add({r, e1, e3});
  }
  out.series["closed_forms"] = std::move(closed);
  out.values["closed_form_error_d1"] = closed1;
  out.values["closed_form_error_d3"] = closed3;

  std::mt19937_64 rng(cfg.seed());
  std::uniform_real_distribution<double> U(-mu_max, mu_max);
  SeriesTable rec{{"dim", "mu_re", "mu_im", "r", "residual"}, {}};
  SeriesTable dom{{"dim", "mu_re", "mu_im", "tau", "C", "tail_growth", "holds"}, {}};
  double worst = 0.0;
  int failures = 0, dom_failures = 0;
  for (long k = 0; k < samples; ++k) {
    cplx mu(U(rng), U(rng));
    if (std::abs(mu.imag()) < 1e-3) mu.imag(1e-3);
    for (int d = 1; d <= dmax; ++d) {
      const FundamentalSolution fs(d, mu);
      for (int i = 0; i <= 10; ++i) {
        const double r = r_min + (r_max - r_min) * i / 10.0;
        const double res = recurrence_residual(fs, r);
        worst = std::max(worst, res);
        if (!(res <= tol)) ++failures;
        rec.add({static_cast<double>(d), mu.real(), mu.imag(), r, res});
      }
      const DominationCheck dc = check_domination(fs, 1e-2, 30.0 / std::sqrt(fs.tau()));
      if (!dc.holds) ++dom_failures;
      dom.add({static_cast<double>(d), mu.real(), mu.imag(), dc.tau, dc.C, dc.tail_growth, dc.holds ? 1.0 : 0.0});
    }
  }
  out.series["recurrence"] = std::move(rec);
  out.series["domination"] = std::move(dom);
  out.values["max_recurrence_residual"] = worst;
  out.values["recurrence_failures"] = failures;
  out.values["domination_failures"] = dom_failures;
  if (failures > 0) out.error = std::to_string(failures) + " recurrence residuals above tolerance";
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_number(x);
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) fail(ErrorKind::Io, "cannot write " + p.string());
  os << text;
  if (!os) fail(ErrorKind::Io, "write failed for " + p.string());
}

std::string series_csv(const SeriesTable& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_number(row[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace

Nonlinearity config_nonlinearity(const RunConfig& cfg) {
  const int dim = static_cast<int>(cfg.get_int("run.dim", 1, 1, 3));
  const std::string kind = cfg.get_string("nonlinearity.kind", "power");
  if (kind == "power") return Nonlinearity::pure_power(cfg.get_double("nonlinearity.p", 3.0, 1.0, 50.0), dim);
  if (kind == "cubic-quintic")
    return Nonlinearity::cubic_quintic(cfg.get_double("nonlinearity.c3", 1.0, -kBig, kBig),
                                       cfg.get_double("nonlinearity.c5", -0.1, -kBig, kBig), dim);
  const auto& v = cfg.values().at("nonlinearity.kind");
  throw ConfigError("nonlinearity.kind", v.line, v.column, "expected power or cubic-quintic");
}

GridSpec config_grid(const RunConfig& cfg) {
  const int dim = static_cast<int>(cfg.get_int("run.dim", 1, 1, 3));
  const long n = cfg.get_int("run.n", 256, 8, 8192);
  if (n % 2 != 0) key_error(cfg, "run.n", "must be even");
  const double box = cfg.get_double("run.box", 20.0, 1e-3, 1e5);
  return GridSpec(dim, static_cast<std::size_t>(n), box);
}

EnsembleConfig config_ensemble(const RunConfig& cfg, const Nonlinearity& nl, const GridSpec& g) {
  const std::size_t N = cfg.count_indexed("ensemble.solitons");
  if (N == 0) key_error(cfg, "ensemble.solitons", "at least one soliton is required");
  std::vector<std::pair<std::pair<double, int>, BoundState>> cache;
  std::vector<SolitonParams> ps;
  for (std::size_t j = 0; j < N; ++j) {
    const std::string pre = "ensemble.solitons[" + std::to_string(j) + "].";
    const double w = cfg.get_double(pre + "omega", cfg.get_double("state.omega", 1.0), 0.0, 100.0);
    if (w <= 0.0) key_error(cfg, pre + "omega", "must be positive");
    const int nodes = static_cast<int>(cfg.get_int(pre + "nodes", config_nodes(cfg), 0, 8));
    auto it = std::find_if(cache.begin(), cache.end(), [&](const auto& c) { return c.first == std::make_pair(w, nodes); });
    if (it == cache.end()) {
      cache.push_back({{w, nodes}, compute_bound_state(nl, w, nodes, g)});
      it = cache.end() - 1;
    }
    SolitonParams p{it->second, 0.0, {}, {}};
    p.gamma = cfg.get_double(pre + "gamma", 0.0, -kBig, kBig);
    p.v = vector_key(cfg, pre + "v", g.dim());
    p.x0 = vector_key(cfg, pre + "x0", g.dim());
    ps.push_back(std::move(p));
  }
  return EnsembleConfig::make(std::move(ps));
}

void check_config(const RunConfig& cfg) {
  const std::string e = cfg.experiment();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), e) == names.end()) {
    const auto& v = cfg.values().at("experiment");
    throw ConfigError("experiment", v.line, v.column, "unknown experiment '" + e + "'");
  }
  config_nonlinearity(cfg);
  config_grid(cfg);
  config_integrator(cfg);
  cfg.seed();
  if (e == "backward" || e == "glued") {
    cfg.get_double("ensemble.T0", 1.0, 0.0, 1e6);
    cfg.get_double("ensemble.Tn", 11.0, 0.0, 1e6);
    if (cfg.count_indexed("ensemble.solitons") == 0)
      key_error(cfg, "ensemble.solitons", "at least one soliton is required");
  }
}

RunResult run_experiment(const RunConfig& cfg, const std::filesystem::path& artifact_dir) {
  check_config(cfg);
  RunResult out;
  out.experiment = cfg.experiment();
  out.config_hash = cfg.hash();
  try {
    const std::string& e = out.experiment;
    if (e == "boundstate") run_boundstate(cfg, out, artifact_dir);
    else if (e == "spectrum") run_spectrum(cfg, out, artifact_dir);
    else if (e == "profile") run_profile(cfg, out, artifact_dir);
    else if (e == "backward") run_backward(cfg, out);
    else if (e == "instability") run_instability(cfg, out);
    else if (e == "glued") run_glued(cfg, out);
    else run_fundsol(cfg, out);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    out.status = "error";
    out.error = ex.what();
  }
  return out;
}

std::string summary_csv(const RunResult& r) {
  std::ostringstream os;
  os << "key,value\n";
  os << "experiment," << r.experiment << '\n';
  os << "config_hash," << r.config_hash << '\n';
  os << "status," << r.status << '\n';
  os << "error," << csv_text(r.error) << '\n';
  for (const auto& [k, f] : r.fits) {
    os << "fit." << k << ".rate," << csv_number(f.rate) << '\n';
    os << "fit." << k << ".intercept," << csv_number(f.intercept) << '\n';
    os << "fit." << k << ".r2," << csv_number(f.r2) << '\n';
  }
  for (const auto& [k, v] : r.values) os << "value." << k << ',' << csv_number(v) << '\n';
  for (const auto& a : r.artifacts) os << "artifact," << csv_text(a.generic_string()) << '\n';
  return os.str();
}

void write_result(const std::filesystem::path& dir, const RunResult& r) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, t] : r.series) write_text(dir / (name + ".csv"), series_csv(t));
  write_text(dir / "summary.csv", summary_csv(r));
}

bool sweepable(const RunConfig& cfg, const std::string& axis) {
  if (axis == "a" || axis == "profile.a") return true;
  if (axis == "v_star") return cfg.count_indexed("ensemble.solitons") >= 2;
  if (!cfg.has(axis)) return false;
  const auto& v = cfg.values().at(axis);
  if (v.is_list) return false;
  try {
    cfg.get_double(axis);
    return true;
  } catch (const ConfigError&) {
    return false;
  }
}

RunConfig apply_axis(const RunConfig& cfg, const std::string& axis, double value) {
  if (!sweepable(cfg, axis)) key_error(cfg, axis, "not a sweepable key");
  RunConfig out = cfg;
  if (axis == "a" || axis == "profile.a") {
    out.set("profile.a", value);
    return out;
  }
  if (axis != "v_star") {
    out.set(axis, value);
    return out;
  }
  if (!(value > 0.0)) key_error(cfg, "v_star", "v_star values must be positive");
  const std::size_t N = cfg.count_indexed("ensemble.solitons");
  const int dim = static_cast<int>(cfg.get_int("run.dim", 1, 1, 3));
  std::vector<std::vector<double>> v;
  for (std::size_t j = 0; j < N; ++j)
    v.push_back(vector_key(cfg, "ensemble.solitons[" + std::to_string(j) + "].v", dim));
  double gap = kBig;
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = j + 1; k < N; ++k) {
      double d2 = 0.0;
      for (int a = 0; a < dim; ++a) d2 += (v[j][a] - v[k][a]) * (v[j][a] - v[k][a]);
      gap = std::min(gap, std::sqrt(d2));
    }
  if (!(gap > 0.0)) key_error(cfg, "v_star", "cannot rescale coinciding velocities");
  const double scale = value / (gap / 9.0);
  for (std::size_t j = 0; j < N; ++j) {
    std::vector<std::string> items;
    for (double x : v[j]) items.push_back(format_number(x * scale));
    out.set_list("ensemble.solitons[" + std::to_string(j) + "].v", items);
  }
  return out;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& axis,
                                const std::vector<double>& values, unsigned workers,
                                const std::filesystem::path& out_dir) {
  std::vector<SweepRow> rows(values.size());
  if (values.empty()) return rows;
  std::vector<RunConfig> jobs;
  for (double v : values) jobs.push_back(apply_axis(cfg, axis, v));
  for (const auto& j : jobs) check_config(j);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(values.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      rows[i].value = values[i];
      const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path{} : out_dir / ("job" + std::to_string(i));
      try {
        if (!dir.empty()) std::filesystem::create_directories(dir);
        rows[i].result = run_experiment(jobs[i], dir);
        if (!dir.empty()) write_result(dir, rows[i].result);
      } catch (const std::exception& e) {
        rows[i].result.experiment = jobs[i].get_string("experiment", "");
        rows[i].result.config_hash = jobs[i].hash();
        rows[i].result.status = "error";
        rows[i].result.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_summary_csv(const std::string& axis, const std::vector<SweepRow>& rows) {
  std::set<std::string> fits, values;
  for (const auto& r : rows) {
    for (const auto& [k, f] : r.result.fits) fits.insert(k);
    for (const auto& [k, v] : r.result.values) values.insert(k);
  }
  std::ostringstream os;
  os << axis << ",config_hash,status";
  for (const auto& f : fits) os << ",fit." << f << ".rate,fit." << f << ".r2";
  for (const auto& v : values) os << ",value." << v;
  os << ",error\n";
  for (const auto& r : rows) {
    os << csv_number(r.value) << ',' << r.result.config_hash << ',' << r.result.status;
    for (const auto& f : fits) {
      const auto it = r.result.fits.find(f);
      if (it == r.result.fits.end()) os << ",,";
      else os << ',' << csv_number(it->second.rate) << ',' << csv_number(it->second.r2);
    }
    for (const auto& v : values) {
      const auto it = r.result.values.find(v);
      os << ',' << (it == r.result.values.end() ? std::string{} : csv_number(it->second));
    }
    os << ',' << csv_text(r.result.error) << '\n';
  }
  return os.str();
}

int run_command(const std::filesystem::path& config, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = RunConfig::load(config);
    check_config(cfg);
  } catch (const ConfigError& e) {
    log << config.string() << ": " << e.what() << '\n';
    return kExitConfig;
  }
  const std::filesystem::path dir = cfg.output_dir();
  try {
    std::filesystem::create_directories(dir);
    const RunResult r = run_experiment(cfg, dir);
    write_result(dir, r);
    log << r.experiment << " " << r.status << " -> " << (dir / "summary.csv").string() << '\n';
    if (r.status != "ok") {
      log << "error: " << r.error << '\n';
      return kExitExperiment;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    log << config.string() << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitExperiment;
  }
}

int sweep_command(const std::filesystem::path& config, const std::string& axis,
                  const std::vector<double>* values, std::ostream& log, unsigned workers) {
  RunConfig cfg;
  std::vector<double> vals;
  try {
    cfg = RunConfig::load(config);
    check_config(cfg);
    if (values) {
      vals = *values;
    } else {
      const std::string key = "sweep." + axis;
      if (!cfg.has(key)) key_error(cfg, key, "no --values given and no sweep list in the config");
      vals = cfg.get_doubles(key);
    }
    if (!sweepable(cfg, axis)) key_error(cfg, axis, "not a sweepable key");
  } catch (const ConfigError& e) {
    log << config.string() << ": " << e.what() << '\n';
    return kExitConfig;
  }
  const std::filesystem::path dir = cfg.output_dir();
  try {
    std::filesystem::create_directories(dir);
    const auto rows = run_sweep(cfg, axis, vals, workers, dir);
    write_text(dir / "sweep_summary.csv", sweep_summary_csv(axis, rows));
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.result.status != "ok";
    log << rows.size() << " jobs, " << failed << " failed -> " << (dir / "sweep_summary.csv").string() << '\n';
    return failed ? kExitExperiment : kExitOk;
  } catch (const ConfigError& e) {
    log << config.string() << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitExperiment;
  }
}

}  // namespace mslab
