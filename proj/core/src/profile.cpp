#include "mslab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "mslab/error.hpp"
#include "mslab/snapshot.hpp"
#include "mslab/spectral.hpp"

namespace mslab {
namespace {

constexpr cplx kI{0.0, 1.0};

// Truncated bivariate jet in (x, y) = (v+, v-): a[i * (N+1) + j] is the x^i y^j coefficient.
struct Jet {
  int N;
  std::vector<cplx> a;
  explicit Jet(int n) : N(n), a(std::size_t(n + 1) * (n + 1), 0.0) {}
  cplx& at(int i, int j) { return a[std::size_t(i) * (N + 1) + j]; }
  cplx at(int i, int j) const { return a[std::size_t(i) * (N + 1) + j]; }
};

Jet jet_mul(const Jet& p, const Jet& q) {
  Jet r(p.N);
  for (int i1 = 0; i1 <= p.N; ++i1)
    for (int j1 = 0; i1 + j1 <= p.N; ++j1) {
      const cplx c1 = p.at(i1, j1);
      if (c1 == 0.0) continue;
      for (int i2 = 0; i1 + j1 + i2 <= p.N; ++i2)
        for (int j2 = 0; i1 + j1 + i2 + j2 <= p.N; ++j2) r.at(i1 + i2, j1 + j2) += c1 * q.at(i2, j2);
    }
  return r;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Real-valued trig-exponential series sum_{k,l} e^{-k rho t}[c cos(l theta t) + s sin(l theta t)].
struct RTerm {
  bool present = false;
  int src = 0;  // highest profile level this term was built from
  std::vector<double> c, s;
};

struct RSeries {
  int N = 0;
  std::size_t npts = 0;
  std::vector<std::vector<RTerm>> t;  // t[k][l], 0 <= l <= k, plus l up to k always

  RSeries(int n, std::size_t pts) : N(n), npts(pts), t(n + 1) {
    for (int k = 0; k <= n; ++k) t[k].resize(k + 1);
  }
  RTerm& term(int k, int l) {
    RTerm& r = t[k][l];
    if (!r.present) {
      r.present = true;
      r.c.assign(npts, 0.0);
      r.s.assign(npts, 0.0);
    }
    return r;
  }
};

RSeries series_one(int N, std::size_t npts) {
  RSeries s(N, npts);
  std::fill(s.term(0, 0).c.begin(), s.term(0, 0).c.end(), 1.0);
  return s;
}

RSeries series_mul(const RSeries& a, const RSeries& b, ExpansionStats* stats) {
  RSeries r(a.N, a.npts);
  const std::size_t n = a.npts;
  for (int k1 = 0; k1 <= a.N; ++k1)
    for (int l1 = 0; l1 <= k1; ++l1) {
      const RTerm& x = a.t[k1][l1];
      if (!x.present) continue;
      for (int k2 = 0; k1 + k2 <= a.N; ++k2)
        for (int l2 = 0; l2 <= k2; ++l2) {
          const RTerm& y = b.t[k2][l2];
          if (!y.present) continue;
          if (stats) ++stats->monomials;
          const int k = k1 + k2;
          const int src = std::max(x.src, y.src);
          RTerm& sum = r.term(k, l1 + l2);
          sum.src = std::max(sum.src, src);
          const int ld = l1 - l2;
          RTerm& diff = r.term(k, std::abs(ld));
          diff.src = std::max(diff.src, src);
          const double sg = ld < 0 ? -1.0 : 1.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double ac = x.c[i], as = x.s[i], bc = y.c[i], bs = y.s[i];
            sum.c[i] += 0.5 * (ac * bc - as * bs);
            sum.s[i] += 0.5 * (as * bc + ac * bs);
            diff.c[i] += 0.5 * (ac * bc + as * bs);
            diff.s[i] += sg * 0.5 * (as * bc - ac * bs);
          }
        }
    }
  for (auto& row : r.t) row[0].s.assign(row[0].present ? n : 0, 0.0);
  return r;
}

RSeries component_series(const Profile& p, int max_level, int N, bool second) {
  const std::size_t n = p.grid.size();
  RSeries s(N, n);
  for (int k = 1; k <= std::min({max_level, N, p.levels()}); ++k)
    for (int l = 0; l <= k; ++l) {
      RTerm& t = s.term(k, l);
      t.src = k;
      const Field& A = p.A[k][l];
      const Field& B = p.B[k][l];
      for (std::size_t i = 0; i < n; ++i) {
        t.c[i] = second ? A[i].imag() : A[i].real();
        t.s[i] = second ? B[i].imag() : B[i].real();
      }
    }
  return s;
}

std::string coeff_name(char which, int k, int j) {
  return std::string(1, which) + "_" + std::to_string(k) + "_" + std::to_string(j) + ".nlsf";
}

}  // namespace

Field build_Y(const Spectrum& spec, double t) {
  const auto [Y1, Y2] = decomplexify(spec.Z);
  const double e = std::exp(-spec.rho * t);
  return (e * std::cos(spec.theta * t)) * Y1 + (e * std::sin(spec.theta * t)) * Y2;
}

TaylorTable::TaylorTable(GridSpec grid, int order, std::vector<std::vector<std::vector<cplx>>> c)
    : grid_(grid), order_(order), c_(std::move(c)) {
  require(order >= 1 && c_.size() == std::size_t(order + 1), "taylor table shape");
}

const std::vector<cplx>& TaylorTable::coeff(int j, int m) const {
  require(m >= 0 && m <= order_ && j >= 0 && j <= m, "taylor index out of range");
  return c_[m][j];
}

std::vector<double> TaylorTable::P(int j, int m) const {
  const auto& c = coeff(j, m);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

std::vector<double> TaylorTable::Q(int j, int m) const {
  const auto& c = coeff(j, m);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].imag();
  return out;
}

cplx TaylorTable::evaluate(std::size_t idx, double vp, double vm) const {
  cplx sum = 0.0;
  for (int m = 2; m <= order_; ++m)
    for (int j = 0; j <= m; ++j)
      sum += c_[m][j][idx] * std::pow(vp, j) * std::pow(vm, m - j);
  return sum;
}

Field TaylorTable::evaluate(const Field& v) const {
  require_same_grid(grid_, v.grid());
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluate(i, v[i].real(), v[i].imag());
  return v.with_values(std::move(out));
}

TaylorTable taylor_coeffs(const Nonlinearity& nl, const Field& phi, int order) {
  require(order >= 1 && order <= 6, "profile order must be in [1, 6]");
  const int N = order;
  const std::size_t n = phi.size();
  std::vector<std::vector<std::vector<cplx>>> c(N + 1);
  for (int m = 0; m <= N; ++m) c[m].assign(m + 1, std::vector<cplx>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z = phi[i];
    const double s0 = std::norm(z);
    // delta = |z + v|^2 - |z|^2 as a jet.
    Jet delta(N);
    if (N >= 1) {
      delta.at(1, 0) = 2.0 * z.real();
      delta.at(0, 1) = 2.0 * z.imag();
    }
    if (N >= 2) {
      delta.at(2, 0) = 1.0;
      delta.at(0, 2) = 1.0;
    }
    Jet g(N);
    g.at(0, 0) = nl.g_derivative(N, s0) / factorial(N);
    for (int k = N - 1; k >= 0; --k) {
      g = jet_mul(g, delta);
      g.at(0, 0) += nl.g_derivative(k, s0) / factorial(k);
    }
    Jet w(N);
    w.at(0, 0) = z;
    if (N >= 1) {
      w.at(1, 0) = 1.0;
      w.at(0, 1) = kI;
    }
    const Jet f = jet_mul(g, w);
    for (int m = 2; m <= N; ++m)
      for (int j = 0; j <= m; ++j) {
        const cplx v = kI * f.at(j, m - j);
        require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                "g is not smooth on the range of |Phi|^2");
        c[m][j][i] = v;
      }
  }
  return TaylorTable(phi.grid(), N, std::move(c));
}

TaylorTable taylor_coeffs(const Nonlinearity& nl, const BoundState& b, int order) {
  return taylor_coeffs(nl, b.profile, order);
}

Field nonlinear_remainder(const Nonlinearity& nl, const Field& phi, const Field& v) {
  require_same_grid(phi.grid(), v.grid());
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = kI * (eval_f(nl, phi[i] + v[i]) - eval_f(nl, phi[i]) - eval_df(nl, phi[i], v[i]));
  return v.with_values(std::move(out));
}

Field TrigPoly::evaluate_trig(double t, double theta) const {
  require(!terms.empty(), "empty trigonometric polynomial");
  Field out = Field::zeros(terms.begin()->second.first.grid());
  for (const auto& [j, ab] : terms) {
    out += std::cos(j * theta * t) * ab.first;
    out += std::sin(j * theta * t) * ab.second;
  }
  return out;
}

Field TrigPoly::evaluate(double t, double rho, double theta) const {
  return std::exp(-decay_order * rho * t) * evaluate_trig(t, theta);
}

Field Profile::W(double t) const {
  Field out = Field::zeros(grid, t);
  for (int k = 1; k <= levels(); ++k) {
    const double e = std::exp(-k * rho * t);
    for (int j = 0; j <= k; ++j) {
      out += (e * std::cos(j * theta * t)) * A[k][j];
      out += (e * std::sin(j * theta * t)) * B[k][j];
    }
  }
  return out;
}

Field Profile::dW_dt(double t) const {
  Field out = Field::zeros(grid, t);
  for (int k = 1; k <= levels(); ++k) {
    const double e = std::exp(-k * rho * t);
    for (int j = 0; j <= k; ++j) {
      const double c = std::cos(j * theta * t), s = std::sin(j * theta * t);
      const double jt = j * theta, kr = k * rho;
      out += (e * (-kr * c - jt * s)) * A[k][j];
      out += (e * (jt * c - kr * s)) * B[k][j];
    }
  }
  return out;
}

Field Profile::V(double t) const { return std::exp(kI * (omega * t)) * W(t); }

Profile seed_profile(const Spectrum& spec, double omega, int order, double a) {
  require(order >= 1 && order <= 6, "profile order must be in [1, 6]");
  const auto [Y1, Y2] = decomplexify(spec.Z);
  Profile p;
  p.order = order;
  p.a = a;
  p.rho = spec.rho;
  p.theta = spec.theta;
  p.omega = omega;
  p.grid = Y1.grid();
  const Field zero = Field::zeros(p.grid);
  p.A = {{}, {zero, a * Y1}};
  p.B = {{}, {zero, a * Y2}};
  p.level_residual = {0.0, 0.0};
  return p;
}

std::vector<TrigPoly> expand_nonlinear(const Profile& p, const TaylorTable& taylor, int max_level,
                                       ExpansionStats* stats) {
  require_same_grid(p.grid, taylor.grid());
  const int N = taylor.order();
  const std::size_t n = p.grid.size();
  if (stats) {
    stats->max_source_level.assign(N + 1, -1);
    stats->monomials = 0;
    stats->worst_frequency_excess = -N;
  }
  const RSeries wp = component_series(p, max_level, N, false);
  const RSeries wm = component_series(p, max_level, N, true);
  std::vector<RSeries> pow_p{series_one(N, n)}, pow_m{series_one(N, n)};
  for (int e = 1; e <= N; ++e) {
    pow_p.push_back(series_mul(pow_p.back(), wp, stats));
    pow_m.push_back(series_mul(pow_m.back(), wm, stats));
  }

  // Complex accumulators per (kappa, l).
  std::vector<std::vector<std::pair<std::vector<cplx>, std::vector<cplx>>>> acc(N + 1);
  std::vector<std::vector<bool>> used(N + 1);
  for (int k = 0; k <= N; ++k) {
    acc[k].assign(k + 1, {std::vector<cplx>(n, 0.0), std::vector<cplx>(n, 0.0)});
    used[k].assign(k + 1, false);
  }
  for (int m = 2; m <= N; ++m)
    for (int j = 0; j <= m; ++j) {
      const RSeries prod = series_mul(pow_p[j], pow_m[m - j], stats);
      const auto& c = taylor.coeff(j, m);
      for (int k = 2; k <= N; ++k)
        for (int l = 0; l <= k; ++l) {
          const RTerm& t = prod.t[k][l];
          if (!t.present) continue;
          used[k][l] = true;
          if (stats) {
            stats->max_source_level[k] = std::max(stats->max_source_level[k], t.src);
            stats->worst_frequency_excess = std::max(stats->worst_frequency_excess, l - k);
          }
          auto& [ac, as] = acc[k][l];
          for (std::size_t i = 0; i < n; ++i) {
            ac[i] += c[i] * t.c[i];
            as[i] += c[i] * t.s[i];
          }
        }
    }

  std::vector<TrigPoly> out;
  for (int k = 2; k <= N; ++k) {
    TrigPoly tp;
    tp.decay_order = k;
    for (int l = 0; l <= k; ++l) {
      if (!used[k][l]) continue;
      if (l == 0) std::fill(acc[k][l].second.begin(), acc[k][l].second.end(), 0.0);
      tp.terms.emplace(l, std::make_pair(Field(p.grid, std::move(acc[k][l].first)),
                                         Field(p.grid, std::move(acc[k][l].second))));
    }
    out.push_back(std::move(tp));
  }
  return out;
}

double level_residual(const BlockOperator& op, const Spectrum& spec, int k,
                      const std::vector<Field>& A, const std::vector<Field>& B,
                      const TrigPoly& tildes) {
  double worst = 0.0;
  const GridSpec& g = op.grid();
  for (int j = 0; j <= k; ++j) {
    Field At = Field::zeros(g), Bt = Field::zeros(g);
    if (auto it = tildes.terms.find(j); it != tildes.terms.end()) {
      At = it->second.first;
      Bt = it->second.second;
    }
    const double jt = j * spec.theta, kr = k * spec.rho;
    const Field r1 = op.apply_packed(A[j]) + jt * B[j] - kr * A[j] - At;
    const Field r2 = op.apply_packed(B[j]) - jt * A[j] - kr * B[j] - Bt;
    const double src = std::hypot(norm_l2(At), norm_l2(Bt));
    worst = std::max(worst, std::hypot(norm_l2(r1), norm_l2(r2)) / std::max(1.0, src));
  }
  return worst;
}

LevelSolution solve_level(const BlockOperator& op, const Spectrum& spec, int k,
                          const TrigPoly& tildes) {
  require(k >= 2, "levels below 2 are fixed by the seed");
  require(op.has_physical_potentials(), "level solves need the physical operator");
  const GridSpec& g = op.grid();
  LevelSolution out;
  std::vector<std::pair<cplx, std::unique_ptr<Resolvent>>> cache;
  for (int j = 0; j <= k; ++j) {
    auto it = tildes.terms.find(j);
    if (it == tildes.terms.end() ||
        (it->second.first.max_abs() == 0.0 && it->second.second.max_abs() == 0.0)) {
      out.A.push_back(Field::zeros(g));
      out.B.push_back(Field::zeros(g));
      continue;
    }
    const cplx mu(k * spec.rho, j * spec.theta);
    Resolvent* res = nullptr;
    for (auto& [m, r] : cache)
      if (m == mu) res = r.get();
    try {
      if (!res) {
        cache.emplace_back(mu, std::make_unique<Resolvent>(op, mu));
        res = cache.back().second.get();
      }
      const C2Field X = res->solve(complexify(it->second.first, it->second.second));
      auto [C, D] = decomplexify(X);
      out.A.push_back(std::move(C));
      out.B.push_back(std::move(D));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingular) throw;
      fail(ErrorKind::SpectralMaximality,
           "spectral maximality violated at level " + std::to_string(k));
    }
  }
  out.residual = level_residual(op, spec, k, out.A, out.B, tildes);
  return out;
}

Profile build_profile(const Nonlinearity& nl, const BoundState& b, const BlockOperator& op,
                      const Spectrum& spec, int order, double a) {
  require(spec.rho > 0.0, "profile needs an eigenvalue with positive real part");
  Profile p = seed_profile(spec, b.omega, order, a);
  if (order == 1) return p;
  const TaylorTable taylor = taylor_coeffs(nl, b, order);
  for (int k = 2; k <= order; ++k) {
    const auto tildes = expand_nonlinear(p, taylor, k - 1);
    LevelSolution lvl = solve_level(op, spec, k, tildes[k - 2]);
    p.A.push_back(std::move(lvl.A));
    p.B.push_back(std::move(lvl.B));
    p.level_residual.push_back(lvl.residual);
  }
  return p;
}

Profile build_profile(const Nonlinearity& nl, const BoundState& b, const Spectrum& spec,
                      int order, double a) {
  const BlockOperator op = assemble(nl, b);
  return build_profile(nl, b, op, spec, order, a);
}

Field residual_err(const Profile& p, const BoundState& b, const Nonlinearity& nl, double t) {
  require_same_grid(p.grid, b.profile.grid());
  const Field u = b.profile + p.W(t);
  const Field inner = (-p.omega) * u + kI * p.dW_dt(t) + laplacian(u) + apply_f(nl, u);
  return (std::exp(kI * (p.omega * t)) * inner).with_time(t);
}

void write_profile(const std::filesystem::path& dir, const Profile& p) {
  std::filesystem::create_directories(dir);
  nlohmann::json m{{"order", p.order}, {"a", p.a},         {"rho", p.rho},
                   {"theta", p.theta}, {"omega", p.omega}, {"levels", p.levels()},
                   {"level_residual", p.level_residual}};
  for (int k = 1; k <= p.levels(); ++k)
    for (int j = 0; j <= k; ++j) {
      write_snapshot(dir / coeff_name('A', k, j), p.A[k][j]);
      write_snapshot(dir / coeff_name('B', k, j), p.B[k][j]);
    }
  std::ofstream os(dir / "manifest.json");
  if (!os) fail(ErrorKind::Io, "cannot write " + (dir / "manifest.json").string());
  os << m.dump(2) << "\n";
}

Profile read_profile(const std::filesystem::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) fail(ErrorKind::Io, "cannot read " + (dir / "manifest.json").string());
  nlohmann::json m;
  try {
    is >> m;
  } catch (const std::exception& e) {
    fail(ErrorKind::Io, std::string("bad profile manifest: ") + e.what());
  }
  Profile p;
  p.order = m.at("order").get<int>();
  p.a = m.at("a").get<double>();
  p.rho = m.at("rho").get<double>();
  p.theta = m.at("theta").get<double>();
  p.omega = m.at("omega").get<double>();
  p.level_residual = m.at("level_residual").get<std::vector<double>>();
  const int levels = m.at("levels").get<int>();
  p.A.assign(1, {});
  p.B.assign(1, {});
  for (int k = 1; k <= levels; ++k) {
    std::vector<Field> a, b;
    for (int j = 0; j <= k; ++j) {
      a.push_back(read_snapshot(dir / coeff_name('A', k, j)));
      b.push_back(read_snapshot(dir / coeff_name('B', k, j)));
    }
    p.A.push_back(std::move(a));
    p.B.push_back(std::move(b));
  }
  if (levels >= 1) p.grid = p.A[1][0].grid();
  return p;
}

}  // namespace mslab
