#include "mslab/direction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mslab/error.hpp"

namespace mslab {
namespace {

constexpr double kPi = std::numbers::pi;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void normalize(Vec& v) {
  const double n = std::sqrt(dot(v, v));
  for (auto& x : v) x /= n;
}

void canonical_sign(Vec& e) {
  for (double x : e)
    if (x != 0.0) {
      if (x < 0.0)
        for (auto& y : e) y = -y;
      return;
    }
}

struct Pairs {
  std::vector<Vec> units;
  double score(const Vec& e) const {
    double m = 1.0;
    for (const auto& u : units) m = std::min(m, std::abs(dot(u, e)));
    return m;
  }
};

// Compass search in the tangent plane with a rotating direction set.
Vec refine3(const Pairs& pr, Vec e, double step) {
  double best = pr.score(e);
  double rot = 0.0;
  for (int it = 0; it < 4000 && step > 1e-10; ++it) {
    Vec t1 = std::abs(e[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
    const double c = dot(t1, e);
    for (int i = 0; i < 3; ++i) t1[i] -= c * e[i];
    normalize(t1);
    const Vec t2{e[1] * t1[2] - e[2] * t1[1], e[2] * t1[0] - e[0] * t1[2],
                 e[0] * t1[1] - e[1] * t1[0]};
    bool improved = false;
    for (int k = 0; k < 8; ++k) {
      const double ang = rot + k * kPi / 4.0;
      Vec cand(3);
      for (int i = 0; i < 3; ++i)
        cand[i] = e[i] + step * (std::cos(ang) * t1[i] + std::sin(ang) * t2[i]);
      normalize(cand);
      const double s = pr.score(cand);
      if (s > best) {
        best = s;
        e = cand;
        improved = true;
        break;
      }
    }
    if (!improved) {
      step *= 0.5;
      rot += 0.5 * (3.0 - std::sqrt(5.0)) * kPi;
    }
  }
  return e;
}

double refine2(const Pairs& pr, double phi, double step) {
  double best = pr.score({std::cos(phi), std::sin(phi)});
  for (int it = 0; it < 4000 && step > 1e-12; ++it) {
    bool improved = false;
    for (double d : {step, -step}) {
      const double s = pr.score({std::cos(phi + d), std::sin(phi + d)});
      if (s > best) {
        best = s;
        phi += d;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return phi;
}

// Points where the maximin can be attained: a single constraint at its peak, two active
// constraints balanced on their common great circle, or three active constraints equal.
std::vector<Vec> vertex_candidates(const Pairs& pr, std::size_t d) {
  std::vector<Vec> out;
  const auto& u = pr.units;
  const std::size_t P = u.size();
  for (std::size_t p = 0; p < P; ++p) {
    out.push_back(u[p]);
    for (std::size_t q = p + 1; q < P; ++q)
      for (double sg : {1.0, -1.0}) {
        Vec e(d);
        for (std::size_t i = 0; i < d; ++i) e[i] = u[p][i] + sg * u[q][i];
        if (std::sqrt(dot(e, e)) < 1e-12) continue;
        normalize(e);
        out.push_back(std::move(e));
      }
  }
  if (d != 3) return out;
  auto det3 = [](const Vec& a, const Vec& b, const Vec& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
  };
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = p + 1; q < P; ++q)
      for (std::size_t r = q + 1; r < P; ++r)
        for (double sq : {1.0, -1.0})
          for (double sr : {1.0, -1.0}) {
            const Vec& a = u[p];
            const Vec b{sq * u[q][0], sq * u[q][1], sq * u[q][2]};
            const Vec c{sr * u[r][0], sr * u[r][1], sr * u[r][2]};
            const double D = det3(a, b, c);
            if (std::abs(D) < 1e-12) continue;
            // Rows a, b, c; solve [a; b; c] e = (1, 1, 1) by Cramer's rule.
            const Vec one{1.0, 1.0, 1.0};
            Vec e{det3({one[0], a[1], a[2]}, {one[1], b[1], b[2]}, {one[2], c[1], c[2]}),
                  det3({a[0], one[0], a[2]}, {b[0], one[1], b[2]}, {c[0], one[2], c[2]}),
                  det3({a[0], a[1], one[0]}, {b[0], b[1], one[1]}, {c[0], c[1], one[2]})};
            normalize(e);
            out.push_back(std::move(e));
          }
  return out;
}

}  // namespace

double ensemble_alpha(int N, int d) {
  require(N >= 1 && d >= 1, "ensemble size and dimension must be positive");
  if (d == 1) return 1.0;
  const double arg = std::sqrt(kPi) * std::tgamma(0.5 * (d - 1)) / (double(N) * N * std::tgamma(0.5 * d));
  return std::sin(std::min(arg, 0.5 * kPi));
}

double direction_alpha_bound(int N, int d) {
  require(N >= 2 && d >= 1, "need at least two velocities");
  if (d == 1) return 1.0;
  const double arg =
      std::sqrt(kPi) * std::tgamma(0.5 * (d - 1)) / (double(N) * (N - 1) * std::tgamma(0.5 * d));
  return std::sin(std::min(arg, 0.5 * kPi));
}

double separation_score(const std::vector<Vec>& velocities, const Vec& e) {
  double m = 1.0;
  for (std::size_t j = 0; j < velocities.size(); ++j)
    for (std::size_t k = j + 1; k < velocities.size(); ++k) {
      Vec d(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) d[i] = velocities[j][i] - velocities[k][i];
      const double n = std::sqrt(dot(d, d));
      require(n > 0.0, "velocities must be pairwise distinct");
      m = std::min(m, std::abs(dot(d, e)) / n);
    }
  return m;
}

std::vector<Vec> complete_basis(const Vec& e1) {
  const std::size_t d = e1.size();
  std::vector<Vec> basis{e1};
  normalize(basis[0]);
  for (std::size_t c = 0; c < d && basis.size() < d; ++c) {
    Vec v(d, 0.0);
    v[c] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const double p = dot(v, b);
        for (std::size_t i = 0; i < d; ++i) v[i] -= p * b[i];
      }
    if (std::sqrt(dot(v, v)) < 1e-8) continue;
    normalize(v);
    basis.push_back(v);
  }
  return basis;
}

DirectionResult select_direction(const std::vector<Vec>& velocities, double alpha) {
  require(velocities.size() >= 2, "need at least two velocities");
  const std::size_t d = velocities.front().size();
  require(d >= 1 && d <= 3, "direction search supports d = 1, 2, 3");
  for (const auto& v : velocities) require(v.size() == d, "velocity dimensions differ");
  Pairs pr;
  for (std::size_t j = 0; j < velocities.size(); ++j)
    for (std::size_t k = j + 1; k < velocities.size(); ++k) {
      Vec u(d);
      for (std::size_t i = 0; i < d; ++i) u[i] = velocities[j][i] - velocities[k][i];
      const double n = std::sqrt(dot(u, u));
      require(n > 0.0, "velocities must be pairwise distinct");
      for (auto& x : u) x /= n;
      pr.units.push_back(std::move(u));
    }

  DirectionResult out;
  Vec e1;
  if (d == 1) {
    e1 = {1.0};
    out.candidates = 1;
  } else if (d == 2) {
    const std::size_t M = static_cast<std::size_t>(std::ceil(kPi / 1e-3));
    std::vector<std::pair<double, double>> scored;
    for (std::size_t i = 0; i < M; ++i) {
      const double phi = kPi * double(i) / double(M);
      scored.emplace_back(-pr.score({std::cos(phi), std::sin(phi)}), phi);
    }
    std::sort(scored.begin(), scored.end());
    double best = -1.0;
    for (std::size_t c = 0; c < std::min<std::size_t>(8, scored.size()); ++c) {
      const double phi = refine2(pr, scored[c].second, 1e-3);
      const Vec e{std::cos(phi), std::sin(phi)};
      const double s = pr.score(e);
      if (s > best + 1e-14) {
        best = s;
        e1 = e;
      }
    }
    out.candidates = M;
  } else {
    const std::size_t M = 40000;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    std::vector<std::pair<double, std::size_t>> scored;
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < M; ++i) {
      // Fibonacci lattice on the upper hemisphere; e and -e score alike.
      const double z = 1.0 - (double(i) + 0.5) / double(M);
      const double r = std::sqrt(1.0 - z * z);
      Vec p{r * std::cos(golden * double(i)), r * std::sin(golden * double(i)), z};
      scored.emplace_back(-pr.score(p), i);
      pts.push_back(std::move(p));
    }
    std::sort(scored.begin(), scored.end());
    double best = -1.0;
    for (std::size_t c = 0; c < std::min<std::size_t>(24, scored.size()); ++c) {
      const Vec e = refine3(pr, pts[scored[c].second], 0.02);
      const double s = pr.score(e);
      if (s > best + 1e-14) {
        best = s;
        e1 = e;
      }
    }
    out.candidates = M;
  }
  if (d >= 2) {
    double best = pr.score(e1);
    const auto verts = vertex_candidates(pr, d);
    for (const auto& e : verts) {
      const double s = pr.score(e);
      if (s > best + 1e-14) {
        best = s;
        e1 = e;
      }
    }
    out.candidates += verts.size();
  }
  canonical_sign(e1);
  out.score = pr.score(e1);
  if (out.score < alpha) {
    std::ostringstream os;
    os << "alpha too large for configuration: best separation " << out.score << " < " << alpha;
    fail(ErrorKind::AlphaTooLarge, os.str());
  }
  out.basis = complete_basis(e1);
  return out;
}

}  // namespace mslab
