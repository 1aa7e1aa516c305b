#include "mslab/fundamental.hpp"

#include <cmath>
#include <numbers>
#include <span>

#include "mslab/error.hpp"
#include "mslab/fit.hpp"

namespace mslab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr cplx kI{0.0, 1.0};

double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

double digamma_int(int n) { return -kEuler + harmonic(n - 1); }

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

cplx bessel_i(int nu, cplx w) {
  const cplx q = 0.25 * w * w;
  cplx term = std::pow(0.5 * w, nu) / factorial(nu);
  cplx sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * double(k + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Ascending series, fine for |w| <= 2.
cplx bessel_k_series(int n, cplx w) {
  const cplx half = 0.5 * w;
  const cplx q = 0.25 * w * w;
  cplx finite = 0.0;
  if (n > 0) {
    cplx term = 1.0;
    for (int k = 0; k < n; ++k) {
      finite += factorial(n - k - 1) / factorial(k) * term;
      term *= -q;
    }
    finite *= 0.5 * std::pow(half, -n);
  }
  const double sign_log = (n % 2 == 0) ? -1.0 : 1.0;
  const cplx log_part = sign_log * std::log(half) * bessel_i(n, w);
  cplx tail = 0.0;
  cplx qk = 1.0;
  for (int k = 0; k < 200; ++k) {
    const cplx t = (digamma_int(k + 1) + digamma_int(n + k + 1)) * qk /
                   (factorial(k) * factorial(n + k));
    tail += t;
    if (k > 2 && std::abs(t) < 1e-18 * (std::abs(tail) + 1e-300)) break;
    qk *= q;
  }
  const double sign_tail = (n % 2 == 0) ? 1.0 : -1.0;
  tail *= sign_tail * 0.5 * std::pow(half, n);
  return finite + log_part + tail;
}

// K_nu(w) = sqrt(pi/(2w)) e^{-w} / Gamma(nu+1/2) * int_0^inf e^{-u} u^{nu-1/2} (1 + u/(2w))^{nu-1/2} du,
// with u = s^2 and the trapezoid rule on the even extension.
cplx bessel_k_integral(int nu, cplx w) {
  const double a = nu - 0.5;
  const double h = 0.04;
  const double s_max = 10.0 + 2.0 * nu;
  cplx sum = 0.0;
  for (int k = 1; k * h <= s_max; ++k) {
    const double s = k * h;
    const double s2 = s * s;
    sum += 2.0 * std::pow(s, 2 * nu) * std::exp(-s2) * std::pow(1.0 + s2 / (2.0 * w), a);
  }
  if (nu == 0) sum += 1.0;  // half of the s = 0 value 2 * 1 * 1
  sum *= h;
  return std::sqrt(kPi / (2.0 * w)) * std::exp(-w) / std::tgamma(nu + 0.5) * sum;
}

cplx odd_eval(int dim, cplx kappa, double r) {
  const auto c = odd_dimension_coefficients(dim, kappa);
  cplx poly = 0.0;
  for (std::size_t m = c.size(); m-- > 0;) poly = poly / r + c[m];
  return std::exp(kI * kappa * r) * poly;
}

}  // namespace

cplx branch_sqrt(cplx mu) {
  double theta = std::arg(mu);
  if (theta < 0.0) theta += 2.0 * kPi;
  return std::sqrt(std::abs(mu)) * std::exp(kI * (0.5 * theta));
}

FundamentalSolution::FundamentalSolution(int dim, cplx mu) : dim_(dim), mu_(mu) {
  require(dim >= 1,  "dimension must be >= 1");
  require(std::isfinite(mu.real()) && std::isfinite(mu.imag()),  "mu must be finite");
  require(!(mu.imag() == 0.0 && mu.real() >= 0.0),  "mu on the nonnegative real axis");
  kappa_ = branch_sqrt(mu);
}

cplx FundamentalSolution::operator()(double r) const { return fundamental_eval(*this, r); }

std::vector<cplx> odd_dimension_coefficients(int dim, cplx kappa) {
  require(dim >= 1 && dim % 2 == 1,  "odd dimension expected");
  std::vector<cplx> c{kI / (2.0 * kappa)};
  for (int d = 1; d < dim; d += 2) {
    std::vector<cplx> next(c.size() + 2, 0.0);
    for (std::size_t m = 0; m < c.size(); ++m) {
      next[m + 1] += -kI * kappa * c[m] / (2.0 * kPi);
      next[m + 2] += double(m) * c[m] / (2.0 * kPi);
    }
    while (next.size() > 1 && next.back() == 0.0) next.pop_back();
    c = std::move(next);
  }
  return c;
}

cplx bessel_k(int nu, cplx w) {
  require(nu >= 0,  "order must be nonnegative");
  require(w.real() > 0.0 || (w.real() == 0.0 && w.imag() != 0.0),  "bessel_k needs Re w >= 0, w != 0");
  return std::abs(w) <= 2.0 ? bessel_k_series(nu, w) : bessel_k_integral(nu, w);
}

cplx hankel1(int nu, cplx z) {
  require(z.imag() >= 0.0 && z != 0.0,  "hankel1 needs Im z >= 0");
  const cplx phase = std::exp(-kI * (0.5 * kPi * nu));
  return 2.0 / (kI * kPi) * phase * bessel_k(nu, -kI * z);
}

cplx fundamental_eval(const FundamentalSolution& fs, double r) {
  require(r > 0.0 && std::isfinite(r),  "r must be positive");
  const cplx kappa = fs.sqrt_mu();
  if (fs.dim() % 2 == 1) return odd_eval(fs.dim(), kappa, r);
  const int nu = (fs.dim() - 2) / 2;
  return 0.25 * kI * std::pow(kappa / (2.0 * kPi * r), nu) * hankel1(nu, kappa * r);
}

double helmholtz_residual(const FundamentalSolution& fs, double r) {
  const double h = 1e-3 * std::min(1.0, r) / std::max(1.0, std::abs(fs.sqrt_mu()));
  const cplx g0 = fs(r);
  const cplx gm1 = fs(r - h), gp1 = fs(r + h), gm2 = fs(r - 2 * h), gp2 = fs(r + 2 * h);
  const cplx d2 = (-gp2 + 16.0 * gp1 - 30.0 * g0 + 16.0 * gm1 - gm2) / (12.0 * h * h);
  const cplx d1 = (-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h);
  const cplx res = -d2 - double(fs.dim() - 1) / r * d1 - fs.mu() * g0;
  return std::abs(res) / std::max(std::abs(fs.mu() * g0), 1e-300);
}

double recurrence_residual(const FundamentalSolution& fs, double r) {
  const double h = 1e-3 * std::min(1.0, r) / std::max(1.0, std::abs(fs.sqrt_mu()));
  const cplx d1 = (-fs(r + 2 * h) + 8.0 * fs(r + h) - 8.0 * fs(r - h) + fs(r - 2 * h)) / (12.0 * h);
  const FundamentalSolution up(fs.dim() + 2, fs.mu());
  const cplx target = up(r);
  return std::abs(target + d1 / (2.0 * kPi * r)) / std::max(std::abs(target), 1e-300);
}

DominationCheck check_domination(const FundamentalSolution& fs, double r_min, double r_max,
                                 std::size_t points) {
  require(r_min > 0.0 && r_max > r_min && points >= 8, "bad domination grid");
  DominationCheck out;
  out.tau = fs.tau();
  out.samples = points;
  const FundamentalSolution ref(fs.dim(), cplx(-out.tau, 0.0));
  const double step = std::log(r_max / r_min) / double(points - 1);
  std::vector<double> r(points), log_ratio(points);
  for (std::size_t i = 0; i < points; ++i) {
    r[i] = r_min * std::exp(step * double(i));
    const double ratio = std::abs(fs(r[i])) / std::abs(ref(r[i]));
    out.C = std::max(out.C, ratio);
    log_ratio[i] = std::log(ratio);
  }
  const std::size_t tail = points * 3 / 4;
  const auto fit = fit_linear(std::span(r).subspan(tail), std::span(log_ratio).subspan(tail));
  out.tail_growth = fit.slope;
  out.holds = std::isfinite(out.C) && out.tail_growth <= 0.02 * std::sqrt(out.tau);
  return out;
}

}  // namespace mslab
