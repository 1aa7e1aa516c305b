#include "mslab/nonlinearity.hpp"

#include <cmath>
#include <sstream>

#include "mslab/error.hpp"

namespace mslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double power_derivative(double q, int order, double s) {
  double c = 1.0;
  for (int i = 0; i < order; ++i) c *= (q - i);
  if (c == 0.0) return 0.0;
  const double e = q - order;
  if (s == 0.0) return e > 0 ? 0.0 : (e == 0 ? c : INFINITY);
  return c * std::pow(s, e);
}

}  // namespace

Nonlinearity::Nonlinearity(NonlinearityKind kind, int dim) : kind_(std::move(kind)), dim_(dim) {
  require(dim >= 1 && dim <= 3, "nonlinearity dim must be 1, 2 or 3");
  std::visit(overloaded{
                 [](const PurePower& k) {
                   require(std::isfinite(k.p) && k.p > 1.0, "pure power exponent must exceed 1");
                 },
                 [](const CubicQuintic& k) {
                   require(std::isfinite(k.c3) && std::isfinite(k.c5),
                           "cubic-quintic coefficients must be finite");
                 },
                 [](const CustomG& k) {
                   require(bool(k.g_derivative) && bool(k.primitive),
                           "custom nonlinearity needs g derivatives and a primitive");
                 },
             },
             kind_);
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const PurePower& k) { os << "pure_power(p=" << k.p << ")"; },
                 [&](const CubicQuintic& k) {
                   os << "cubic_quintic(c3=" << k.c3 << ", c5=" << k.c5 << ")";
                 },
                 [&](const CustomG& k) { os << "custom(" << k.name << ")"; },
             },
             kind_);
  os << " d=" << dim_;
  return os.str();
}

double Nonlinearity::g_derivative(int order, double s) const {
  return std::visit(overloaded{
                        [&](const PurePower& k) {
                          return power_derivative(0.5 * (k.p - 1.0), order, s);
                        },
                        [&](const CubicQuintic& k) {
                          switch (order) {
                            case 0: return k.c3 * s + k.c5 * s * s;
                            case 1: return k.c3 + 2.0 * k.c5 * s;
                            case 2: return 2.0 * k.c5;
                            default: return 0.0;
                          }
                        },
                        [&](const CustomG& k) { return k.g_derivative(order, s); },
                    },
                    kind_);
}

std::optional<int> Nonlinearity::polynomial_degree() const {
  if (const auto* pp = std::get_if<PurePower>(&kind_)) {
    const double q = 0.5 * (pp->p - 1.0);
    if (q == std::round(q)) return static_cast<int>(q);
    return std::nullopt;
  }
  if (const auto* cq = std::get_if<CubicQuintic>(&kind_)) {
    if (cq->c5 != 0.0) return 2;
    if (cq->c3 != 0.0) return 1;
    return 0;
  }
  return std::nullopt;
}

bool Nonlinearity::vanishes() const {
  if (const auto* cq = std::get_if<CubicQuintic>(&kind_)) return cq->c3 == 0.0 && cq->c5 == 0.0;
  return false;
}

cplx eval_f(const Nonlinearity& nl, cplx z) {
  const double s = std::norm(z);
  if (s == 0.0) return 0.0;
  return nl.g(s) * z;
}

double eval_primitive(const Nonlinearity& nl, double s) {
  require(s >= 0.0, "primitive argument must be non-negative");
  return std::visit(overloaded{
                        [&](const PurePower& k) { return std::pow(s, k.p + 1.0) / (k.p + 1.0); },
                        [&](const CubicQuintic& k) {
                          const double s2 = s * s;
                          return k.c3 * s2 * s2 / 4.0 + k.c5 * s2 * s2 * s2 / 6.0;
                        },
                        [&](const CustomG& k) { return k.primitive(s); },
                    },
                    nl.kind());
}

cplx eval_df(const Nonlinearity& nl, cplx z, cplx w) {
  const double s = std::norm(z);
  cplx out = nl.g(s) * w;
  if (s > 0.0) out += 2.0 * (z * std::conj(w)).real() * nl.dg(s) * z;
  return out;
}

Field apply_f(const Nonlinearity& nl, const Field& u) {
  std::vector<cplx> v(u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eval_f(nl, u[i]);
  return u.with_values(std::move(v));
}

AssumptionReport check_assumptions(const Nonlinearity& nl) {
  AssumptionReport r;
  const int d = nl.dim();
  auto subcritical = [d](double p) { return d <= 2 || p < 1.0 + 4.0 / (d - 2); };
  std::visit(overloaded{
                 [&](const PurePower& k) {
                   r.a1 = k.p > 1.0;
                   r.a2 = subcritical(k.p);
                 },
                 [&](const CubicQuintic& k) {
                   r.a1 = true;
                   const double p = k.c5 != 0.0 ? 5.0 : (k.c3 != 0.0 ? 3.0 : 1.0);
                   r.a2 = k.c5 == 0.0 && k.c3 == 0.0 ? true : subcritical(p);
                 },
                 [&](const CustomG& k) {
                   const double s = 1e-8;
                   r.a1 = std::abs(k.g_derivative(0, 0.0)) <= 1e-14 &&
                          std::abs(s * k.g_derivative(1, s)) <= 1e-6;
                   // Growth exponent of s^2 g'(s^2) read off between two large radii.
                   const double a = 1e3, b = 1e4;
                   const double ga = std::abs(a * a * k.g_derivative(1, a * a));
                   const double gb = std::abs(b * b * k.g_derivative(1, b * b));
                   const double p = ga > 0 && gb > 0 ? 1.0 + std::log(gb / ga) / std::log(b / a) : 1.0;
                   r.a2 = subcritical(p);
                 },
             },
             nl.kind());
  const int samples = 601;
  for (int i = 0; i < samples; ++i) {
    const double s = std::pow(10.0, -3.0 + 6.0 * i / (samples - 1));
    if (eval_primitive(nl, s) > 0.5 * s * s) {
      r.a3_witness = s;
      break;
    }
  }
  return r;
}

}  // namespace mslab
