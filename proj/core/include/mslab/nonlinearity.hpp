#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "mslab/field.hpp"

namespace mslab {

struct PurePower {
  double p;
};

struct CubicQuintic {
  double c3;
  double c5;
};

// User-supplied g with derivatives; g_derivative(n, s) must handle n up to the
// profile order in use.
struct CustomG {
  std::string name;
  std::function<double(int, double)> g_derivative;
  std::function<double(double)> primitive;  // F as a function of |z|
};

using NonlinearityKind = std::variant<PurePower, CubicQuintic, CustomG>;

// f(z) = g(|z|^2) z.
class Nonlinearity {
 public:
  Nonlinearity(NonlinearityKind kind, int dim);

  static Nonlinearity pure_power(double p, int dim) { return {PurePower{p}, dim}; }
  static Nonlinearity cubic_quintic(double c3, double c5, int dim) {
    return {CubicQuintic{c3, c5}, dim};
  }

  const NonlinearityKind& kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  std::string describe() const;

  double g(double s) const { return g_derivative(0, s); }
  double dg(double s) const { return g_derivative(1, s); }
  double g_derivative(int order, double s) const;

  // Degree of g as a polynomial in s, when it is one.
  std::optional<int> polynomial_degree() const;
  bool vanishes() const;

 private:
  NonlinearityKind kind_;
  int dim_;
};

cplx eval_f(const Nonlinearity& nl, cplx z);
double eval_primitive(const Nonlinearity& nl, double s);
cplx eval_df(const Nonlinearity& nl, cplx z, cplx w);

Field apply_f(const Nonlinearity& nl, const Field& u);

struct AssumptionReport {
  bool a1 = false;
  bool a2 = false;
  std::optional<double> a3_witness;
  bool all() const { return a1 && a2 && a3_witness.has_value(); }
};

AssumptionReport check_assumptions(const Nonlinearity& nl);

}  // namespace mslab
