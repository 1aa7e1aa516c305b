#pragma once

#include <filesystem>
#include <map>
#include <utility>
#include <vector>

#include "mslab/boundstate.hpp"
#include "mslab/field.hpp"
#include "mslab/linearization.hpp"
#include "mslab/nonlinearity.hpp"

namespace mslab {

// R^2-valued fields are packed as complex fields (first + i second) throughout.

// Y(t) = e^{-rho t} (cos(theta t) Y1 + sin(theta t) Y2), Y1 = Re Z, Y2 = Im Z.
Field build_Y(const Spectrum& spec, double t);

// Pointwise Taylor coefficients of M(v) = i[f(Phi+v) - f(Phi) - df(Phi).v] in (v+, v-):
// M(v) = sum_{m=2}^{N} sum_{j=0}^{m} c_{j,m}(x) (v+)^j (v-)^{m-j} + O(|v|^{N+1}),
// with c = P + i Q.
class TaylorTable {
 public:
  TaylorTable(GridSpec grid, int order, std::vector<std::vector<std::vector<cplx>>> c);

  const GridSpec& grid() const noexcept { return grid_; }
  int order() const noexcept { return order_; }
  const std::vector<cplx>& coeff(int j, int m) const;
  std::vector<double> P(int j, int m) const;
  std::vector<double> Q(int j, int m) const;

  // Truncated polynomial at grid point idx.
  cplx evaluate(std::size_t idx, double vp, double vm) const;
  Field evaluate(const Field& v) const;

 private:
  GridSpec grid_;
  int order_;
  std::vector<std::vector<std::vector<cplx>>> c_;  // [m][j][point]
};

TaylorTable taylor_coeffs(const Nonlinearity& nl, const Field& phi, int order);
TaylorTable taylor_coeffs(const Nonlinearity& nl, const BoundState& b, int order);

// M(v) evaluated directly.
Field nonlinear_remainder(const Nonlinearity& nl, const Field& phi, const Field& v);

// e^{-kappa rho t} sum_j [A_j cos(j theta t) + B_j sin(j theta t)].
struct TrigPoly {
  int decay_order = 0;
  std::map<int, std::pair<Field, Field>> terms;

  Field evaluate(double t, double rho, double theta) const;
  // Without the exponential factor.
  Field evaluate_trig(double t, double theta) const;
};

struct Profile {
  int order = 1;
  double a = 0.0;
  double rho = 0.0;
  double theta = 0.0;
  double omega = 1.0;
  GridSpec grid{1, 8, 1.0};
  std::vector<std::vector<Field>> A;  // A[k][j], 1 <= k <= order, 0 <= j <= k; A[0] empty
  std::vector<std::vector<Field>> B;
  std::vector<double> level_residual;  // residual of the level system, index k

  const Field& coeff_A(int j, int k) const { return A.at(k).at(j); }
  const Field& coeff_B(int j, int k) const { return B.at(k).at(j); }
  int levels() const noexcept { return static_cast<int>(A.size()) - 1; }

  Field W(double t) const;
  Field dW_dt(double t) const;
  // e^{i omega t} W(t).
  Field V(double t) const;
};

// Profile holding only level 1: a Y1 and a Y2.
Profile seed_profile(const Spectrum& spec, double omega, int order, double a);

struct ExpansionStats {
  std::vector<int> max_source_level;  // per decay order kappa, -1 when empty
  std::size_t monomials = 0;
  int worst_frequency_excess = 0;  // max over terms of frequency - kappa, <= 0 is expected
};

// Expansion of M(W) using levels 1..max_level of p, bucketed by decay order kappa = 2..taylor.order().
std::vector<TrigPoly> expand_nonlinear(const Profile& p, const TaylorTable& taylor, int max_level,
                                       ExpansionStats* stats = nullptr);

struct LevelSolution {
  std::vector<Field> A;  // index j = 0..k
  std::vector<Field> B;
  double residual = 0.0;  // max relative residual of the level system over j
};

// Solves L A + j theta B - k rho A = At, L B - j theta A - k rho B = Bt for j = 0..k.
LevelSolution solve_level(const BlockOperator& op, const Spectrum& spec, int k,
                          const TrigPoly& tildes);

// max_j of the level system residual, relative to the source (absolute when the source is 0).
double level_residual(const BlockOperator& op, const Spectrum& spec, int k,
                      const std::vector<Field>& A, const std::vector<Field>& B,
                      const TrigPoly& tildes);

Profile build_profile(const Nonlinearity& nl, const BoundState& b, const Spectrum& spec,
                      int order, double a);
Profile build_profile(const Nonlinearity& nl, const BoundState& b, const BlockOperator& op,
                      const Spectrum& spec, int order, double a);

// i dU/dt + Delta U + f(U) with U = e^{i omega t}(Phi + W(t)).
Field residual_err(const Profile& p, const BoundState& b, const Nonlinearity& nl, double t);

// Directory with manifest.json and one snapshot per coefficient.
void write_profile(const std::filesystem::path& dir, const Profile& p);
Profile read_profile(const std::filesystem::path& dir);

}  // namespace mslab
