#pragma once

#include <cstddef>
#include <vector>

#include "mslab/field.hpp"

namespace mslab {

// Square root with the cut on the positive real axis: sqrt(mu) = |mu|^{1/2} e^{i theta/2},
// theta in [0, 2pi). Im sqrt(mu) > 0 for every mu off [0, inf).
cplx branch_sqrt(cplx mu);

// Radial kernel of (-Delta - mu) in dimension d.
class FundamentalSolution {
 public:
  FundamentalSolution(int dim, cplx mu);

  int dim() const noexcept { return dim_; }
  cplx mu() const noexcept { return mu_; }
  cplx sqrt_mu() const noexcept { return kappa_; }
  // sqrt(tau) = |mu|^{1/2} sin(theta/2); g_{-tau} dominates g_mu up to a constant.
  double tau() const noexcept { return kappa_.imag() * kappa_.imag(); }

  cplx operator()(double r) const;

 private:
  int dim_;
  cplx mu_;
  cplx kappa_;
};

cplx fundamental_eval(const FundamentalSolution& fs, double r);

// Odd d: g = e^{i kappa r} sum_m c_m r^{-m}, c built by g^{d+2} = -(d/dr g^d) / (2 pi r).
std::vector<cplx> odd_dimension_coefficients(int dim, cplx kappa);

// Integer order, Re w > 0 (K) and Im z >= 0 (H).
cplx bessel_k(int nu, cplx w);
cplx hankel1(int nu, cplx z);

// Relative residual of the radial Helmholtz equation at r, by central differences.
double helmholtz_residual(const FundamentalSolution& fs, double r);
// Relative mismatch between g^{d+2} and -(d/dr g^d)/(2 pi r), derivative by differences.
double recurrence_residual(const FundamentalSolution& fs, double r);

struct DominationCheck {
  double tau = 0.0;
  double C = 0.0;            // max |g_mu| / g_{-tau} over the grid
  double tail_growth = 0.0;  // slope of log(|g_mu| / g_{-tau}) in r over the outer quarter
  std::size_t samples = 0;
  bool holds = false;
};

// Log-spaced grid on [r_min, r_max]. holds when the ratio stays bounded, i.e. it has no
// residual exponential growth in the tail beyond 2% of sqrt(tau).
DominationCheck check_domination(const FundamentalSolution& fs, double r_min, double r_max,
                                 std::size_t points = 200);

}  // namespace mslab
