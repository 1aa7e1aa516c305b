#pragma once

#include <vector>

#include "mslab/field.hpp"
#include "mslab/nonlinearity.hpp"
#include "mslab/soliton.hpp"

namespace mslab {

// C-infinity step: 0 for s <= -1, 1 for s >= 1.
double smooth_step(double s);
double smooth_step_derivative(double s);

// Moving partition of unity along the unit direction e1. Soliton j keeps its index; the
// cutoffs follow the ordering of the projected velocities v_j . e1.
class CutoffFamily {
 public:
  CutoffFamily(std::vector<double> e1, const std::vector<std::vector<double>>& velocities);

  std::size_t size() const noexcept { return proj_.size(); }
  const std::vector<double>& direction() const noexcept { return e1_; }
  // Sorted projected velocities and the midpoints m_r = (w_{r-1} + w_r)/2, r >= 1.
  const std::vector<double>& sorted_speeds() const noexcept { return sorted_; }
  const std::vector<double>& midpoints() const noexcept { return mid_; }
  std::size_t rank(std::size_t j) const { return rank_.at(j); }

  // psi for rank r (r = 0 is identically 1) and phi for soliton j, on the grid at time t > 0.
  std::vector<double> psi_rank(std::size_t r, const GridSpec& g, double t) const;
  std::vector<double> phi(std::size_t j, const GridSpec& g, double t) const;

 private:
  std::vector<double> e1_;
  std::vector<double> proj_;
  std::vector<double> sorted_;
  std::vector<double> mid_;
  std::vector<std::size_t> rank_;
};

struct LocalQuantities {
  double M = 0.0;
  std::vector<double> P;
  double E = 0.0;
  double S = 0.0;
};

// Weighted mass, momentum, energy and action of u around soliton j with parameters p_j.
LocalQuantities localized_quantities(const CutoffFamily& cut, const Nonlinearity& nl,
                                     const Field& u, std::size_t j, const SolitonParams& pj);

// Localized quadratic form H_j(t, w) with the potentials of R_j(t), t = w.time().
double localized_hessian(const CutoffFamily& cut, const Nonlinearity& nl, const Field& w,
                         std::size_t j, const SolitonParams& pj);

// Sum_j S_j, and the route E(u) + sum_j [(omega_j + |v_j|^2/4) M_j/2 - v_j . P_j / 2].
double action_functional(const CutoffFamily& cut, const Nonlinearity& nl, const Field& u,
                         const std::vector<SolitonParams>& ps);
double action_functional_via_energy(const CutoffFamily& cut, const Nonlinearity& nl,
                                    const Field& u, const std::vector<SolitonParams>& ps);
double hessian_functional(const CutoffFamily& cut, const Nonlinearity& nl, const Field& w,
                          const std::vector<SolitonParams>& ps);

// Central difference of sampled values at the sample nearest to t.
double dS_dt_estimate(const std::vector<double>& times, const std::vector<double>& values,
                      double t);

}  // namespace mslab
