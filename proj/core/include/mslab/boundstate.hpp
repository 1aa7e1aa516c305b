#pragma once

#include <filesystem>
#include <vector>

#include "mslab/field.hpp"
#include "mslab/nonlinearity.hpp"

namespace mslab {

struct ShootOptions {
  double phi_max = 100.0;
  double phi_min = 1e-3;
  int scan_points = 400;
  int max_bisections = 200;
  double r_max = 0.0;  // 0 means 12/sqrt(omega)
  double dr = 0.0;     // 0 means 4e-3/sqrt(omega)
  double rtol = 1e-12;
};

struct RadialProfile {
  int dim = 1;
  double omega = 1.0;
  int nodes = 0;
  double phi0 = 0.0;
  double dr = 0.0;
  double r_match = 0.0;
  std::vector<double> phi;   // samples at r_i = i*dr, i*dr <= r_match
  std::vector<double> dphi;

  // Hermite interpolation inside the mesh, exponential tail beyond r_match.
  double eval(double r) const;
};

RadialProfile shoot_radial(const Nonlinearity& nl, double omega, int nodes, int dim,
                           const ShootOptions& opt = {});
Field radial_to_grid(const RadialProfile& prof, const GridSpec& grid);

struct BoundState {
  double omega = 1.0;
  Field profile;
  int node_count = 0;
  double residual_linf = 0.0;
  double action = 0.0;
  int newton_iterations = 0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double accept = 1e-8;
  double min_amplitude = 1e-6;
};

BoundState newton_refine(const Nonlinearity& nl, const Field& guess, double omega,
                         const NewtonOptions& opt = {});

// Shooting, grid sampling and Newton polish in one call.
BoundState compute_bound_state(const Nonlinearity& nl, double omega, int nodes,
                               const GridSpec& grid, const ShootOptions& shoot = {},
                               const NewtonOptions& newton = {});

Field stationary_residual(const Nonlinearity& nl, const Field& phi, double omega);
double action(const Nonlinearity& nl, const Field& phi, double omega);
double action(const Nonlinearity& nl, const BoundState& b);

// Sign changes along the positive axis-0 ray through the grid centre.
int count_nodes(const Field& phi, double rel_floor = 1e-8);

// Decay rate of |phi| fitted along the positive axis-0 ray over [r0, r1].
double ray_decay_rate(const Field& phi, double r0, double r1);

void write_bound_state(const std::filesystem::path& stem, const BoundState& b);
BoundState read_bound_state(const std::filesystem::path& stem);

}  // namespace mslab
