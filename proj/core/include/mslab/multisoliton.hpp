#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mslab/boundstate.hpp"
#include "mslab/evolution.hpp"
#include "mslab/field.hpp"
#include "mslab/fit.hpp"
#include "mslab/localized.hpp"
#include "mslab/nonlinearity.hpp"
#include "mslab/soliton.hpp"

namespace mslab {

struct EnsembleConfig {
  std::vector<SolitonParams> solitons;
  double omega_star = 0.0;  // min omega_j / 2
  double v_star = 0.0;      // min |v_j - v_k| / 9
  double alpha = 0.0;       // ensemble_alpha(N, d)

  std::size_t size() const noexcept { return solitons.size(); }
  const GridSpec& grid() const { return solitons.at(0).state.profile.grid(); }
  int dim() const { return grid().dim(); }

  static EnsembleConfig make(std::vector<SolitonParams> solitons);
};

// Checks the stored constants against a recomputation and the per-soliton invariants.
void validate(const EnsembleConfig& cfg);

// Rate alpha omega_star^{1/2} v_star of the uniform estimate.
double uniform_bound_rate(const EnsembleConfig& cfg);

struct BackwardSample {
  double t = 0.0;
  double error_l2 = 0.0;
  double error_h1 = 0.0;  // ||u(t) - R(t)||_{H^1}
  double mass = 0.0;
  double energy = 0.0;
  std::vector<double> momentum;
  std::vector<double> local_mass;  // M_j
  std::vector<std::vector<double>> local_momentum;
  std::vector<double> local_action;  // S_j
};

struct BackwardResult {
  std::vector<BackwardSample> samples;  // ordered from T_n down to T_0
  Field final_state;                    // u(T_0)
  std::vector<double> direction;        // e1 used by the cutoffs
  RateFit error_fit;                    // decay rate of e(t) above the fit floor
  double bound_sup = 0.0;               // sup_t e(t) exp(rate t)
  std::vector<std::string> warnings;

  std::vector<double> times() const;
  std::vector<double> errors() const;
};

struct BackwardOptions {
  std::size_t stride = 50;   // steps between samples
  double fit_floor = 1e-11;  // error samples below this are left out of the rate fit
  bool localized = true;     // record M_j and S_j
};

// u(T_n) = R(T_n), integrated backward to T_0.
BackwardResult backward_construct(const EnsembleConfig& cfg, const Nonlinearity& nl,
                                  const Integrator& intg, double Tn, double T0,
                                  const BackwardOptions& opt = {});

// Largest error of the N = 1 runs of every soliton in cfg over [T0, Tn]: the part of e(t) that is
// pure discretization.
double discretization_floor(const EnsembleConfig& cfg, const Nonlinearity& nl,
                            const Integrator& intg, double Tn, double T0, std::size_t stride = 50);

struct CoercivityData {
  double K0 = 0.0;
  int nu0 = 0;
  std::vector<Field> directions;  // X~^k_0, unit L2 norm, R^2-valued fields packed
  std::vector<double> eigenvalues;  // eigenvalue of each direction, ascending
  std::vector<int> block;           // +1 for the real-part block, -1 for the imaginary one
  double gap = 0.0;                 // smallest eigenvalue at or above the threshold
  int negative_plus = 0;            // eigenvalues < -tol in the + block
  int negative_minus = 0;
};

// Dense eigensolve of the unboosted form H~_0 split into its diagonal blocks
// L+ = -Delta + omega - g - 2 g' Phi^2 and L- = -Delta + omega - g.
CoercivityData coercivity_data(const Nonlinearity& nl, const SolitonParams& p, double threshold);

// H~_0(z) and H_0(t, w) by quadrature.
double coercivity_form_rest(const Nonlinearity& nl, const BoundState& b, const Field& z);
double coercivity_form(const Nonlinearity& nl, const SolitonParams& p, double t, const Field& w);

// w(x) = e^{i Theta(x, t)} z(x - v t - x0) and its inverse, with
// Theta = v.x/2 - |v|^2 t/4 + omega t + gamma.
Field boost_field(const SolitonParams& p, const Field& z, double t);
Field unboost_field(const SolitonParams& p, const Field& w, double t);

struct DistanceMode {
  enum class Kind { Global, Ball };
  Kind kind = Kind::Global;
  double radius = 0.0;          // M for Ball
  std::vector<double> center;   // ball centre, empty means the origin

  static DistanceMode global() { return {}; }
  static DistanceMode ball(double M, std::vector<double> c = {}) {
    return {Kind::Ball, M, std::move(c)};
  }
};

struct FamilyDistance {
  double dist = 0.0;
  std::vector<double> y;
  double theta = 0.0;
};

// inf over y, theta of ||u - e^{i theta} templ(. - y)||, in L2 or L2(B(c, M)). In ball mode the
// shift search is confined to |y - c| <= M.
FamilyDistance family_distance(const Field& u, const Field& templ,
                               const DistanceMode& mode = DistanceMode::global());
FamilyDistance family_distance(const Field& u, const BoundState& b,
                               const DistanceMode& mode = DistanceMode::global());

// Distance at fixed (y, theta), and the optimal phase arg <u, templ(. - y)> at fixed y.
double distance_at(const Field& u, const Field& templ, std::span<const double> y, double theta,
                   const DistanceMode& mode = DistanceMode::global());
double optimal_phase(const Field& u, const Field& templ, std::span<const double> y,
                     const DistanceMode& mode = DistanceMode::global());

struct MultiFamilyDistance {
  double dist = 0.0;
  std::vector<FamilyDistance> members;
  int sweeps = 0;
};

// Coordinate descent over the soliton templates e^{i v_j.x/2} Phi_j, each refined inside
// B(current y_j, M) starting from the expected centres at time t.
MultiFamilyDistance multi_family_distance(const Field& u, const std::vector<SolitonParams>& ps,
                                          double t, double M, int max_sweeps = 8);

}  // namespace mslab
