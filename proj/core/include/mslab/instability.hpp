#pragma once

#include <string>
#include <vector>

#include "mslab/evolution.hpp"
#include "mslab/fit.hpp"
#include "mslab/linearization.hpp"
#include "mslab/multisoliton.hpp"
#include "mslab/profile.hpp"

namespace mslab {

struct InstabilityOptions {
  double S = 0.0;                // original time at which the profile data is taken
  double T0 = 0.0;               // original time at which the run stops, T0 < S
  std::size_t stride = 20;       // steps between samples
  double saturation = 0.1;       // linear window: perturbation < saturation * ||Phi||_{H^1}
  bool keep_states = false;      // store the reconstructed u(s) at every sample
};

struct InstabilitySample {
  double t = 0.0;              // time of the reversed run, 0 at s = S
  double s = 0.0;              // original time S - t
  double distance = 0.0;       // modulation distance of the reversed state to the family
  double perturbation = 0.0;   // ||u(s) - R1(s)||_{H^1}
  double remainder = 0.0;      // ||u(s) - R1(s) - a e^{i omega s} Y(s)||_{H^1}
  double y_norm = 0.0;         // ||Y(s)||_{H^1}
};

struct InstabilityResult {
  std::vector<InstabilitySample> samples;
  std::vector<Field> states;  // u(s) per sample when requested
  LinearFit growth;           // log(perturbation) against t inside the linear window
  double fitted_rate = 0.0;
  std::size_t window = 0;
  bool blew_up = false;
  std::string note;
};

// The soliton is taken at rest at the origin with zero phase. The profile solution
// u(s) = e^{i omega s}(Phi + W(s)) is taken at s = S, reflected by u_n(t) = conj(u(S - t)) e^{i omega S}
// and integrated forward to t = S - T0, so the Y component is seen growing.
InstabilityResult instability_run(const Nonlinearity& nl, const SolitonParams& p1,
                                  const Spectrum& spec, const Profile& profile,
                                  const Integrator& intg, const InstabilityOptions& opt);

struct SeparationCheck {
  double C = 0.0;            // fitted max over both runs of remainder(s) e^{2 rho s}
  double worst_margin = 0.0; // min over samples of ||u_a - u_b|| - (|a-b| ||Y|| - 2 C e^{-2 rho s})
  bool holds = false;
  std::size_t samples = 0;
};

// ||u_a(s) - u_b(s)||_{H^1} >= |a - b| ||Y(s)||_{H^1} - 2 C e^{-2 rho s} over the samples of two
// runs taken with keep_states on the same time grid.
SeparationCheck separation_check(const InstabilityResult& a, double amp_a, const InstabilityResult& b,
                                 double amp_b, double rho);

struct GluedOptions {
  InstabilityOptions base;
  double ball_radius = 0.0;  // 0 means 6 / sqrt(min omega)
};

struct GluedSample {
  double t = 0.0;
  double interaction = 0.0;   // sum_{j>=2} ||u~(t) R_j(t)||_{L^2}
  double family = 0.0;        // multi-family distance
  double perturbation = 0.0;  // ||u(t) - sum_j R_j(t)||_{H^1}
};

struct GluedResult {
  std::vector<GluedSample> samples;
  LinearFit growth;
  double fitted_rate = 0.0;
  std::size_t window = 0;
  bool blew_up = false;
  std::vector<std::string> warnings;
};

// Soliton 0 of cfg carries the profile and must be at rest at the origin; the others are given in
// the frame of the reversed run and are added to its initial data.
GluedResult glued_instability_run(const EnsembleConfig& cfg, const Nonlinearity& nl,
                                  const Spectrum& spec, const Profile& profile,
                                  const Integrator& intg, const GluedOptions& opt);

// Initial interaction sum_{j>=2} ||R_1(0) R_j(0)||_{L^2} for the glued configuration.
double initial_interaction(const EnsembleConfig& cfg);

}  // namespace mslab
