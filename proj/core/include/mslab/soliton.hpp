#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mslab/boundstate.hpp"
#include "mslab/field.hpp"

namespace mslab {

// Collects non-fatal warnings; an empty sink discards them.
using WarningSink = std::function<void(const std::string&)>;

struct SolitonParams {
  BoundState state;
  double gamma = 0.0;
  std::vector<double> v;   // size dim, empty means 0
  std::vector<double> x0;  // size dim, empty means 0

  int dim() const noexcept { return state.profile.grid().dim(); }
  double omega() const noexcept { return state.omega; }
  std::vector<double> velocity() const;
  std::vector<double> position() const;
  // Centre at time t: x0 + v t.
  std::vector<double> center(double t) const;
};

void validate(const SolitonParams& p);

// Phi(x - v t - x0) exp(i(v.x/2 - |v|^2 t/4 + omega t + gamma)), the shift applied spectrally
// (periodic wrap). The profile must live on `grid`.
Field soliton_field(const SolitonParams& p, const GridSpec& grid, double t,
                    const WarningSink& warn = {});

// Same without the phase factor exp(i(omega t + gamma)); the Galilean part only.
Field boosted_profile(const SolitonParams& p, const GridSpec& grid, double t);

Field soliton_sum(const std::vector<SolitonParams>& ps, const GridSpec& grid, double t,
                  const WarningSink& warn = {});

// i u_t + Delta u + f(u) for the exact soliton, with u_t from the closed form.
Field soliton_residual(const Nonlinearity& nl, const SolitonParams& p, const GridSpec& grid,
                       double t);

}  // namespace mslab
