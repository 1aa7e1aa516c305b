#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mslab/error.hpp"
#include "mslab/field.hpp"
#include "mslab/nonlinearity.hpp"

namespace mslab {

enum class Scheme { Strang };
enum class Direction { Forward, Backward };

struct Integrator {
  double dt = 1e-3;
  Scheme scheme = Scheme::Strang;
  Direction direction = Direction::Forward;
  bool dealias = false;
  double blowup_factor = 1e3;  // halt when max|u| exceeds this times the initial max

  double signed_dt() const noexcept { return direction == Direction::Forward ? dt : -dt; }
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, Field last) : Error(ErrorKind::BlowUp, what), last_(std::move(last)) {}
  const Field& last_state() const noexcept { return last_; }

 private:
  Field last_;
};

// One Strang step of size h (sign gives the direction): half kinetic, exact phase rotation,
// half kinetic.
Field strang_step(const Nonlinearity& nl, const Field& u, double h, bool dealias = false);

// One step of the integrator; time stamp advances by +-dt.
Field step(const Integrator& intg, const Nonlinearity& nl, const Field& u);

struct Observer {
  std::size_t stride = 1;  // in steps; the first and last states are always observed
  std::function<void(const Field&)> callback;
};

struct Trajectory {
  Field final_state;
  std::size_t steps = 0;
  double step_size = 0.0;  // equalized |dt| actually used
  std::vector<double> observed_times;
};

// Steps from u0.time() to t_end. The step is shrunk so an integer number of equal steps lands
// exactly on t_end, which keeps forward and backward runs mirror images.
Trajectory evolve(const Integrator& intg, const Nonlinearity& nl, const Field& u0, double t_end,
                  const std::vector<Observer>& observers = {});

struct Conserved {
  double E = 0.0;
  double M = 0.0;
  std::vector<double> P;
};

Conserved conserved(const Nonlinearity& nl, const Field& u);
double energy(const Nonlinearity& nl, const Field& u);
double mass(const Field& u);
std::vector<double> momentum(const Field& u);

}  // namespace mslab
