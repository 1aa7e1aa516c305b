#include "mslab/evolution.hpp"

#include <cmath>
#include <sstream>

#include "mslab/fft.hpp"
#include "mslab/spectral.hpp"

namespace mslab {
namespace {

constexpr cplx kI{0.0, 1.0};

class Stepper {
 public:
  Stepper(const Nonlinearity& nl, const GridSpec& g, double h, bool dealias)
      : nl_(nl), g_(g), h_(h), half_(g.size()) {
    const auto& k2 = fft::k_squared(g);
    for (std::size_t i = 0; i < half_.size(); ++i) half_[i] = std::exp(-kI * (0.5 * h * k2[i]));
    if (dealias) {
      const double cut = 2.0 / 3.0 * 3.14159265358979323846 / g.dx();
      for (int a = 0; a < g.dim(); ++a) {
        const auto& ka = fft::k_axis(g, a);
        for (std::size_t i = 0; i < half_.size(); ++i)
          if (std::abs(ka[i]) > cut) half_[i] = 0.0;
      }
    }
  }

  void operator()(std::vector<cplx>& u) const {
    kinetic(u);
    for (auto& z : u) z *= std::exp(kI * (h_ * nl_.g(std::norm(z))));
    kinetic(u);
  }

 private:
  void kinetic(std::vector<cplx>& u) const {
    fft::forward(g_, u);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= half_[i];
    fft::inverse(g_, u);
  }

  const Nonlinearity& nl_;
  GridSpec g_;
  double h_;
  std::vector<cplx> half_;
};

bool finite_max(const std::vector<cplx>& u, double& m) {
  m = 0.0;
  for (const auto& z : u) {
    const double a = std::abs(z);
    if (!std::isfinite(a)) return false;
    m = std::max(m, a);
  }
  return true;
}

}  // namespace

Field strang_step(const Nonlinearity& nl, const Field& u, double h, bool dealias) {
  std::vector<cplx> v = u.to_vector();
  Stepper(nl, u.grid(), h, dealias)(v);
  double m;
  if (!finite_max(v, m))
    throw BlowUpError("blow-up or instability detected: non-finite values after step", u);
  return Field(u.grid(), std::move(v), u.time() + h);
}

Field step(const Integrator& intg, const Nonlinearity& nl, const Field& u) {
  require(intg.dt > 0.0 && std::isfinite(intg.dt), "time step must be positive");
  return strang_step(nl, u, intg.signed_dt(), intg.dealias);
}

Trajectory evolve(const Integrator& intg, const Nonlinearity& nl, const Field& u0, double t_end,
                  const std::vector<Observer>& observers) {
  require(intg.dt > 0.0 && std::isfinite(intg.dt), "time step must be positive");
  const double span = t_end - u0.time();
  const bool forward = intg.direction == Direction::Forward;
  require(span == 0.0 || (span > 0.0) == forward,
          "end time is inconsistent with the integration direction");
  for (const auto& o : observers) require(o.stride >= 1, "observer stride must be >= 1");

  const std::size_t n =
      span == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(std::abs(span) / intg.dt - 1e-9));
  const double h = n == 0 ? 0.0 : span / static_cast<double>(n);
  Trajectory tr{u0, n, std::abs(h), {}};
  auto observe = [&](const Field& f, std::size_t k) {
    bool any = false;
    for (const auto& o : observers)
      if (k % o.stride == 0 || k == n) {
        o.callback(f);
        any = true;
      }
    if (any) tr.observed_times.push_back(f.time());
  };
  observe(u0, 0);
  if (n == 0) return tr;

  double m0;
  std::vector<cplx> u = u0.to_vector();
  finite_max(u, m0);
  const double limit = intg.blowup_factor * std::max(m0, 1e-300);
  const Stepper stepper(nl, u0.grid(), h, intg.dealias);
  std::vector<cplx> last = u;
  for (std::size_t k = 1; k <= n; ++k) {
    stepper(u);
    const double t = u0.time() + h * static_cast<double>(k);
    double m;
    if (!finite_max(u, m) || (m0 > 0.0 && m > limit)) {
      std::ostringstream os;
      os << "blow-up or instability detected at t=" << t << " (max|u|=" << m << ")";
      throw BlowUpError(os.str(), Field(u0.grid(), last, t - h));
    }
    if (!observers.empty()) {
      bool due = k == n;
      for (const auto& o : observers) due = due || k % o.stride == 0;
      if (due) observe(Field(u0.grid(), u, k == n ? t_end : t), k);
    }
    last = u;
  }
  tr.final_state = Field(u0.grid(), std::move(u), t_end);
  return tr;
}

double mass(const Field& u) {
  double s = 0.0;
  for (const auto& z : u.values()) s += std::norm(z);
  return s * u.grid().cell_volume();
}

std::vector<double> momentum(const Field& u) {
  const auto grad = gradient(u);
  std::vector<double> P;
  for (const auto& ga : grad) P.push_back(inner_l2(ga, u).imag());
  return P;
}

double energy(const Nonlinearity& nl, const Field& u) {
  double pot = 0.0;
  for (const auto& z : u.values()) pot += eval_primitive(nl, std::abs(z));
  return 0.5 * gradient_norm_sq(u) - pot * u.grid().cell_volume();
}

Conserved conserved(const Nonlinearity& nl, const Field& u) {
  return {energy(nl, u), mass(u), momentum(u)};
}

}  // namespace mslab
