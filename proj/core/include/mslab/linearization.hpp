#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <memory>
#include <vector>

#include "mslab/boundstate.hpp"
#include "mslab/field.hpp"
#include "mslab/nonlinearity.hpp"

namespace mslab {

// Pair of complex fields (Z+, Z-) acted on by the 2x2 block operator.
struct C2Field {
  Field plus;
  Field minus;
};

C2Field operator+(const C2Field& a, const C2Field& b);
C2Field operator-(const C2Field& a, const C2Field& b);
C2Field operator*(cplx s, const C2Field& a);
cplx inner_l2(const C2Field& a, const C2Field& b);
double norm_l2(const C2Field& a);
double norm_h1(const C2Field& a);
C2Field c2_zeros(const GridSpec& g);

// Real R^2-valued function (a, b) stored as the complex field a + i b, and back.
Field pack_real_pair(const Field& a, const Field& b);
std::pair<Field, Field> split_real_pair(const Field& w);
// X = C + i D componentwise, with C, D given as packed real pairs.
C2Field complexify(const Field& C, const Field& D);
std::pair<Field, Field> decomplexify(const C2Field& X);

// Block operator with entries k_rc * (-Delta + omega) + V_rc(x).
class BlockOperator {
 public:
  using Coeffs = std::array<std::array<cplx, 2>, 2>;
  using Potentials = std::array<std::array<std::vector<cplx>, 2>, 2>;

  BlockOperator(GridSpec grid, double omega, Coeffs kinetic, Potentials potential);

  const GridSpec& grid() const noexcept { return grid_; }
  double omega() const noexcept { return omega_; }
  std::size_t assembled_dim() const noexcept { return 2 * grid_.size(); }
  const Coeffs& kinetic() const noexcept { return kinetic_; }
  const Potentials& potential() const noexcept { return potential_; }
  bool is_real() const noexcept { return real_; }

  bool has_physical_potentials() const noexcept { return !J_.empty(); }
  const std::vector<double>& J() const noexcept { return J_; }
  const std::vector<double>& I_plus() const noexcept { return Ip_; }
  const std::vector<double>& I_minus() const noexcept { return Im_; }

  C2Field apply(const C2Field& z) const;
  // Action on an R^2-valued function packed as a complex field; requires is_real().
  Field apply_packed(const Field& w) const;
  Eigen::VectorXcd apply_flat(const Eigen::VectorXcd& x) const;

  Eigen::MatrixXd dense_real() const;
  Eigen::MatrixXcd dense() const;

  static BlockOperator around(const Nonlinearity& nl, const Field& phi, double omega);

 private:
  GridSpec grid_;
  double omega_;
  Coeffs kinetic_;
  Potentials potential_;
  bool real_ = true;
  std::vector<double> J_, Ip_, Im_;
};

BlockOperator assemble(const Nonlinearity& nl, const BoundState& b);

C2Field apply_P(const C2Field& z);
C2Field apply_P_inverse(const C2Field& z);
BlockOperator conjugate_to_Lprime(const BlockOperator& op);
BlockOperator conjugate_from_Lprime(const BlockOperator& op);

struct SpectrumOptions {
  enum class Mode { Auto, Dense, ShiftInvert };
  Mode mode = Mode::Auto;
  std::vector<cplx> shifts;
  int krylov_dim = 40;
  int eigs_per_shift = 6;
  int restarts = 6;
  double tol = 1e-10;
  bool all_residuals = true;
};

struct Spectrum {
  std::vector<cplx> eigenvalues;  // sorted by real part, descending
  std::vector<double> residuals;  // relative, NaN where not computed
  cplx lambda;
  C2Field Z;
  double rho = 0.0;
  double theta = 0.0;
  double Z_residual = 0.0;
};

Spectrum spectrum(const BlockOperator& op, int count, const SpectrumOptions& opt = {});

// Rescales to unit L2 norm and rotates so the largest-magnitude entry is real positive.
C2Field normalize_mode(const C2Field& z);

struct ResolventOptions {
  std::size_t dense_limit = 2048;  // assembled dimension up to which LU is used
  double max_condition = 1e12;
  double gmres_tol = 1e-11;
};

class Resolvent {
 public:
  Resolvent(const BlockOperator& op, cplx mu, const ResolventOptions& opt = {});
  ~Resolvent();
  Resolvent(Resolvent&&) noexcept;

  C2Field solve(const C2Field& A) const;
  double condition_estimate() const noexcept { return cond_; }
  cplx mu() const noexcept { return mu_; }

 private:
  struct Impl;
  const BlockOperator* op_;
  cplx mu_;
  ResolventOptions opt_;
  double cond_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

C2Field resolvent_solve(const BlockOperator& op, cplx mu, const C2Field& A,
                        const ResolventOptions& opt = {});

struct DecayFit {
  double alpha;
  double C;
  double r2;
};

DecayFit decay_rate_fit(const C2Field& Z);

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s);
void write_mode(const std::filesystem::path& path, const C2Field& z);
C2Field read_mode(const std::filesystem::path& path);

}  // namespace mslab
