#include "mslab/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>

#include "mslab/dense.hpp"
#include "mslab/error.hpp"
#include "mslab/fft.hpp"
#include "mslab/fit.hpp"
#include "mslab/krylov.hpp"
#include "mslab/snapshot.hpp"
#include "mslab/spectral.hpp"

namespace mslab {

C2Field operator+(const C2Field& a, const C2Field& b) { return {a.plus + b.plus, a.minus + b.minus}; }
C2Field operator-(const C2Field& a, const C2Field& b) { return {a.plus - b.plus, a.minus - b.minus}; }
C2Field operator*(cplx s, const C2Field& a) { return {s * a.plus, s * a.minus}; }

cplx inner_l2(const C2Field& a, const C2Field& b) {
  return inner_l2(a.plus, b.plus) + inner_l2(a.minus, b.minus);
}

double norm_l2(const C2Field& a) { return std::hypot(norm_l2(a.plus), norm_l2(a.minus)); }
double norm_h1(const C2Field& a) { return std::hypot(norm_h1(a.plus), norm_h1(a.minus)); }
C2Field c2_zeros(const GridSpec& g) { return {Field::zeros(g), Field::zeros(g)}; }

Field pack_real_pair(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx(a[i].real(), b[i].real());
  return a.with_values(std::move(v));
}

std::pair<Field, Field> split_real_pair(const Field& w) {
  return {from_real(w.grid(), w.real_part(), {}, w.time()),
          from_real(w.grid(), w.imag_part(), {}, w.time())};
}

C2Field complexify(const Field& C, const Field& D) {
  require_same_grid(C.grid(), D.grid());
  std::vector<cplx> p(C.size()), m(C.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = cplx(C[i].real(), D[i].real());
    m[i] = cplx(C[i].imag(), D[i].imag());
  }
  return {C.with_values(std::move(p)), C.with_values(std::move(m))};
}

std::pair<Field, Field> decomplexify(const C2Field& X) {
  std::vector<cplx> c(X.plus.size()), d(X.plus.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = cplx(X.plus[i].real(), X.minus[i].real());
    d[i] = cplx(X.plus[i].imag(), X.minus[i].imag());
  }
  return {X.plus.with_values(std::move(c)), X.plus.with_values(std::move(d))};
}

BlockOperator::BlockOperator(GridSpec grid, double omega, Coeffs kinetic, Potentials potential)
    : grid_(grid), omega_(omega), kinetic_(kinetic), potential_(std::move(potential)) {
  for (auto& row : potential_)
    for (auto& v : row) {
      if (v.empty()) v.assign(grid_.size(), 0.0);
      require(v.size() == grid_.size(), "potential size must match grid");
    }
  real_ = true;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      if (kinetic_[r][c].imag() != 0.0) real_ = false;
      for (const auto& z : potential_[r][c])
        if (z.imag() != 0.0) real_ = false;
    }
}

BlockOperator BlockOperator::around(const Nonlinearity& nl, const Field& phi, double omega) {
  const std::size_t N = phi.size();
  std::vector<double> J(N), Ip(N), Im(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double a = phi[i].real(), b = phi[i].imag();
    const double s = a * a + b * b;
    const double g = nl.g(s);
    const double dg = s > 0 ? nl.dg(s) : 0.0;
    J[i] = 2.0 * a * b * dg;
    Ip[i] = g + 2.0 * a * a * dg;
    Im[i] = g + 2.0 * b * b * dg;
  }
  Coeffs K{{{0.0, -1.0}, {1.0, 0.0}}};
  Potentials V;
  V[0][0].resize(N);
  V[0][1].resize(N);
  V[1][0].resize(N);
  V[1][1].resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    V[0][0][i] = J[i];
    V[0][1][i] = Im[i];
    V[1][0][i] = -Ip[i];
    V[1][1][i] = -J[i];
  }
  BlockOperator op(phi.grid(), omega, K, std::move(V));
  op.J_ = std::move(J);
  op.Ip_ = std::move(Ip);
  op.Im_ = std::move(Im);
  return op;
}

BlockOperator assemble(const Nonlinearity& nl, const BoundState& b) {
  return BlockOperator::around(nl, b.profile, b.omega);
}

namespace {

std::vector<cplx> helmholtz(const GridSpec& g, double omega, std::span<const cplx> x) {
  std::vector<cplx> v(x.begin(), x.end());
  fft::forward(g, v);
  const auto& k2 = fft::k_squared(g);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= k2[i] + omega;
  fft::inverse(g, v);
  return v;
}

void apply_raw(const BlockOperator& op, std::span<const cplx> zp, std::span<const cplx> zm,
               std::span<cplx> op_out, std::span<cplx> om_out) {
  const auto& g = op.grid();
  const auto& K = op.kinetic();
  const auto& V = op.potential();
  const bool need_p = K[0][0] != 0.0 || K[1][0] != 0.0;
  const bool need_m = K[0][1] != 0.0 || K[1][1] != 0.0;
  std::vector<cplx> tp, tm;
  if (need_p) tp = helmholtz(g, op.omega(), zp);
  if (need_m) tm = helmholtz(g, op.omega(), zm);
  const std::size_t N = g.size();
  for (std::size_t i = 0; i < N; ++i) {
    cplx a = V[0][0][i] * zp[i] + V[0][1][i] * zm[i];
    cplx b = V[1][0][i] * zp[i] + V[1][1][i] * zm[i];
    if (need_p) {
      a += K[0][0] * tp[i];
      b += K[1][0] * tp[i];
    }
    if (need_m) {
      a += K[0][1] * tm[i];
      b += K[1][1] * tm[i];
    }
    op_out[i] = a;
    om_out[i] = b;
  }
}

using Mat2 = std::array<std::array<cplx, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

const cplx I1(0.0, 1.0);
const Mat2 kP{{{1.0, I1}, {1.0, -I1}}};
const Mat2 kPinv{{{0.5, 0.5}, {-0.5 * I1, 0.5 * I1}}};

BlockOperator transform(const BlockOperator& op, const Mat2& left, const Mat2& right, cplx s) {
  auto conj2 = [&](const Mat2& m) {
    Mat2 r = mul(mul(left, m), right);
    for (auto& row : r)
      for (auto& z : row) z *= s;
    return r;
  };
  const auto K = conj2(op.kinetic());
  BlockOperator::Potentials V;
  const std::size_t N = op.grid().size();
  for (auto& row : V)
    for (auto& v : row) v.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    Mat2 m{{{op.potential()[0][0][i], op.potential()[0][1][i]},
            {op.potential()[1][0][i], op.potential()[1][1][i]}}};
    const auto t = conj2(m);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) V[r][c][i] = t[r][c];
  }
  return BlockOperator(op.grid(), op.omega(), K, std::move(V));
}

}  // namespace

C2Field BlockOperator::apply(const C2Field& z) const {
  require_same_grid(grid_, z.plus.grid());
  require_same_grid(grid_, z.minus.grid());
  std::vector<cplx> a(grid_.size()), b(grid_.size());
  apply_raw(*this, z.plus.values(), z.minus.values(), a, b);
  return {z.plus.with_values(std::move(a)), z.minus.with_values(std::move(b))};
}

Field BlockOperator::apply_packed(const Field& w) const {
  require(real_, "packed application needs a real operator");
  auto [a, b] = split_real_pair(w);
  const auto out = apply({a, b});
  return pack_real_pair(out.plus, out.minus);
}

Eigen::VectorXcd BlockOperator::apply_flat(const Eigen::VectorXcd& x) const {
  const std::size_t N = grid_.size();
  require(static_cast<std::size_t>(x.size()) == 2 * N, "flat vector has the wrong size");
  Eigen::VectorXcd y(2 * N);
  apply_raw(*this, std::span<const cplx>(x.data(), N), std::span<const cplx>(x.data() + N, N),
            std::span<cplx>(y.data(), N), std::span<cplx>(y.data() + N, N));
  return y;
}

namespace {

// (-Delta + omega) as a dense multilevel circulant matrix.
Eigen::MatrixXd helmholtz_matrix(const GridSpec& g, double omega) {
  const std::size_t N = g.size();
  std::vector<cplx> e0(N, 0.0);
  e0[0] = 1.0;
  const auto col = helmholtz(g, omega, e0);
  Eigen::MatrixXd T(N, N);
  const std::size_t n = g.n();
  for (std::size_t j = 0; j < N; ++j) {
    const auto jj = g.unflatten(j);
    for (std::size_t i = 0; i < N; ++i) {
      const auto ii = g.unflatten(i);
      std::size_t idx = 0;
      for (int a = 0; a < g.dim(); ++a) idx = idx * n + (ii[a] + n - jj[a]) % n;
      T(i, j) = col[idx].real();
    }
  }
  return T;
}

}  // namespace

Eigen::MatrixXcd BlockOperator::dense() const {
  const std::size_t N = grid_.size();
  const Eigen::MatrixXd T = helmholtz_matrix(grid_, omega_);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      auto blk = A.block(r * N, c * N, N, N);
      if (kinetic_[r][c] != 0.0) blk = kinetic_[r][c] * T.cast<cplx>();
      for (std::size_t i = 0; i < N; ++i) blk(i, i) += potential_[r][c][i];
    }
  return A;
}

Eigen::MatrixXd BlockOperator::dense_real() const {
  require(real_, "dense_real needs a real operator");
  const std::size_t N = grid_.size();
  const Eigen::MatrixXd T = helmholtz_matrix(grid_, omega_);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      auto blk = A.block(r * N, c * N, N, N);
      if (kinetic_[r][c] != 0.0) blk = kinetic_[r][c].real() * T;
      for (std::size_t i = 0; i < N; ++i) blk(i, i) += potential_[r][c][i].real();
    }
  return A;
}

C2Field apply_P(const C2Field& z) {
  return {z.plus + I1 * z.minus, z.plus - I1 * z.minus};
}

C2Field apply_P_inverse(const C2Field& z) {
  return {0.5 * (z.plus + z.minus), (-0.5 * I1) * (z.plus - z.minus)};
}

BlockOperator conjugate_to_Lprime(const BlockOperator& op) { return transform(op, kP, kPinv, I1); }

BlockOperator conjugate_from_Lprime(const BlockOperator& op) {
  return transform(op, kPinv, kP, -I1);
}

C2Field normalize_mode(const C2Field& z) {
  const double nrm = norm_l2(z);
  require(nrm > 0, "cannot normalize a zero mode");
  cplx big = 0.0;
  for (const auto* f : {&z.plus, &z.minus})
    for (const auto& v : f->values())
      if (std::abs(v) > std::abs(big)) big = v;
  const cplx rot = std::conj(big) / std::abs(big) / nrm;
  return rot * z;
}

namespace {

C2Field unflatten(const GridSpec& g, const Eigen::VectorXcd& x) {
  const std::size_t N = g.size();
  std::vector<cplx> p(x.data(), x.data() + N), m(x.data() + N, x.data() + 2 * N);
  return {Field(g, std::move(p)), Field(g, std::move(m))};
}

Eigen::VectorXcd flatten(const C2Field& z) {
  const std::size_t N = z.plus.size();
  Eigen::VectorXcd x(2 * N);
  for (std::size_t i = 0; i < N; ++i) {
    x(i) = z.plus[i];
    x(N + i) = z.minus[i];
  }
  return x;
}

double relative_residual(const BlockOperator& op, cplx mu, const Eigen::VectorXcd& v) {
  return (op.apply_flat(v) - mu * v).norm() / v.norm();
}

// Exact inverse of (K (-Delta + omega) - sigma) mode by mode.
ComplexOp free_preconditioner(const BlockOperator& op, cplx sigma) {
  return [&op, sigma](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    const auto& g = op.grid();
    const std::size_t N = g.size();
    std::vector<cplx> a(x.data(), x.data() + N), b(x.data() + N, x.data() + 2 * N);
    fft::forward(g, a);
    fft::forward(g, b);
    const auto& k2 = fft::k_squared(g);
    const auto& K = op.kinetic();
    for (std::size_t i = 0; i < N; ++i) {
      const double s = k2[i] + op.omega();
      const cplx m00 = K[0][0] * s - sigma, m01 = K[0][1] * s, m10 = K[1][0] * s,
                 m11 = K[1][1] * s - sigma;
      const cplx det = m00 * m11 - m01 * m10;
      const cplx u = (m11 * a[i] - m01 * b[i]) / det;
      const cplx w = (-m10 * a[i] + m00 * b[i]) / det;
      a[i] = u;
      b[i] = w;
    }
    fft::inverse(g, a);
    fft::inverse(g, b);
    Eigen::VectorXcd y(2 * N);
    for (std::size_t i = 0; i < N; ++i) {
      y(i) = a[i];
      y(N + i) = b[i];
    }
    return y;
  };
}

struct EigenPair {
  cplx value;
  Eigen::VectorXcd vector;
  double residual;
};

std::vector<EigenPair> shift_invert_pairs(const BlockOperator& op, cplx sigma,
                                          const SpectrumOptions& opt) {
  const std::size_t M = op.assembled_dim();
  const auto P = free_preconditioner(op, sigma);
  ComplexOp shifted = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    return op.apply_flat(x) - sigma * x;
  };
  ComplexOp inv = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
    const auto r = gmres(shifted, P, x, y, 1e-12, 80, 4000);
    if (!r.converged && r.residual > 1e-8)
      fail(ErrorKind::NotConverged,
           "inner solve failed near shift, residual " + std::to_string(r.residual));
    return y;
  };
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd start(M);
  for (std::size_t i = 0; i < M; ++i) start(i) = cplx(nd(rng), nd(rng));
  std::vector<EigenPair> best;
  for (int pass = 0; pass < opt.restarts; ++pass) {
    const auto ar = arnoldi(inv, start, opt.krylov_dim);
    const int m = ar.steps;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(ar.hessenberg.topLeftCorner(m, m));
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(ces.eigenvalues()(a)) > std::abs(ces.eigenvalues()(b));
    });
    best.clear();
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(M);
    bool done = true;
    for (int q = 0; q < std::min(opt.eigs_per_shift, m); ++q) {
      const cplx nu = ces.eigenvalues()(order[q]);
      if (std::abs(nu) == 0.0) continue;
      Eigen::VectorXcd v = ar.basis.leftCols(m) * ces.eigenvectors().col(order[q]);
      v /= v.norm();
      const cplx mu = sigma + 1.0 / nu;
      const double res = relative_residual(op, mu, v);
      best.push_back({mu, v, res});
      next += v;
      if (res > opt.tol * std::max(1.0, std::abs(mu))) done = false;
    }
    if (done) break;
    start = next;
  }
  return best;
}

Eigen::VectorXcd inverse_iteration(const Eigen::MatrixXcd& A, cplx lambda) {
  const auto M = A.rows();
  const cplx sigma = lambda + cplx(1e-10, 1e-10) * (1.0 + std::abs(lambda));
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A - sigma * Eigen::MatrixXcd::Identity(M, M));
  std::mt19937_64 rng(99);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd x(M);
  for (Eigen::Index i = 0; i < M; ++i) x(i) = cplx(nd(rng), 0.0);
  for (int it = 0; it < 3; ++it) {
    x = lu.solve(x);
    x /= x.norm();
  }
  return x;
}

}  // namespace

Spectrum spectrum(const BlockOperator& op, int count, const SpectrumOptions& opt) {
  const std::size_t M = op.assembled_dim();
  auto mode = opt.mode;
  if (mode == SpectrumOptions::Mode::Auto)
    mode = op.grid().size() <= 4096 && opt.shifts.empty() ? SpectrumOptions::Mode::Dense
                                                           : SpectrumOptions::Mode::ShiftInvert;
  std::vector<EigenPair> pairs;
  bool real_lambda = false;
  if (mode == SpectrumOptions::Mode::Dense) {
    require(op.grid().size() <= 4096, "dense eigensolve limited to n^d <= 4096");
    dense::EigenDecomposition ed;
    Eigen::MatrixXcd Ac;
    if (op.is_real()) {
      const Eigen::MatrixXd A = op.dense_real();
      ed = dense::eig(A, opt.all_residuals);
      if (!opt.all_residuals) Ac = A.cast<cplx>();
    } else {
      Ac = op.dense();
      ed = dense::eig(Ac, opt.all_residuals);
    }
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const cplx x = ed.values(a), y = ed.values(b);
      if (x.real() != y.real()) return x.real() > y.real();
      return x.imag() > y.imag();
    });
    const std::size_t take = count <= 0 ? M : std::min<std::size_t>(count, M);
    for (std::size_t q = 0; q < take; ++q) {
      const int idx = order[q];
      EigenPair p{ed.values(idx), {}, std::nan("")};
      if (opt.all_residuals) {
        p.vector = ed.vectors.col(idx);
        p.residual = relative_residual(op, p.value, p.vector);
      }
      pairs.push_back(std::move(p));
    }
    if (!opt.all_residuals) {
      pairs.front().vector = inverse_iteration(Ac, pairs.front().value);
      pairs.front().residual = relative_residual(op, pairs.front().value, pairs.front().vector);
    }
    real_lambda = op.is_real() && pairs.front().value.imag() == 0.0;
  } else {
    require(!opt.shifts.empty(), "shift-invert mode needs at least one shift");
    for (const cplx s : opt.shifts) {
      auto found = shift_invert_pairs(op, s, opt);
      const std::size_t raw = found.size();
      for (std::size_t q = 0; q < raw; ++q)
        if (op.is_real() && std::abs(found[q].value.imag()) > 1e-10)
          found.push_back({std::conj(found[q].value), found[q].vector.conjugate(), found[q].residual});
      for (auto& p : found) {
        if (!(p.residual <= 1e-6)) continue;
        bool dup = false;
        for (const auto& q : pairs)
          if (std::abs(q.value - p.value) < 1e-8 * std::max(1.0, std::abs(p.value))) dup = true;
        if (!dup) pairs.push_back(std::move(p));
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
      if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
      return a.value.imag() > b.value.imag();
    });
    if (count > 0 && pairs.size() > static_cast<std::size_t>(count)) pairs.resize(count);
    double worst = 0.0;
    for (const auto& p : pairs) worst = std::max(worst, p.residual);
    if (pairs.empty() || pairs.front().residual > 1e-6)
      fail(ErrorKind::NotConverged,
           "shift-invert iteration did not converge, worst residual " + std::to_string(worst));
    if (op.is_real() && std::abs(pairs.front().value.imag()) < 1e-10) {
      pairs.front().value = pairs.front().value.real();
      real_lambda = true;
    }
  }

  Spectrum out{{}, {}, pairs.front().value, unflatten(op.grid(), pairs.front().vector), 0, 0, 0};
  for (const auto& p : pairs) {
    out.eigenvalues.push_back(p.value);
    out.residuals.push_back(p.residual);
  }
  out.Z = normalize_mode(out.Z);
  if (real_lambda) {
    out.Z = {from_real(op.grid(), out.Z.plus.real_part()),
             from_real(op.grid(), out.Z.minus.real_part())};
    out.Z = normalize_mode(out.Z);
  }
  out.rho = out.lambda.real();
  out.theta = out.lambda.imag();
  const C2Field r = op.apply(out.Z) - out.lambda * out.Z;
  out.Z_residual = norm_l2(r) / norm_l2(out.Z);
  return out;
}

struct Resolvent::Impl {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  bool dense = false;
};

Resolvent::Resolvent(const BlockOperator& op, cplx mu, const ResolventOptions& opt)
    : op_(&op), mu_(mu), opt_(opt), impl_(std::make_unique<Impl>()) {
  if (std::abs(mu.real()) <= 1e-12 && std::abs(mu.imag()) >= op.omega())
    fail(ErrorKind::NearSingular, "mu too close to spectrum: mu lies on the essential segment");
  if (op.assembled_dim() <= opt.dense_limit) {
    const auto M = static_cast<Eigen::Index>(op.assembled_dim());
    impl_->lu.compute(op.dense() - mu * Eigen::MatrixXcd::Identity(M, M));
    impl_->dense = true;
    const double rc = impl_->lu.rcond();
    cond_ = rc > 0 ? 1.0 / rc : INFINITY;
    if (!(cond_ <= opt.max_condition))
      fail(ErrorKind::NearSingular,
           "mu too close to spectrum (condition estimate " + std::to_string(cond_) + ")");
  }
}

Resolvent::~Resolvent() = default;
Resolvent::Resolvent(Resolvent&&) noexcept = default;

C2Field Resolvent::solve(const C2Field& A) const {
  const Eigen::VectorXcd b = flatten(A);
  const double bn = b.norm();
  if (bn == 0.0) return c2_zeros(op_->grid());
  Eigen::VectorXcd x;
  auto residual = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return b - (op_->apply_flat(y) - mu_ * y);
  };
  if (impl_->dense) {
    x = impl_->lu.solve(b);
    for (int it = 0; it < 2; ++it) {
      const Eigen::VectorXcd r = residual(x);
      if (r.norm() <= 1e-13 * bn) break;
      x += impl_->lu.solve(r);
    }
  } else {
    const auto P = free_preconditioner(*op_, mu_);
    ComplexOp shifted = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
      return op_->apply_flat(y) - mu_ * y;
    };
    x = Eigen::VectorXcd::Zero(b.size());
    const auto r = gmres(shifted, P, b, x, opt_.gmres_tol, 100, 20000);
    if (!r.converged)
      fail(ErrorKind::NotConverged, "resolvent GMRES stalled at " + std::to_string(r.residual));
  }
  const double rel = residual(x).norm() / bn;
  if (rel > 1e-8)
    fail(ErrorKind::NearSingular,
         "mu too close to spectrum: resolvent residual " + std::to_string(rel));
  return unflatten(op_->grid(), x);
}

C2Field resolvent_solve(const BlockOperator& op, cplx mu, const C2Field& A,
                        const ResolventOptions& opt) {
  return Resolvent(op, mu, opt).solve(A);
}

DecayFit decay_rate_fit(const C2Field& Z) {
  const auto& g = Z.plus.grid();
  require(norm_l2(Z) > 0, "decay fit needs a nonzero mode");
  const double ell = g.half_length();
  std::vector<double> rs, ys;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(i);
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += x[a] * x[a];
    const double r = std::sqrt(r2);
    if (r < 0.4 * ell || r > 0.8 * ell) continue;
    const double v = std::abs(Z.plus[i]) + std::abs(Z.minus[i]);
    if (v == 0.0) fail(ErrorKind::NoCleanTail, "no clean exponential tail: tail underflowed to 0");
    rs.push_back(r);
    ys.push_back(std::log(v));
  }
  const auto lf = fit_linear(rs, ys);
  if (lf.r2 < 0.9)
    fail(ErrorKind::NoCleanTail,
         "no clean exponential tail (fit quality r2=" + std::to_string(lf.r2) + ")");
  return {-lf.slope, std::exp(lf.intercept), lf.r2};
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::Io, "cannot write " + path.string());
  os << "re,im,residual\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    os << s.eigenvalues[i].real() << "," << s.eigenvalues[i].imag() << "," << s.residuals[i]
       << "\n";
}

void write_mode(const std::filesystem::path& path, const C2Field& z) {
  write_snapshots(path, {z.plus, z.minus});
}

C2Field read_mode(const std::filesystem::path& path) {
  auto ch = read_snapshots(path);
  require(ch.size() == 2, "mode file must hold two channels");
  return {ch[0], ch[1]};
}

}  // namespace mslab
