#include "mslab/krylov.hpp"

#include <cmath>
#include <limits>

namespace mslab {

KrylovResult minres(const RealOp& A, const RealOp& M, const Eigen::VectorXd& b,
                    Eigen::VectorXd& x, double rtol, int max_iter) {
  const auto n = b.size();
  x = Eigen::VectorXd::Zero(n);
  KrylovResult res;
  Eigen::VectorXd r1 = b;
  Eigen::VectorXd y = M(r1);
  double beta1 = r1.dot(y);
  if (beta1 <= 0.0) {
    res.converged = beta1 == 0.0;
    return res;
  }
  beta1 = std::sqrt(beta1);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n), w2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r2 = r1;
  const double tiny = std::numeric_limits<double>::epsilon();
  for (int itn = 1; itn <= max_iter; ++itn) {
    const double s = 1.0 / beta;
    Eigen::VectorXd v = s * y;
    y = A(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = M(r2);
    oldb = beta;
    beta = r2.dot(y);
    if (beta < 0.0) break;
    beta = std::sqrt(beta);
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;
    res.iterations = itn;
    res.residual = phibar / beta1;
    if (res.residual <= rtol || beta <= tiny * beta1) {
      res.converged = true;
      break;
    }
  }
  return res;
}

KrylovResult gmres(const ComplexOp& A, const ComplexOp& P, const Eigen::VectorXcd& b,
                   Eigen::VectorXcd& x, double rtol, int restart, int max_iter) {
  const auto n = b.size();
  KrylovResult res;
  const double bnorm = b.norm();
  if (x.size() != n) x = Eigen::VectorXcd::Zero(n);
  if (bnorm == 0.0) {
    x.setZero();
    res.converged = true;
    return res;
  }
  int total = 0;
  while (total < max_iter) {
    Eigen::VectorXcd r = b - A(x);
    double beta = r.norm();
    res.residual = beta / bnorm;
    if (res.residual <= rtol) {
      res.converged = true;
      break;
    }
    const int m = restart;
    Eigen::MatrixXcd V(n, m + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
    Eigen::VectorXcd cs = Eigen::VectorXcd::Zero(m), sn = Eigen::VectorXcd::Zero(m);
    Eigen::VectorXcd gvec = Eigen::VectorXcd::Zero(m + 1);
    gvec(0) = beta;
    V.col(0) = r / beta;
    int k = 0;
    for (; k < m && total < max_iter; ++k, ++total) {
      Eigen::VectorXcd w = A(P(V.col(k)));
      for (int i = 0; i <= k; ++i) {
        H(i, k) = V.col(i).dot(w);
        w -= H(i, k) * V.col(i);
      }
      for (int i = 0; i <= k; ++i) {
        const auto hik = V.col(i).dot(w);
        H(i, k) += hik;
        w -= hik * V.col(i);
      }
      H(k + 1, k) = w.norm();
      if (std::abs(H(k + 1, k)) > 0.0) V.col(k + 1) = w / H(k + 1, k);
      for (int i = 0; i < k; ++i) {
        const auto t = std::conj(cs(i)) * H(i, k) + std::conj(sn(i)) * H(i + 1, k);
        H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
        H(i, k) = t;
      }
      const double a = std::abs(H(k, k)), bb = std::abs(H(k + 1, k));
      const double rr = std::hypot(a, bb);
      if (rr == 0.0) {
        cs(k) = 1.0;
        sn(k) = 0.0;
      } else {
        cs(k) = H(k, k) / rr;
        sn(k) = H(k + 1, k) / rr;
      }
      H(k, k) = rr;
      H(k + 1, k) = 0.0;
      gvec(k + 1) = -sn(k) * gvec(k);
      gvec(k) = std::conj(cs(k)) * gvec(k);
      res.residual = std::abs(gvec(k + 1)) / bnorm;
      if (res.residual <= rtol) {
        ++k;
        ++total;
        break;
      }
    }
    Eigen::VectorXcd yk = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(gvec.head(k));
    x += P(V.leftCols(k) * yk);
    res.iterations = total;
    if (res.residual <= rtol) {
      res.residual = (b - A(x)).norm() / bnorm;
      res.converged = res.residual <= 10 * rtol;
      if (res.converged) break;
    }
  }
  return res;
}

ArnoldiResult arnoldi(const ComplexOp& A, const Eigen::VectorXcd& start, int m) {
  const auto n = start.size();
  ArnoldiResult out;
  out.basis = Eigen::MatrixXcd::Zero(n, m + 1);
  out.hessenberg = Eigen::MatrixXcd::Zero(m + 1, m);
  out.basis.col(0) = start / start.norm();
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXcd w = A(out.basis.col(k));
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= k; ++i) {
        const auto h = out.basis.col(i).dot(w);
        out.hessenberg(i, k) += h;
        w -= h * out.basis.col(i);
      }
    }
    const double h = w.norm();
    out.hessenberg(k + 1, k) = h;
    out.steps = k + 1;
    if (h < 1e-14) break;
    out.basis.col(k + 1) = w / h;
  }
  return out;
}

}  // namespace mslab
