#pragma once

#include <Eigen/Dense>
#include <functional>

namespace mslab {

using RealOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using ComplexOp = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct KrylovResult {
  int iterations = 0;
  double residual = 0.0;  // relative
  bool converged = false;
};

// Preconditioned MINRES for symmetric (possibly indefinite or singular) A with
// symmetric positive definite preconditioner M ~ A^{-1}.
KrylovResult minres(const RealOp& A, const RealOp& M, const Eigen::VectorXd& b,
                    Eigen::VectorXd& x, double rtol, int max_iter);

// Restarted right-preconditioned GMRES; P ~ A^{-1}.
KrylovResult gmres(const ComplexOp& A, const ComplexOp& P, const Eigen::VectorXcd& b,
                   Eigen::VectorXcd& x, double rtol, int restart, int max_iter);

struct ArnoldiResult {
  Eigen::MatrixXcd basis;      // n x m
  Eigen::MatrixXcd hessenberg;  // (m+1) x m
  int steps = 0;
};

ArnoldiResult arnoldi(const ComplexOp& A, const Eigen::VectorXcd& start, int m);

}  // namespace mslab
