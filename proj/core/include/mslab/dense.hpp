#pragma once

#include <Eigen/Dense>

namespace mslab::dense {

struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // right eigenvectors, columns; empty when not requested
};

// LAPACK dgeev / zgeev on a copy of A.
EigenDecomposition eig(const Eigen::MatrixXd& A, bool vectors);
EigenDecomposition eig(const Eigen::MatrixXcd& A, bool vectors);

struct SymmetricDecomposition {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors;
};

// LAPACK dsyevd.
SymmetricDecomposition eig_symmetric(const Eigen::MatrixXd& A, bool vectors);

}  // namespace mslab::dense
