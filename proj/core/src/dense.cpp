#include "mslab/dense.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <string>

#include "mslab/error.hpp"

namespace mslab::dense {

EigenDecomposition eig(const Eigen::MatrixXd& A, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  require(A.rows() == A.cols(), "eig needs a square matrix");
  Eigen::MatrixXd a = A;
  Eigen::VectorXd wr(n), wi(n);
  Eigen::MatrixXd vr(vectors ? n : 1, vectors ? n : 1);
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, a.data(), n, wr.data(),
                    wi.data(), nullptr, 1, vr.data(), vectors ? n : 1);
  if (info != 0) fail(ErrorKind::NotConverged, "dgeev failed, info=" + std::to_string(info));
  EigenDecomposition out;
  out.values.resize(n);
  for (lapack_int i = 0; i < n; ++i) out.values(i) = {wr(i), wi(i)};
  if (vectors) {
    out.vectors.resize(n, n);
    for (lapack_int j = 0; j < n; ++j) {
      if (wi(j) == 0.0) {
        out.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
      } else {
        const std::complex<double> I(0.0, 1.0);
        out.vectors.col(j) = vr.col(j).cast<std::complex<double>>() + I * vr.col(j + 1);
        out.vectors.col(j + 1) = vr.col(j).cast<std::complex<double>>() - I * vr.col(j + 1);
        ++j;
      }
    }
  }
  return out;
}

EigenDecomposition eig(const Eigen::MatrixXcd& A, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  require(A.rows() == A.cols(), "eig needs a square matrix");
  Eigen::MatrixXcd a = A;
  Eigen::VectorXcd w(n);
  Eigen::MatrixXcd vr(vectors ? n : 1, vectors ? n : 1);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(vr.data()), vectors ? n : 1);
  if (info != 0) fail(ErrorKind::NotConverged, "zgeev failed, info=" + std::to_string(info));
  EigenDecomposition out;
  out.values = w;
  if (vectors) out.vectors = vr;
  return out;
}

SymmetricDecomposition eig_symmetric(const Eigen::MatrixXd& A, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  require(A.rows() == A.cols(), "eig_symmetric needs a square matrix");
  Eigen::MatrixXd a = A;
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) fail(ErrorKind::NotConverged, "dsyevd failed, info=" + std::to_string(info));
  SymmetricDecomposition out;
  out.values = w;
  if (vectors) out.vectors = std::move(a);
  return out;
}

}  // namespace mslab::dense
