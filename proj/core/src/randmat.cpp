#include "grassfeed/randmat.hpp"

#include <algorithm>

namespace grassfeed {

ComplexMatrix sample_complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& stream) {
  if (rows < 1 || cols < 1) throw InvalidParams("sample_complex_gaussian: dimensions must be >= 1");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = stream.cnormal();
  return m;
}

SvdResult svd(const ComplexMatrix& m) {
  if (m.size() == 0) throw InvalidParams("svd: empty matrix");
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("svd: Jacobi iteration did not converge");
  return SvdResult{solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

RealVector hermitian_eigvals(const ComplexMatrix& w) {
  if (w.rows() != w.cols()) throw NotHermitian("hermitian_eigvals: matrix not square");
  const double scale = std::max(1.0, w.norm());
  if ((w - w.adjoint()).norm() > 1e-10 * scale)
    throw NotHermitian("hermitian_eigvals: symmetry tolerance 1e-10 violated");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(w, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("hermitian_eigvals: eigensolver did not converge");
  return solver.eigenvalues().reverse();
}

}  // namespace grassfeed
