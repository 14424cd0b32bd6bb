#pragma once

#include <Eigen/Dense>

#include "grassfeed/errors.hpp"
#include "grassfeed/rng.hpp"

namespace grassfeed {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Economy-size SVD factors: M = left * diag(singular_values) * right^dagger.
struct SvdResult {
  ComplexMatrix left_vectors;
  RealVector singular_values;  // non-increasing
  ComplexMatrix right_vectors;
};

/// rows x cols matrix of i.i.d. CN(0,1) entries, filled row by row from the
/// given stream (deterministic given the stream state).
ComplexMatrix sample_complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& stream);

/// Economy-size SVD. Throws ConvergenceFailure if the iteration fails, which
/// must not occur for Gaussian inputs.
SvdResult svd(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix, descending. Throws NotHermitian when
/// ||W - W^dagger||_F > 1e-10 * max(1, ||W||_F).
RealVector hermitian_eigvals(const ComplexMatrix& w);

}  // namespace grassfeed
