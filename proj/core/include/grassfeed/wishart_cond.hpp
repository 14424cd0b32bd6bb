#pragma once

#include <cstdint>
#include <vector>

#include "grassfeed/mc.hpp"

namespace grassfeed {

/// Complex Wishart W_m(n, I_m) = H^dagger H for an n x m Gaussian H, n >= m.
struct WishartShape {
  int m = 1;     // matrix dimension
  int n = 1;     // degrees of freedom, n >= m
  int beta = 2;  // field indicator; only the complex case (2) is supported
};

/// Monte Carlo estimate of zeta_i = E[lambda_i] / E[trace] = E[lambda_i]/(m n),
/// the trace fraction carried by the i-th largest eigenvalue (i is 1-based).
McStat zeta_mc(const WishartShape& shape, int i, std::uint64_t trials,
               std::uint64_t seed, int threads = 0);

/// All m trace fractions in one sampling pass, plus the trace-sum statistic:
/// components 0..m-1 are zeta_1..zeta_m, component m is trace/(m n) (whose
/// mean is 1 and whose standard error bounds the fraction-sum error).
McVecStat zeta_mc_all(const WishartShape& shape, std::uint64_t trials,
                      std::uint64_t seed, int threads = 0);

/// Asymptotic approximation of zeta_1: (1/pi)[pi - a + sin(2a)/2] where a
/// solves the transcendental equation with y = m/n. Exact 1 for m = 1.
double zeta1_asymptotic(const WishartShape& shape);

/// Raw per-trial records (lambda_1, trace), row-major trials x 2; used by the
/// trace-decile proportionality check of the conditioned-expectation claim.
std::vector<double> collect_top_eigen_and_trace(const WishartShape& shape,
                                                std::uint64_t trials,
                                                std::uint64_t seed,
                                                int threads = 0);

}  // namespace grassfeed
