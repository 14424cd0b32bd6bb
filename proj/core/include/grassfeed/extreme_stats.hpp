#pragma once

#include <cstdint>
#include <span>

#include "grassfeed/mc.hpp"

namespace grassfeed {

/// Parameters of the top-l sum of n i.i.d. scaled chi-square variates
/// X = sum_{j=1..L} |h_j|^2 with h_j ~ CN(0,1).
struct ExtremeParams {
  int n = 1;  // number of variates
  int l = 1;  // number retained, 1 <= l <= n
  int L = 1;  // complex summands per variate
};

/// Survival function P(X > x) = e^{-x} sum_{i=0}^{L-1} x^i / i!.
double chi2_sf(double x, int L);

/// Root of chi2_sf(a, L) = 1/n, the location constant a_n. Requires n >= 2.
double solve_a_n(int n, int L);

/// Scale constant b_n = [sum (L-i)/i! a^i] / [sum 1/i! a^i]; lies in [1, L].
double b_n(double a_n, int L);

/// De-normalized asymptotic approximation of E[sum of the l largest X_i]:
/// l*a_n + b_n*l*(gamma_EM + 1 - H_l). Accurate when l << n; for l close to
/// n it is exposed as-is and should be treated as an approximation only.
double expected_top_sum(const ExtremeParams& params);

/// Brute-force Monte Carlo of E[sum of the l largest X_i].
McStat mc_top_sum(const ExtremeParams& params, std::uint64_t trials,
                  std::uint64_t seed, int threads = 0);

/// One sampling pass serving several retention counts: component i of the
/// result is the mean top-ls[i] sum. ls must be ascending, ls.back() <= n.
McVecStat mc_top_sums(int n, std::span<const int> ls, int L,
                      std::uint64_t trials, std::uint64_t seed, int threads = 0);

}  // namespace grassfeed
