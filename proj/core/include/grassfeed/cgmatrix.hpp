#pragma once

#include <cstdint>
#include <optional>

#include "grassfeed/mc.hpp"

namespace grassfeed {

/// E[log det(I_k + c P^dagger P)] query for a uniform composite Grassmann
/// matrix P with k unit-vector columns in C^n. Logs are natural throughout;
/// conversion to bits happens only at the reporting layer.
struct LogdetQuery {
  int n = 1;
  int k = 1;
  double c = 1.0;
};

/// The three-way evaluation of the logdet expectation.
struct LogdetBounds {
  double lower = 0.0;             // Wishart asymptotic
  std::optional<McStat> mc;       // Monte Carlo of the middle term
  double upper = 0.0;             // log of the closed-form expectation
};

/// Monte Carlo of E[log det(I + c P^dagger P)]. For k = 1 the integrand is
/// the constant log(1 + c), returned with zero variance.
McStat logdet_mc(const LogdetQuery& q, std::uint64_t trials, std::uint64_t seed,
                 int threads = 0);

/// Closed-form E[det(I + c P^dagger P)], available for 1 <= k <= 5 only
/// (UnsupportedOrder otherwise).
double expected_det_closed_form(const LogdetQuery& q);

/// log E[det(I + c P^dagger P)]; upper-bounds the logdet expectation.
double jensen_upper(const LogdetQuery& q);

/// Asymptotic Wishart formula for E[log det(I_k + (c/n) H^dagger H)], a lower
/// bound on the logdet expectation. Exact only in the (n, k) -> infinity
/// limit with fixed ratio; accurate for moderately large min(n, k).
double logdet_lower_asymptotic(const LogdetQuery& q);

/// Convenience: all three evaluations at once.
LogdetBounds evaluate_logdet_bounds(const LogdetQuery& q, std::uint64_t trials,
                                    std::uint64_t seed, int threads = 0);

}  // namespace grassfeed
