#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grassfeed/mc.hpp"
#include "grassfeed/randmat.hpp"

namespace grassfeed {

/// Element of the k-fold composite Grassmann manifold G_{n,m}^(k)(C):
/// k generator matrices, each n x m with orthonormal columns.
struct CompositePoint {
  int n = 1;
  int m = 1;
  int k = 1;
  std::vector<ComplexMatrix> blocks;
};

/// Indexed set of K composite points sharing (n, m, k); reproducible from seed.
struct Codebook {
  int n = 1;
  int m = 1;
  int k = 1;
  std::uint64_t seed = 0;
  std::vector<CompositePoint> points;

  int size() const { return static_cast<int>(points.size()); }
};

/// Main-order distortion-rate bounds for a K-point code on G_{n,m}^(k)(C).
/// The bounds are asymptotic in K and are reported as exact numbers; at
/// finite K the upper bound is the usual approximation to D*(K).
struct DrfBounds {
  double lower = 0.0;
  double upper = 0.0;
  int t = 0;          // m(n-m), dimension per factor
  double eta = 0.0;   // ball-volume constant of the single-factor manifold
};

struct QuantizeResult {
  int index = 0;
  double sq_distance = 0.0;
};

/// Uniform point: each block is the Q factor of an independent Gaussian
/// matrix, with column phases fixed so the R diagonal is real positive.
CompositePoint sample_uniform_composite(int n, int m, int k, Rng& stream);

/// Composite chordal distance sqrt(sum_f d_c^2(P_f, Q_f)) with the per-factor
/// squared distance m - ||P_f^dagger Q_f||_F^2.
double chordal_distance(const CompositePoint& p, const CompositePoint& q);

/// Squared composite chordal distance (what quantization minimizes).
double sq_chordal_distance(const CompositePoint& p, const CompositePoint& q);

Codebook generate_random_codebook(int n, int m, int k, int K, std::uint64_t seed);

/// Nearest codeword by squared chordal distance; ties go to the lowest index.
QuantizeResult quantize(const CompositePoint& q, const Codebook& cb);

/// Empirical distortion E_Q[min_P d_c^2(P, Q)] of one fixed codebook.
McStat estimate_distortion(const Codebook& cb, std::uint64_t trials,
                           std::uint64_t seed, int threads = 0);

/// Distortion-rate bounds; requires 1 <= m <= n-1 (throws DegenerateManifold
/// when m == n) and K >= 1.
DrfBounds drf_bounds(int n, int m, int k, int K);

/// Binary container: header (n, m, k, K, seed) + row-major complex entries
/// per block per point. Round-trips bit-exactly.
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

}  // namespace grassfeed
