#include "grassfeed/wishart_cond.hpp"

#include <cmath>

#include "grassfeed/errors.hpp"
#include "grassfeed/randmat.hpp"

namespace grassfeed {

namespace {

constexpr std::uint64_t kTagZeta = 0x7a657461;
constexpr double kPi = 3.141592653589793238462643383279502884;

void validate(const WishartShape& s) {
  if (s.m < 1 || s.n < s.m) throw InvalidParams("wishart: need n >= m >= 1");
  if (s.beta != 2) throw InvalidParams("wishart: only the complex case (beta = 2) is supported");
}

// Eigenvalues of H^dagger H descending, written into ev (size m).
struct WishartSampler {
  int m, n;
  ComplexMatrix h;
  ComplexMatrix w;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver;

  explicit WishartSampler(const WishartShape& s)
      : m(s.m), n(s.n), h(s.n, s.m), w(s.m, s.m) {}

  void eigs_desc(Rng& rng, double* ev) {
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) = rng.cnormal();
    w.noalias() = h.adjoint() * h;
    solver.compute(w, Eigen::EigenvaluesOnly);
    const auto& asc = solver.eigenvalues();
    for (int i = 0; i < m; ++i) ev[i] = asc(m - 1 - i);
  }
};

}  // namespace

McVecStat zeta_mc_all(const WishartShape& shape, std::uint64_t trials,
                      std::uint64_t seed, int threads) {
  validate(shape);
  const int m = shape.m;
  const double norm = static_cast<double>(shape.m) * shape.n;
  auto body = [sampler = WishartSampler(shape), m, norm](
                  std::uint64_t, Rng& rng, double* out) mutable {
    sampler.eigs_desc(rng, out);
    double trace = 0.0;
    for (int i = 0; i < m; ++i) {
      out[i] /= norm;
      trace += out[i];
    }
    out[m] = trace;
  };
  return mc_run_vec(trials, seed, kTagZeta, static_cast<std::size_t>(m) + 1,
                    std::move(body), threads);
}

McStat zeta_mc(const WishartShape& shape, int i, std::uint64_t trials,
               std::uint64_t seed, int threads) {
  validate(shape);
  if (i < 1 || i > shape.m) throw InvalidParams("zeta_mc: index i must be in 1..m");
  auto all = zeta_mc_all(shape, trials, seed, threads);
  return McStat{all.mean[i - 1], all.std_error[i - 1], trials};
}

double zeta1_asymptotic(const WishartShape& shape) {
  validate(shape);
  if (shape.m == 1) return 1.0;
  const double m = shape.m;
  const double y = m / static_cast<double>(shape.n);
  const double sqrt_y = std::sqrt(y);

  // Right-hand side decreases from 1 at a = 0 to 0 at a = pi.
  auto rhs = [&](double a) {
    if (y == 1.0) return (kPi - a - std::sin(a)) / kPi;
    const double theta = std::atan2(sqrt_y * std::sin(a), 1.0 - sqrt_y * std::cos(a));
    return (kPi - a - std::sin(a) / sqrt_y + (1.0 - y) / y * theta) / kPi;
  };

  const double target = 1.0 / m;
  double lo = 0.0, hi = kPi;
  if (rhs(lo) < target || rhs(hi) > target)
    throw NoRoot("zeta1_asymptotic: bracket does not contain the root");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (rhs(mid) > target ? lo : hi) = mid;
  }
  const double a = 0.5 * (lo + hi);
  return (kPi - a + 0.5 * std::sin(2.0 * a)) / kPi;
}

std::vector<double> collect_top_eigen_and_trace(const WishartShape& shape,
                                                std::uint64_t trials,
                                                std::uint64_t seed, int threads) {
  validate(shape);
  auto body = [sampler = WishartSampler(shape), m = shape.m,
               ev = std::vector<double>()](std::uint64_t, Rng& rng,
                                           double* out) mutable {
    ev.resize(m);
    sampler.eigs_desc(rng, ev.data());
    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += ev[i];
    out[0] = ev[0];
    out[1] = trace;
  };
  return mc_collect(trials, seed, kTagZeta, 2, std::move(body), threads);
}

}  // namespace grassfeed
