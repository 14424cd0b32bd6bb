#include "grassfeed/cgmatrix.hpp"

#include <cmath>

#include "grassfeed/errors.hpp"
#include "grassfeed/randmat.hpp"

namespace grassfeed {

namespace {

constexpr std::uint64_t kTagLogdet = 0x6c6f6764;

void validate(const LogdetQuery& q) {
  if (q.n < 1 || q.k < 1 || !(q.c > 0.0))
    throw InvalidParams("cgmatrix: need n >= 1, k >= 1, c > 0");
}

// Samples k independent uniform unit columns in C^n and fills the Gram matrix
// I + c * P^dagger P (diagonal set to exactly 1 + c).
struct GramSampler {
  int n, k;
  double c;
  ComplexMatrix p;
  ComplexMatrix gram;
  Eigen::LLT<ComplexMatrix> llt;

  explicit GramSampler(const LogdetQuery& q) : n(q.n), k(q.k), c(q.c), p(q.n, q.k), gram(q.k, q.k) {}

  double logdet_sample(Rng& rng) {
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < n; ++i) p(i, j) = rng.cnormal();
      p.col(j).normalize();
    }
    for (int a = 0; a < k; ++a) {
      gram(a, a) = 1.0 + c;
      for (int b = a + 1; b < k; ++b) {
        const std::complex<double> g = c * p.col(a).dot(p.col(b));
        gram(a, b) = g;
        gram(b, a) = std::conj(g);
      }
    }
    llt.compute(gram);
    double ld = 0.0;
    for (int a = 0; a < k; ++a) ld += std::log(llt.matrixLLT()(a, a).real());
    return 2.0 * ld;
  }
};

}  // namespace

McStat logdet_mc(const LogdetQuery& q, std::uint64_t trials, std::uint64_t seed,
                 int threads) {
  validate(q);
  if (trials < 1) throw InvalidParams("logdet_mc: trials >= 1 required");
  if (q.k == 1) {
    // Unit column: P^dagger P == 1, so every sample equals log(1 + c).
    return McStat{std::log1p(q.c), 0.0, trials};
  }
  auto body = [sampler = GramSampler(q)](std::uint64_t, Rng& rng) mutable {
    return sampler.logdet_sample(rng);
  };
  return mc_run(trials, seed, kTagLogdet, std::move(body), threads);
}

double expected_det_closed_form(const LogdetQuery& q) {
  validate(q);
  const double c = q.c;
  const double n = q.n;
  const double u = 1.0 + c;
  switch (q.k) {
    case 1:
      return u;
    case 2:
      return u * u - c * c / n;
    case 3:
      return u * u * u - c * c * u * 3.0 / n + c * c * c * 2.0 / (n * n);
    case 4:
      return u * u * u * u - c * c * u * u * 6.0 / n + c * c * c * u * 8.0 / (n * n) -
             c * c * c * c * (6.0 / (n * n * n) - 3.0 / (n * n));
    case 5: {
      const double c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c;
      return u * u * u * u * u - c2 * u * u * u * 10.0 / n +
             c3 * u * u * 20.0 / (n * n) -
             c4 * u * (30.0 / (n * n * n) - 15.0 / (n * n)) +
             c5 * (24.0 / (n * n * n * n) - 20.0 / (n * n * n));
    }
    default:
      throw UnsupportedOrder("expected_det_closed_form: closed forms exist for 1 <= k <= 5");
  }
}

double jensen_upper(const LogdetQuery& q) {
  return std::log(expected_det_closed_form(q));
}

double logdet_lower_asymptotic(const LogdetQuery& q) {
  validate(q);
  const double mn = std::min(q.n, q.k);
  const double mx = std::max(q.n, q.k);
  const double y = mn / mx;
  const double r = std::sqrt(y);
  const double alpha = q.n / (mn * q.c);
  const double s = 1.0 + y + alpha;
  // disc = (y + alpha - 1)^2 + 4 alpha > 0, so 1 - u r > 0 always holds.
  const double root = std::sqrt(s * s - 4.0 * y);
  const double w = 0.5 * (s + root);
  const double u = (s - root) / (2.0 * r);
  double per_dim = std::log(w) - std::log(alpha) - u / r;
  if (y < 1.0) per_dim -= (1.0 - y) / y * std::log1p(-u * r);
  return mn * per_dim;
}

LogdetBounds evaluate_logdet_bounds(const LogdetQuery& q, std::uint64_t trials,
                                    std::uint64_t seed, int threads) {
  LogdetBounds b;
  b.lower = logdet_lower_asymptotic(q);
  b.mc = logdet_mc(q, trials, seed, threads);
  b.upper = jensen_upper(q);  // UnsupportedOrder for k > 5
  return b;
}

}  // namespace grassfeed
