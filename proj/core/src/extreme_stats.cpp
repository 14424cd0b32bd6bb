#include "grassfeed/extreme_stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "grassfeed/errors.hpp"

namespace grassfeed {

namespace {

constexpr double kEulerMascheroni = 0.5772156649015329;
constexpr std::uint64_t kTagTopSum = 0x657874;

void validate(const ExtremeParams& p) {
  if (p.n < 1 || p.l < 1 || p.L < 1 || p.l > p.n)
    throw InvalidParams("extreme_stats: need 1 <= l <= n and L >= 1");
}

double harmonic(int l) {
  double h = 0.0;
  for (int k = 1; k <= l; ++k) h += 1.0 / k;
  return h;
}

// Erlang(L) variate as a sum of exponentials; the product is re-logged in
// blocks of 16 factors to stay clear of double underflow for any L.
double sample_erlang(Rng& rng, int L) {
  double x = 0.0;
  int remaining = L;
  while (remaining > 0) {
    const int block = std::min(remaining, 16);
    double prod = 1.0;
    for (int i = 0; i < block; ++i) prod *= rng.uniform_pos();
    x -= std::log(prod);
    remaining -= block;
  }
  return x;
}

}  // namespace

double chi2_sf(double x, int L) {
  if (x < 0.0 || L < 1) throw InvalidParams("chi2_sf: need x >= 0 and L >= 1");
  double sum = 1.0, term = 1.0;
  for (int i = 1; i < L; ++i) {
    term *= x / i;
    sum += term;
  }
  return std::exp(-x) * sum;
}

double solve_a_n(int n, int L) {
  if (n < 2) throw InvalidParams("solve_a_n: need n >= 2");
  const double target = 1.0 / n;
  double lo = 0.0, hi = 1.0;
  while (chi2_sf(hi, L) > target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (chi2_sf(mid, L) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double b_n(double a_n, int L) {
  if (a_n <= 0.0 || L < 1) throw InvalidParams("b_n: need a_n > 0 and L >= 1");
  double num = 0.0, den = 0.0, pw = 1.0;
  double fact = 1.0;
  for (int i = 0; i < L; ++i) {
    if (i > 0) {
      fact *= i;
      pw *= a_n;
    }
    num += (L - i) / fact * pw;
    den += 1.0 / fact * pw;
  }
  return num / den;
}

double expected_top_sum(const ExtremeParams& p) {
  validate(p);
  const double a = solve_a_n(p.n, p.L);
  const double b = b_n(a, p.L);
  return p.l * a + b * p.l * (kEulerMascheroni + 1.0 - harmonic(p.l));
}

McVecStat mc_top_sums(int n, std::span<const int> ls, int L,
                      std::uint64_t trials, std::uint64_t seed, int threads) {
  if (ls.empty()) throw InvalidParams("mc_top_sums: empty retention list");
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i] < 1 || ls[i] > n || (i > 0 && ls[i] <= ls[i - 1]))
      throw InvalidParams("mc_top_sums: ls must be ascending within [1, n]");
  }
  if (trials < 1) throw InvalidParams("mc_top_sums: trials >= 1 required");

  std::vector<int> retained(ls.begin(), ls.end());
  const int lmax = retained.back();
  auto body = [n, L, lmax, retained, buf = std::vector<double>()](
                  std::uint64_t, Rng& rng, double* out) mutable {
    buf.resize(n);
    for (int i = 0; i < n; ++i) buf[i] = sample_erlang(rng, L);
    if (lmax < n)
      std::nth_element(buf.begin(), buf.begin() + (n - lmax), buf.end());
    std::sort(buf.end() - lmax, buf.end(), std::greater<>());
    double acc = 0.0;
    std::size_t which = 0;
    for (int r = 1; r <= lmax; ++r) {
      acc += buf[n - lmax + (r - 1)];
      if (retained[which] == r) out[which++] = acc;
    }
  };
  return mc_run_vec(trials, seed, kTagTopSum, retained.size(), std::move(body), threads);
}

McStat mc_top_sum(const ExtremeParams& p, std::uint64_t trials,
                  std::uint64_t seed, int threads) {
  validate(p);
  const int ls[1] = {p.l};
  auto vec = mc_top_sums(p.n, ls, p.L, trials, seed, threads);
  return McStat{vec.mean[0], vec.std_error[0], trials};
}

}  // namespace grassfeed
