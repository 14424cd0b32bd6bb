#include "grassfeed/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <sstream>

#include "grassfeed/cgmatrix.hpp"
#include "grassfeed/errors.hpp"
#include "grassfeed/experiments.hpp"
#include "grassfeed/extreme_stats.hpp"
#include "grassfeed/grassmann.hpp"
#include "grassfeed/randmat.hpp"
#include "grassfeed/sumrate.hpp"
#include "grassfeed/wishart_cond.hpp"

namespace grassfeed {

namespace {

constexpr double kFpGuard = 1e-9;  // absolute guard for exact-tie comparisons
constexpr std::uint64_t kSeedBase = 0xACCE5500;

struct Failure {
  std::ostringstream os;
  bool any = false;
};

template <typename... Args>
void fail(Failure& f, const char* format, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  if (f.any) f.os << "; ";
  f.os << buf;
  f.any = true;
}

std::string brief(const Failure& f, const std::string& ok_detail) {
  return f.any ? f.os.str() : ok_detail;
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- shared samplers -------------------------------------------------------

// Mean of det(I + c P^dagger P) over uniform unit-column P, for several c in
// one pass; the independent oracle for the closed forms.
McVecStat det_mc_oracle(int n, int k, const std::vector<double>& cs,
                        std::uint64_t trials, std::uint64_t seed, int threads) {
  auto body = [n, k, cs, p = ComplexMatrix(n, k), g = ComplexMatrix(k, k),
               solver = Eigen::SelfAdjointEigenSolver<ComplexMatrix>()](
                  std::uint64_t, Rng& rng, double* out) mutable {
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < n; ++i) p(i, j) = rng.cnormal();
      p.col(j).normalize();
    }
    for (int a = 0; a < k; ++a) {
      g(a, a) = 1.0;
      for (int b = a + 1; b < k; ++b) {
        const std::complex<double> v = p.col(a).dot(p.col(b));
        g(a, b) = v;
        g(b, a) = std::conj(v);
      }
    }
    solver.compute(g, Eigen::EigenvaluesOnly);
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      double det = 1.0;
      for (int a = 0; a < k; ++a) det *= 1.0 + cs[ci] * solver.eigenvalues()(a);
      out[ci] = det;
    }
  };
  return mc_run_vec(trials, seed, 0xdeadc0, cs.size(), std::move(body), threads);
}

// Mean of log det(I + (c/n) H^dagger H) over n x k Gaussian H for several c.
McVecStat wishart_logdet_oracle(int n, int k, const std::vector<double>& cs,
                                std::uint64_t trials, std::uint64_t seed,
                                int threads) {
  auto body = [n, k, cs, h = ComplexMatrix(n, k), w = ComplexMatrix(k, k),
               solver = Eigen::SelfAdjointEigenSolver<ComplexMatrix>()](
                  std::uint64_t, Rng& rng, double* out) mutable {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) h(i, j) = rng.cnormal();
    w.noalias() = h.adjoint() * h;
    solver.compute(w, Eigen::EigenvaluesOnly);
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      double ld = 0.0;
      for (int a = 0; a < k; ++a)
        ld += std::log1p(cs[ci] / n * solver.eigenvalues()(a));
      out[ci] = ld;
    }
  };
  return mc_run_vec(trials, seed, 0xdeadc1, cs.size(), std::move(body), threads);
}

// Ensemble distortion: mean over independent random codebooks of the
// per-codebook empirical distortion; std error from the across-codebook
// spread (which includes the within-codebook sampling noise).
McStat ensemble_distortion(int n, int m, int k, int K, int codebooks,
                           std::uint64_t trials_per_cb, std::uint64_t seed,
                           int threads) {
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < codebooks; ++i) {
    const Codebook cb = generate_random_codebook(
        n, m, k, K, seed + 0x9e3779b9ULL * static_cast<std::uint64_t>(i + 1));
    const double est = estimate_distortion(cb, trials_per_cb, seed + i, threads).estimate;
    sum += est;
    sumsq += est * est;
  }
  const double mean = sum / codebooks;
  double se = 0.0;
  if (codebooks > 1) {
    const double var = std::max(0.0, (sumsq - codebooks * mean * mean) / (codebooks - 1.0));
    se = std::sqrt(var / codebooks);
  }
  return McStat{mean, se, trials_per_cb * static_cast<std::uint64_t>(codebooks)};
}

double slope_of(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

// --- criteria ---------------------------------------------------------------

// Closed-form determinant within 1% of a 10^6-sample MC mean on the full grid.
CriterionResult criterion1(int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> cs = {0.5, 1.0, 10.0};
  Failure f;
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    for (int n : {2, 4, 8}) {
      const auto mc = det_mc_oracle(n, k, cs, 1000000, kSeedBase + 1, threads);
      for (std::size_t ci = 0; ci < cs.size(); ++ci) {
        const double cf = expected_det_closed_form({n, k, cs[ci]});
        const double rel = std::abs(cf - mc.mean[ci]) / mc.mean[ci];
        worst = std::max(worst, rel);
        if (rel > 0.01)
          fail(f, "k=%d n=%d c=%g: closed=%.6g mc=%.6g rel=%.3g", k, n, cs[ci], cf,
               mc.mean[ci], rel);
      }
    }
  }
  const double secs = elapsed_s(t0);
  if (secs > 300.0) fail(f, "runtime %.1fs exceeds 300s", secs);
  char ok[96];
  std::snprintf(ok, sizeof(ok), "worst rel err %.3g on 45 combos, %.1fs", worst, secs);
  return {1, "closed-form determinant vs MC (1%)", !f.any, brief(f, ok)};
}

// Sandwich lower <= mc + 3s and mc <= jensen + 3s on the same grid.
CriterionResult criterion2(int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  Failure f;
  double min_margin = 1e300;
  for (int k = 1; k <= 5; ++k) {
    for (int n : {2, 4, 8}) {
      for (double c : {0.5, 1.0, 10.0}) {
        const LogdetQuery q{n, k, c};
        const McStat mc = logdet_mc(q, 200000, kSeedBase + 2, threads);
        const double lo = logdet_lower_asymptotic(q);
        const double up = jensen_upper(q);
        const double s3 = 3.0 * mc.std_error;
        min_margin = std::min({min_margin, mc.estimate + s3 - lo, up + s3 - mc.estimate});
        if (lo > mc.estimate + s3 + kFpGuard)
          fail(f, "k=%d n=%d c=%g: lower %.6g > mc %.6g + 3s", k, n, c, lo, mc.estimate);
        if (mc.estimate > up + s3 + kFpGuard)
          fail(f, "k=%d n=%d c=%g: mc %.6g > jensen %.6g + 3s", k, n, c, mc.estimate, up);
      }
    }
  }
  const double secs = elapsed_s(t0);
  if (secs > 300.0) fail(f, "runtime %.1fs exceeds 300s", secs);
  char ok[96];
  std::snprintf(ok, sizeof(ok), "sandwich held on 45 combos (min margin %.3g), %.1fs",
                min_margin, secs);
  return {2, "logdet sandwich lower <= mc <= jensen", !f.any, brief(f, ok)};
}

// Asymptotic lower bound within 5% of the Wishart logdet MC at n=k=16.
CriterionResult criterion3(int threads) {
  const std::vector<double> cs = {4.0, 16.0};
  const auto mc = wishart_logdet_oracle(16, 16, cs, 100000, kSeedBase + 3, threads);
  Failure f;
  double worst = 0.0;
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const double asym = logdet_lower_asymptotic({16, 16, cs[ci]});
    const double rel = std::abs(asym - mc.mean[ci]) / std::abs(mc.mean[ci]);
    worst = std::max(worst, rel);
    if (rel > 0.05)
      fail(f, "c=%g: asym=%.5g mc=%.5g rel=%.3g", cs[ci], asym, mc.mean[ci], rel);
  }
  char ok[64];
  std::snprintf(ok, sizeof(ok), "worst rel dev %.3g at n=k=16", worst);
  return {3, "asymptotic logdet accuracy at n=k=16 (5%)", !f.any, brief(f, ok)};
}

// Random-codebook distortion on G(2,1) equals 1/(K+1) within 3 sigma; the
// distortion-rate upper bound 1/K stays above it.
CriterionResult criterion4(int threads) {
  Failure f;
  double worst_z = 0.0;
  for (int K : {1, 7, 63}) {
    const McStat d = ensemble_distortion(2, 1, 1, K, 800, 500, kSeedBase + 4 + K, threads);
    const double exact = 1.0 / (K + 1);
    const double z = d.std_error > 0 ? (d.estimate - exact) / d.std_error : 0.0;
    worst_z = std::max(worst_z, std::abs(z));
    if (std::abs(z) > 3.0)
      fail(f, "K=%d: est=%.6g vs exact=%.6g (z=%.2f)", K, d.estimate, exact, z);
    const double upper = drf_bounds(2, 1, 1, K).upper;
    if (d.estimate > upper)
      fail(f, "K=%d: measured %.6g exceeds upper bound %.6g", K, d.estimate, upper);
  }
  char ok[64];
  std::snprintf(ok, sizeof(ok), "worst |z| = %.2f over K in {1,7,63}", worst_z);
  return {4, "distortion anchor 1/(K+1) and 1/K bound", !f.any, brief(f, ok)};
}

// log2(distortion) vs log2(K) slope equals -1/(kt) within 15%.
CriterionResult criterion5(int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  Failure f;
  std::ostringstream summary;
  const int shapes[3][3] = {{2, 1, 2}, {4, 1, 2}, {4, 2, 1}};
  for (const auto& s : shapes) {
    const int n = s[0], m = s[1], k = s[2];
    const int kt = k * m * (n - m);
    std::vector<double> xs, ys;
    for (int b = 4; b <= 10; ++b) {
      const int K = 1 << b;
      const McStat d =
          ensemble_distortion(n, m, k, K, 25, 4000, kSeedBase + 5 + 131 * b + n + 7 * m, threads);
      xs.push_back(b);
      ys.push_back(std::log2(d.estimate));
    }
    const double slope = slope_of(xs, ys);
    const double target = -1.0 / kt;
    const double rel = std::abs(slope - target) / std::abs(target);
    if (rel > 0.15)
      fail(f, "(n,m,k)=(%d,%d,%d): slope=%.4f target=%.4f rel=%.3g", n, m, k, slope,
           target, rel);
    summary << " (" << n << ',' << m << ',' << k << "):" << std::round(slope * 1e4) / 1e4;
  }
  const double secs = elapsed_s(t0);
  if (secs > 600.0) fail(f, "runtime %.1fs exceeds 600s", secs);
  return {5, "distortion rate scaling slope -1/(kt) (15%)", !f.any,
          brief(f, "slopes" + summary.str())};
}

// Extreme order statistics: asymptotic within 3% of MC; exact harmonic anchor.
CriterionResult criterion6(int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  Failure f;
  const std::vector<int> ls = {1, 2, 4};
  double worst = 0.0;
  for (int L : {1, 2, 4, 8}) {
    for (int n : {50, 100, 500}) {
      const McVecStat mc = mc_top_sums(n, ls, L, 1000000, kSeedBase + 6 + L * 1000 + n, threads);
      for (std::size_t i = 0; i < ls.size(); ++i) {
        const double asym = expected_top_sum({n, ls[i], L});
        const double rel = std::abs(asym - mc.mean[i]) / mc.mean[i];
        worst = std::max(worst, rel);
        if (rel > 0.03)
          fail(f, "n=%d l=%d L=%d: asym=%.5g mc=%.5g rel=%.3g", n, ls[i], L, asym,
               mc.mean[i], rel);
      }
      if (L == 1) {
        double harmonic = 0.0;
        for (int j = 1; j <= n; ++j) harmonic += 1.0 / j;
        const double z = (mc.mean[0] - harmonic) / mc.std_error[0];
        if (std::abs(z) > 3.0)
          fail(f, "harmonic anchor n=%d: mc=%.6g H_n=%.6g z=%.2f", n, mc.mean[0],
               harmonic, z);
      }
    }
  }
  char ok[96];
  std::snprintf(ok, sizeof(ok), "worst rel dev %.3g over 36 combos, %.1fs", worst,
                elapsed_s(t0));
  return {6, "extreme order statistics vs MC (3%)", !f.any, brief(f, ok)};
}

// Wishart trace fractions: exact (2,2) anchor, asymptotic vs MC at (4,4),
// fractions sum to 1, and trace-decile proportionality is flat.
CriterionResult criterion7(int threads) {
  Failure f;
  const McVecStat z22 = zeta_mc_all({2, 2}, 1000000, kSeedBase + 7, threads);
  const double z1 = (z22.mean[0] - 0.875) / z22.std_error[0];
  if (std::abs(z1) > 3.0)
    fail(f, "zeta_mc(2,2,1)=%.5g vs 0.875 (z=%.2f)", z22.mean[0], z1);

  const McVecStat z44 = zeta_mc_all({4, 4}, 1000000, kSeedBase + 8, threads);
  const double asym44 = zeta1_asymptotic({4, 4});
  const double rel44 = std::abs(asym44 - z44.mean[0]) / z44.mean[0];
  if (rel44 > 0.05)
    fail(f, "zeta1_asymptotic(4,4)=%.5g vs mc=%.5g rel=%.3g", asym44, z44.mean[0], rel44);

  for (const auto* z : {&z22, &z44}) {
    const std::size_t m = z->mean.size() - 1;
    const double dev = std::abs(z->mean[m] - 1.0);
    if (dev > 3.0 * z->std_error[m] + kFpGuard)
      fail(f, "sum of %zu fractions deviates from 1 by %.3g (3s=%.3g)", m, dev,
           3.0 * z->std_error[m]);
  }

  // Prop-1 proportionality: ratio E[lambda_1 | trace decile] / E[trace decile]
  // constant across deciles.
  const std::uint64_t trials = 1000000;
  const auto rec = collect_top_eigen_and_trace({2, 2}, trials, kSeedBase + 9, threads);
  std::vector<std::uint32_t> order(trials);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return rec[2 * a + 1] < rec[2 * b + 1];
  });
  const double overall =
      std::accumulate(order.begin(), order.end(), 0.0,
                      [&](double acc, std::uint32_t i) { return acc + rec[2 * i]; }) /
      std::accumulate(order.begin(), order.end(), 0.0,
                      [&](double acc, std::uint32_t i) { return acc + rec[2 * i + 1]; });
  double worst_decile = 0.0;
  for (int d = 0; d < 10; ++d) {
    const std::size_t lo = trials * d / 10, hi = trials * (d + 1) / 10;
    double top = 0.0, tr = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      top += rec[2 * order[i]];
      tr += rec[2 * order[i] + 1];
    }
    const double dev = std::abs(top / tr - overall) / overall;
    worst_decile = std::max(worst_decile, dev);
    if (dev > 0.05) fail(f, "decile %d ratio deviates %.3g from overall", d, dev);
  }
  char ok[128];
  std::snprintf(ok, sizeof(ok),
                "zeta(2,2)=%.4f, asym(4,4) dev %.3g, worst decile dev %.3g",
                z22.mean[0], rel44, worst_decile);
  return {7, "conditioned Wishart eigenvalue fractions", !f.any, brief(f, ok)};
}

// Beam correlation structure: per-user top inner products agree, and the
// energy split identity gamma/l + (L_T-1) E|v_2 b|^2 = 1 holds.
CriterionResult criterion8(int threads) {
  SystemParams p;
  p.L_R = 2;
  p.L_T = 2;
  p.N = 8;
  p.l = 2;
  p.rho = 10.0;
  p.K = 16;
  p.trials = 100000;
  p.seed = kSeedBase + 10;
  const Codebook cb = generate_random_codebook(2, 1, 2, 16, kSeedBase + 11);
  const auto d = beamforming_diagnostics(p, cb, threads);

  Failure f;
  const double diff = std::abs(d.inner_sq_mean(0, 0) - d.inner_sq_mean(1, 0));
  const double s3 = 3.0 * std::sqrt(d.inner_sq_std_error(0, 0) * d.inner_sq_std_error(0, 0) +
                                    d.inner_sq_std_error(1, 0) * d.inner_sq_std_error(1, 0));
  if (diff > s3)
    fail(f, "per-user |v1.b|^2 means differ by %.4g > 3s=%.4g", diff, s3);

  double v2 = 0.0, v2_var = 0.0;
  for (int j = 0; j < p.l; ++j) {
    v2 += d.inner_sq_mean(j, 1) / p.l;
    v2_var += d.inner_sq_std_error(j, 1) * d.inner_sq_std_error(j, 1) / (p.l * p.l);
  }
  const double identity = d.gamma.estimate / p.l + (p.L_T - 1) * v2;
  const double id_s3 =
      3.0 * std::sqrt(d.gamma.std_error * d.gamma.std_error / (p.l * p.l) +
                      (p.L_T - 1.0) * (p.L_T - 1.0) * v2_var);
  if (std::abs(identity - 1.0) > id_s3 + kFpGuard)
    fail(f, "gamma/l + (L_T-1) E|v2 b|^2 = %.6g != 1 (3s=%.3g)", identity, id_s3);

  char ok[96];
  std::snprintf(ok, sizeof(ok), "user diff %.2g (3s %.2g), identity %.8f", diff, s3,
                identity);
  return {8, "beam energy split structure", !f.any, brief(f, ok)};
}

// Sum-rate bound dominance over the default figure grid, both simulators,
// with the bound expression inside its own theory sandwich for l <= 5.
CriterionResult criterion9(int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  Failure f;
  double min_margin = 1e300;
  int checked = 0;
  for (int l : {1, 2, 4}) {
    const Codebook cb = generate_random_codebook(2, 1, l, 16, kSeedBase + 12);
    for (double snr_db : {0.0, 5.0, 10.0, 15.0, 20.0}) {
      SystemParams p;
      p.L_R = 4;
      p.L_T = 2;
      p.N = 8;
      p.l = l;
      p.rho = std::pow(10.0, snr_db / 10.0);
      p.K = 16;
      p.trials = 100000;
      p.seed = kSeedBase + 13;
      for (int mode = 0; mode < 2; ++mode) {
        const SumRateResult r = mode == 0 ? simulate_antenna_selection(p, threads)
                                          : simulate_beamforming(p, cb, threads);
        const char* tag = mode == 0 ? "antenna" : "beam";
        const double s3 =
            3.0 * std::sqrt(r.mc_rate.std_error * r.mc_rate.std_error +
                            r.ub_mc.std_error * r.ub_mc.std_error);
        min_margin = std::min(min_margin, r.ub_mc.estimate + s3 - r.mc_rate.estimate);
        if (r.mc_rate.estimate > r.ub_mc.estimate + s3)
          fail(f, "%s l=%d snr=%g: rate %.4f > bound %.4f + 3s", tag, l, snr_db,
               r.mc_rate.estimate, r.ub_mc.estimate);
        const double ub3 = 3.0 * r.ub_mc.std_error;
        if (r.ub_lower_theory > r.ub_mc.estimate + ub3 + kFpGuard)
          fail(f, "%s l=%d snr=%g: theory lower %.4f > ub_mc %.4f + 3s", tag, l,
               snr_db, r.ub_lower_theory, r.ub_mc.estimate);
        if (r.ub_upper_theory && r.ub_mc.estimate > *r.ub_upper_theory + ub3 + kFpGuard)
          fail(f, "%s l=%d snr=%g: ub_mc %.4f > theory upper %.4f + 3s", tag, l,
               snr_db, r.ub_mc.estimate, *r.ub_upper_theory);
        ++checked;
      }
    }
  }
  char ok[96];
  std::snprintf(ok, sizeof(ok), "%d configs, min dominance margin %+.4f, %.1fs", checked,
                min_margin, elapsed_s(t0));
  return {9, "sum-rate bound dominance on the default grid", !f.any, brief(f, ok)};
}

// Beamforming loss scaling: slope of log2(l - gamma) vs R_fb equals
// -1/(l(L_T-1)) within 20%; rate at R_fb=10 within 2% of perfect.
CriterionResult criterion10(int threads) {
  Failure f;
  std::vector<double> xs, ys;
  double gap_rel = 0.0, gap_slack = 0.0;
  for (int rfb = 2; rfb <= 10; ++rfb) {
    SystemParams p;
    p.L_R = 4;
    p.L_T = 2;
    p.N = 8;
    p.l = 2;
    p.rho = 10.0;
    p.K = 1 << rfb;
    p.trials = 100000;
    p.seed = kSeedBase + 14;
    const Codebook cb = generate_random_codebook(2, 1, 2, p.K, kSeedBase + 15);
    const auto d = beamforming_diagnostics(p, cb, threads);
    xs.push_back(rfb);
    ys.push_back(std::log2(p.l - d.gamma.estimate));
    if (rfb == 10) {
      gap_rel = (d.perfect_rate.estimate - d.rate.estimate) / d.perfect_rate.estimate;
      gap_slack = 3.0 *
                  std::sqrt(d.perfect_rate.std_error * d.perfect_rate.std_error +
                            d.rate.std_error * d.rate.std_error) /
                  d.perfect_rate.estimate;
      if (gap_rel > 0.02 + gap_slack)
        fail(f, "R_fb=10 rate gap %.3g%% exceeds 2%%", 100.0 * gap_rel);
    }
  }
  const double slope = slope_of(xs, ys);
  const double target = -0.5;  // -1/(l(L_T-1)) at l=2, L_T=2
  const double rel = std::abs(slope - target) / std::abs(target);
  if (rel > 0.20) fail(f, "loss slope %.4f vs %.4f (rel %.3g)", slope, target, rel);
  char ok[96];
  std::snprintf(ok, sizeof(ok), "slope %.4f (target %.1f), perfect gap %.3g%%", slope,
                target, 100.0 * gap_rel);
  return {10, "feedback scaling of beamforming loss", !f.any, brief(f, ok)};
}

// Antenna selection vs beamforming at matched feedback R_fb = l log2 L_T.
CriterionResult criterion11(int threads) {
  Failure f;
  std::ostringstream summary;
  for (int l : {1, 2, 4}) {
    SystemParams p;
    p.L_R = 4;
    p.L_T = 2;
    p.N = 8;
    p.l = l;
    p.rho = 10.0;
    p.K = 1 << l;  // L_T^l
    p.trials = 100000;
    p.seed = kSeedBase + 16;
    const SumRateResult ant = simulate_antenna_selection(p, threads);
    const Codebook cb = generate_random_codebook(2, 1, l, p.K, kSeedBase + 17);
    const SumRateResult bf = simulate_beamforming(p, cb, threads);
    const double s3 = 3.0 * std::sqrt(ant.mc_rate.std_error * ant.mc_rate.std_error +
                                      bf.mc_rate.std_error * bf.mc_rate.std_error);
    if (ant.mc_rate.estimate < bf.mc_rate.estimate - s3)
      fail(f, "l=%d: antenna %.4f < beamforming %.4f - 3s", l, ant.mc_rate.estimate,
           bf.mc_rate.estimate);
    const double rel = std::abs(ant.mc_rate.estimate - bf.mc_rate.estimate) /
                       bf.mc_rate.estimate;
    if (rel > 0.10 + s3 / bf.mc_rate.estimate)
      fail(f, "l=%d: antenna deviates %.3g%% from beamforming", l, 100.0 * rel);
    summary << " l=" << l << ":" << std::round(1e4 * rel) / 1e2 << "%";
  }
  return {11, "antenna selection vs matched-feedback beamforming", !f.any,
          brief(f, "antenna above by" + summary.str())};
}

// Monotonicity: rate increases in N, K and rho (3 sigma slack).
CriterionResult criterion12(int threads) {
  Failure f;
  auto beam = [&](int N, int K, double rho) {
    SystemParams p;
    p.L_R = 4;
    p.L_T = 2;
    p.N = N;
    p.l = 2;
    p.rho = rho;
    p.K = K;
    p.trials = 60000;
    p.seed = kSeedBase + 18;
    const Codebook cb = generate_random_codebook(2, 1, 2, K, kSeedBase + 19);
    return simulate_beamforming(p, cb, threads).mc_rate;
  };
  auto antenna = [&](int N, double rho) {
    SystemParams p;
    p.L_R = 4;
    p.L_T = 2;
    p.N = N;
    p.l = 2;
    p.rho = rho;
    p.trials = 60000;
    p.seed = kSeedBase + 20;
    return simulate_antenna_selection(p, threads).mc_rate;
  };
  auto check = [&](const char* what, const McStat& low, const McStat& high) {
    const double s3 = 3.0 * std::sqrt(low.std_error * low.std_error +
                                      high.std_error * high.std_error);
    if (high.estimate < low.estimate - s3)
      fail(f, "%s: %.4f then %.4f (not increasing)", what, low.estimate, high.estimate);
  };
  check("beam N 4->8", beam(4, 16, 10.0), beam(8, 16, 10.0));
  check("beam K 4->64", beam(8, 4, 10.0), beam(8, 64, 10.0));
  check("beam rho 10->100", beam(8, 16, 10.0), beam(8, 16, 100.0));
  check("antenna N 4->8", antenna(4, 10.0), antenna(8, 10.0));
  check("antenna rho 10->100", antenna(8, 10.0), antenna(8, 100.0));
  return {12, "rate monotone in N, K, rho", !f.any, brief(f, "5 comparisons increasing")};
}

// Byte-identical CSV across reruns and across worker counts.
CriterionResult criterion13(int) {
  Failure f;
  for (const char* name : {"antenna", "beamforming", "extreme"}) {
    ExperimentConfig cfg = default_config(name);
    cfg.trials = 2000;
    cfg.seed = kSeedBase + 21;
    cfg.snr_grid_db = {0.0, 10.0};
    cfg.l_list = {1, 2};
    cfg.extreme.n_list = {50};
    cfg.extreme.L_list = {1, 2};
    cfg.threads = 1;
    const std::string a = run_experiment_to_csv(cfg);
    const std::string b = run_experiment_to_csv(cfg);
    cfg.threads = 4;
    const std::string c = run_experiment_to_csv(cfg);
    if (a != b) fail(f, "%s: rerun differs at equal thread count", name);
    if (a != c) fail(f, "%s: output depends on worker count", name);
  }
  return {13, "deterministic CSV across worker counts", !f.any,
          brief(f, "antenna/beamforming/extreme byte-identical (1 vs 4 workers)")};
}

}  // namespace

std::vector<int> acceptance_criterion_ids() {
  std::vector<int> ids(13);
  std::iota(ids.begin(), ids.end(), 1);
  return ids;
}

CriterionResult run_acceptance_criterion(int id, int threads) {
  switch (id) {
    case 1: return criterion1(threads);
    case 2: return criterion2(threads);
    case 3: return criterion3(threads);
    case 4: return criterion4(threads);
    case 5: return criterion5(threads);
    case 6: return criterion6(threads);
    case 7: return criterion7(threads);
    case 8: return criterion8(threads);
    case 9: return criterion9(threads);
    case 10: return criterion10(threads);
    case 11: return criterion11(threads);
    case 12: return criterion12(threads);
    case 13: return criterion13(threads);
    default: throw InvalidParams("run_acceptance_criterion: id must be 1..13");
  }
}

std::vector<CriterionResult> run_all_acceptance(int threads, std::ostream* progress) {
  std::vector<CriterionResult> results;
  for (int id : acceptance_criterion_ids()) {
    results.push_back(run_acceptance_criterion(id, threads));
    if (progress) {
      const auto& r = results.back();
      (*progress) << "criterion " << r.id << (r.passed ? ": PASS - " : ": FAIL - ")
                  << r.name << " (" << r.detail << ")\n";
      progress->flush();
    }
  }
  return results;
}

}  // namespace grassfeed
