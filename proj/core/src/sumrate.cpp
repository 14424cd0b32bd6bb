#include "grassfeed/sumrate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <vector>

#include "grassfeed/errors.hpp"
#include "grassfeed/extreme_stats.hpp"
#include "grassfeed/wishart_cond.hpp"

namespace grassfeed {

namespace {

constexpr std::uint64_t kTagAntennaSim = 0x616e7431;
constexpr std::uint64_t kTagBeamSim = 0x626d6631;
constexpr std::uint64_t kTagBeamDiag = 0x626d6632;
constexpr std::uint64_t kZeta1CacheSeed = 0x5a455441'31ULL;

void validate_common(const SystemParams& p) {
  if (p.L_R < 1 || p.L_T < 1 || p.N < 1 || p.l < 1 || p.trials < 1)
    throw InvalidParams("sumrate: counts must be >= 1");
  if (!(p.rho > 0.0)) throw InvalidParams("sumrate: rho must be positive");
}

// Selects the l indices of largest value, ties broken by lowest index.
void select_top(const std::vector<double>& values, int l, std::vector<int>& idx) {
  idx.resize(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + l, idx.end(), [&](int a, int b) {
    return values[a] > values[b] || (values[a] == values[b] && a < b);
  });
  idx.resize(l);
}

// log det of I + (rho/l) * Hs Hs^dagger via Cholesky.
struct RateKernel {
  ComplexMatrix m;
  Eigen::LLT<ComplexMatrix> llt;

  explicit RateKernel(int L_R) : m(L_R, L_R) {}

  double operator()(const ComplexMatrix& hs, double rho_over_l) {
    m.setIdentity();
    m.noalias() += rho_over_l * hs * hs.adjoint();
    llt.compute(m);
    double ld = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      ld += std::log(llt.matrixLLT()(i, i).real());
    return 2.0 * ld;
  }
};

struct AntennaTrial {
  int L_R, cols, l;
  double rho_over_l;
  ComplexMatrix chan;
  ComplexMatrix selected;
  std::vector<double> norms;
  std::vector<int> idx;
  RateKernel rate;

  explicit AntennaTrial(const SystemParams& p)
      : L_R(p.L_R),
        cols(p.N * p.L_T),
        l(p.l),
        rho_over_l(p.rho / p.l),
        chan(p.L_R, p.N * p.L_T),
        selected(p.L_R, p.l),
        norms(cols),
        rate(p.L_R) {}

  double operator()(std::uint64_t, Rng& rng) {
    for (int i = 0; i < L_R; ++i)
      for (int j = 0; j < cols; ++j) chan(i, j) = rng.cnormal();
    for (int j = 0; j < cols; ++j) norms[j] = chan.col(j).squaredNorm();
    select_top(norms, l, idx);
    for (int j = 0; j < l; ++j) selected.col(j) = chan.col(idx[j]);
    return rate(selected, rho_over_l);
  }
};

// Shared per-worker machinery of a beamforming trial: user selection, top
// right singular vectors (phase-fixed), codebook scoring, equivalent channels.
struct BeamTrial {
  int L_R, L_T, N, l, K;
  double rho_over_l;
  bool full_v;
  const std::vector<ComplexMatrix>* bmat;  // l matrices, each L_T x K
  ComplexMatrix chan;                      // L_R x N*L_T
  ComplexMatrix hj;                        // L_R x L_T
  ComplexMatrix vtop;                      // L_T x l
  std::vector<ComplexMatrix> vfull;        // full V per selected user
  Eigen::RowVectorXcd row;                 // 1 x K
  Eigen::VectorXd scores;                  // K
  ComplexMatrix hhat, hperf;               // L_R x l
  std::vector<double> norms;
  std::vector<int> idx;
  Eigen::JacobiSVD<ComplexMatrix> svd;
  RateKernel rate_kernel;
  int best = 0;
  double rate = 0.0, perfect = 0.0, gamma = 0.0;

  BeamTrial(const SystemParams& p, const std::vector<ComplexMatrix>& flattened,
            bool want_full_v)
      : L_R(p.L_R),
        L_T(p.L_T),
        N(p.N),
        l(p.l),
        K(static_cast<int>(flattened.empty() ? 0 : flattened[0].cols())),
        rho_over_l(p.rho / p.l),
        full_v(want_full_v),
        bmat(&flattened),
        chan(p.L_R, p.N * p.L_T),
        hj(p.L_R, p.L_T),
        vtop(p.L_T, p.l),
        vfull(want_full_v ? p.l : 0),
        row(1, K),
        scores(K),
        hhat(p.L_R, p.l),
        hperf(p.L_R, p.l),
        norms(p.N),
        rate_kernel(p.L_R) {}

  void run(Rng& rng) {
    const int cols = N * L_T;
    for (int i = 0; i < L_R; ++i)
      for (int j = 0; j < cols; ++j) chan(i, j) = rng.cnormal();
    for (int u = 0; u < N; ++u)
      norms[u] = chan.middleCols(u * L_T, L_T).squaredNorm();
    select_top(norms, l, idx);

    for (int j = 0; j < l; ++j) {
      hj = chan.middleCols(idx[j] * L_T, L_T);
      svd.compute(hj, full_v ? Eigen::ComputeFullV : Eigen::ComputeThinV);
      ComplexVector v = svd.matrixV().col(0);
      // Phase convention: first nonzero coordinate real positive.
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-12) {
          v *= std::conj(v(i)) / mag;
          break;
        }
      }
      vtop.col(j) = v;
      if (full_v) {
        vfull[j] = svd.matrixV();
        vfull[j].col(0) = v;
      }
      hperf.col(j).noalias() = hj * v;
    }

    scores.setZero();
    for (int j = 0; j < l; ++j) {
      row.noalias() = vtop.col(j).adjoint() * (*bmat)[j];
      scores.array() += row.array().abs2();
    }
    best = 0;
    for (int k = 1; k < K; ++k)
      if (scores(k) > scores(best)) best = k;
    gamma = scores(best);

    for (int j = 0; j < l; ++j)
      hhat.col(j).noalias() =
          chan.middleCols(idx[j] * L_T, L_T) * (*bmat)[j].col(best);

    rate = rate_kernel(hhat, rho_over_l);
    perfect = rate_kernel(hperf, rho_over_l);
  }
};

std::vector<ComplexMatrix> flatten_codebook(const Codebook& cb) {
  std::vector<ComplexMatrix> bmat(cb.k, ComplexMatrix(cb.n, cb.size()));
  for (int j = 0; j < cb.k; ++j)
    for (int k = 0; k < cb.size(); ++k) bmat[j].col(k) = cb.points[k].blocks[j].col(0);
  return bmat;
}

void validate_beam(const SystemParams& p, const Codebook& cb) {
  validate_common(p);
  if (p.l > p.N) throw InvalidParams("simulate_beamforming: need l <= N");
  if (cb.n != p.L_T || cb.m != 1 || cb.k != p.l)
    throw ShapeMismatch("simulate_beamforming: codebook must have shape (L_T, 1, l)");
  if (cb.points.empty()) throw InvalidParams("simulate_beamforming: empty codebook");
}

double beam_e_norm_sum(const SystemParams& p, int K, double* gamma_out) {
  if (p.L_T == 1) {
    // One antenna per user: beams are scalar phases, energy capture is exact.
    if (gamma_out) *gamma_out = p.l;
    return expected_norm_sum(p, 0.0, NormSumMode::antenna);
  }
  const double gs = gamma_sup(p.L_T, p.l, K);
  if (gamma_out) *gamma_out = gs;
  return expected_norm_sum(p, gs, NormSumMode::beamforming);
}

}  // namespace

double gamma_sup(int L_T, int l, int K) {
  if (L_T < 2) throw InvalidParams("gamma_sup: L_T >= 2 required");
  if (l < 1 || K < 1) throw InvalidParams("gamma_sup: need l >= 1 and K >= 1");
  return std::max(0.0, l - drf_bounds(L_T, 1, l, K).upper);
}

double zeta1_for_shape(int a, int b) {
  if (a < 1 || b < 1) throw InvalidParams("zeta1_for_shape: dimensions must be >= 1");
  const int m = std::min(a, b);
  const int n = std::max(a, b);
  if (m == 1) return 1.0;
  if (m >= 4) return zeta1_asymptotic(WishartShape{m, n});

  static std::mutex mutex;
  static std::map<std::pair<int, int>, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(m, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double value = zeta_mc(WishartShape{m, n}, 1, 1000000, kZeta1CacheSeed).estimate;
  cache.emplace(key, value);
  return value;
}

double expected_norm_sum(const SystemParams& p, double gamma, NormSumMode mode) {
  validate_common(p);
  if (mode == NormSumMode::antenna)
    return expected_top_sum(ExtremeParams{p.N * p.L_T, p.l, p.L_R});

  if (p.L_T == 1)
    throw DegenerateBeamforming("expected_norm_sum: L_T == 1 has no beam split; use antenna mode");
  if (gamma < 0.0 || gamma > p.l)
    throw InvalidParams("expected_norm_sum: gamma must lie in [0, l]");
  const double z1 = zeta1_for_shape(p.L_T, p.L_R);
  const double top = expected_top_sum(ExtremeParams{p.N, p.l, p.L_R * p.L_T});
  const double coef =
      z1 * gamma / p.l + (1.0 - z1) * (p.l - gamma) / (p.l * (p.L_T - 1.0));
  return coef * top;
}

UpperBoundEval sum_rate_upper_bound(const SystemParams& p, double e_norm_sum,
                                    int threads) {
  validate_common(p);
  if (!(e_norm_sum > 0.0))
    throw InvalidParams("sum_rate_upper_bound: e_norm_sum must be positive");
  const LogdetQuery q{p.L_R, p.l,
                      p.rho * e_norm_sum / (static_cast<double>(p.l) * p.l)};
  UpperBoundEval eval;
  eval.mc = logdet_mc(q, p.trials, p.seed, threads);
  eval.lower = logdet_lower_asymptotic(q);
  if (p.l <= 5) eval.upper = jensen_upper(q);
  return eval;
}

SumRateResult simulate_antenna_selection(const SystemParams& p, int threads) {
  validate_common(p);
  if (p.l > p.N * p.L_T)
    throw InvalidParams("simulate_antenna_selection: need l <= N*L_T");

  const double e_norm = expected_norm_sum(p, 0.0, NormSumMode::antenna);
  auto mc = mc_run(p.trials, p.seed, kTagAntennaSim, AntennaTrial(p), threads);
  auto ub = sum_rate_upper_bound(p, e_norm, threads);

  SumRateResult r;
  r.mc_rate = mc;
  r.ub_mc = ub.mc;
  r.ub_lower_theory = ub.lower;
  r.ub_upper_theory = ub.upper;
  r.e_norm_sum = e_norm;
  return r;
}

SumRateResult simulate_beamforming(const SystemParams& p, const Codebook& cb,
                                   int threads) {
  validate_beam(p, cb);
  double gamma_used = 0.0;
  const double e_norm = beam_e_norm_sum(p, cb.size(), &gamma_used);

  const auto bmat = flatten_codebook(cb);
  auto body = [trial = BeamTrial(p, bmat, false)](std::uint64_t, Rng& rng,
                                                  double* out) mutable {
    trial.run(rng);
    out[0] = trial.rate;
    out[1] = trial.perfect;
  };
  auto stats = mc_run_vec(p.trials, p.seed, kTagBeamSim, 2, std::move(body), threads);
  auto ub = sum_rate_upper_bound(p, e_norm, threads);

  SumRateResult r;
  r.mc_rate = McStat{stats.mean[0], stats.std_error[0], p.trials};
  r.perfect_rate = McStat{stats.mean[1], stats.std_error[1], p.trials};
  r.ub_mc = ub.mc;
  r.ub_lower_theory = ub.lower;
  r.ub_upper_theory = ub.upper;
  r.e_norm_sum = e_norm;
  r.gamma_sup = gamma_used;
  return r;
}

BeamformingDiagnostics beamforming_diagnostics(const SystemParams& p,
                                               const Codebook& cb, int threads) {
  validate_beam(p, cb);
  const int l = p.l, L_T = p.L_T, L_R = p.L_R;
  // Layout: rate, perfect, gamma, normsum | inner_sq (l*L_T) | nsq (l) |
  // nsq^2 (l) | per (j, coord): x, x^2, nsq*x (3*l*2L_R) | xi outer re+im (2*L_R^2).
  const std::size_t off_inner = 4;
  const std::size_t off_nsq = off_inner + static_cast<std::size_t>(l) * L_T;
  const std::size_t off_nsq2 = off_nsq + l;
  const std::size_t off_coord = off_nsq2 + l;
  const std::size_t coords = 2 * static_cast<std::size_t>(L_R);
  const std::size_t off_outer = off_coord + 3 * static_cast<std::size_t>(l) * coords;
  const std::size_t dim = off_outer + 2 * static_cast<std::size_t>(L_R) * L_R;

  const auto bmat = flatten_codebook(cb);
  auto body = [trial = BeamTrial(p, bmat, true), l, L_T, L_R, off_inner, off_nsq,
               off_nsq2, off_coord, off_outer, coords,
               xi = ComplexVector()](std::uint64_t, Rng& rng, double* out) mutable {
    trial.run(rng);
    out[0] = trial.rate;
    out[1] = trial.perfect;
    out[2] = trial.gamma;

    double norm_sum = 0.0;
    for (std::size_t d = off_outer; d < off_outer + 2 * static_cast<std::size_t>(L_R) * L_R; ++d)
      out[d] = 0.0;
    for (int j = 0; j < l; ++j) {
      const auto bj = (*trial.bmat)[j].col(trial.best);
      for (int k = 0; k < L_T; ++k)
        out[off_inner + static_cast<std::size_t>(j) * L_T + k] =
            std::norm(trial.vfull[j].col(k).dot(bj));
      const double nsq = trial.hhat.col(j).squaredNorm();
      norm_sum += nsq;
      out[off_nsq + j] = nsq;
      out[off_nsq2 + j] = nsq * nsq;
      xi = trial.hhat.col(j) / std::sqrt(nsq);
      for (int a = 0; a < L_R; ++a) {
        const double re = xi(a).real(), im = xi(a).imag();
        const std::size_t base_re = off_coord + (static_cast<std::size_t>(j) * coords + a) * 3;
        const std::size_t base_im = off_coord + (static_cast<std::size_t>(j) * coords + L_R + a) * 3;
        out[base_re] = re;
        out[base_re + 1] = re * re;
        out[base_re + 2] = nsq * re;
        out[base_im] = im;
        out[base_im + 1] = im * im;
        out[base_im + 2] = nsq * im;
      }
      for (int a = 0; a < L_R; ++a) {
        for (int b = 0; b < L_R; ++b) {
          const std::complex<double> o = xi(a) * std::conj(xi(b)) / static_cast<double>(l);
          out[off_outer + 2 * (static_cast<std::size_t>(a) * L_R + b)] += o.real();
          out[off_outer + 2 * (static_cast<std::size_t>(a) * L_R + b) + 1] += o.imag();
        }
      }
    }
    out[3] = norm_sum;
  };

  auto stats = mc_run_vec(p.trials, p.seed, kTagBeamDiag, dim, std::move(body), threads);

  BeamformingDiagnostics d;
  d.trials = p.trials;
  d.rate = McStat{stats.mean[0], stats.std_error[0], p.trials};
  d.perfect_rate = McStat{stats.mean[1], stats.std_error[1], p.trials};
  d.gamma = McStat{stats.mean[2], stats.std_error[2], p.trials};
  d.norm_sum = McStat{stats.mean[3], stats.std_error[3], p.trials};
  d.inner_sq_mean.resize(l, L_T);
  d.inner_sq_std_error.resize(l, L_T);
  for (int j = 0; j < l; ++j) {
    for (int k = 0; k < L_T; ++k) {
      d.inner_sq_mean(j, k) = stats.mean[off_inner + static_cast<std::size_t>(j) * L_T + k];
      d.inner_sq_std_error(j, k) =
          stats.std_error[off_inner + static_cast<std::size_t>(j) * L_T + k];
    }
  }
  d.normsq_mean.resize(l);
  d.normsq_std_error.resize(l);
  d.normsq_dir_corr.resize(l, static_cast<Eigen::Index>(coords));
  for (int j = 0; j < l; ++j) {
    d.normsq_mean(j) = stats.mean[off_nsq + j];
    d.normsq_std_error(j) = stats.std_error[off_nsq + j];
    const double var_n = stats.mean[off_nsq2 + j] - d.normsq_mean(j) * d.normsq_mean(j);
    for (std::size_t a = 0; a < coords; ++a) {
      const std::size_t base = off_coord + (static_cast<std::size_t>(j) * coords + a) * 3;
      const double ex = stats.mean[base];
      const double ex2 = stats.mean[base + 1];
      const double exn = stats.mean[base + 2];
      const double var_x = ex2 - ex * ex;
      const double cov = exn - d.normsq_mean(j) * ex;
      d.normsq_dir_corr(j, static_cast<Eigen::Index>(a)) =
          cov / std::sqrt(std::max(var_n * var_x, 1e-300));
    }
  }
  d.xi_outer_mean.resize(L_R, L_R);
  d.xi_outer_re_std_error.resize(L_R, L_R);
  d.xi_outer_im_std_error.resize(L_R, L_R);
  for (int a = 0; a < L_R; ++a) {
    for (int b = 0; b < L_R; ++b) {
      const std::size_t base = off_outer + 2 * (static_cast<std::size_t>(a) * L_R + b);
      d.xi_outer_mean(a, b) = {stats.mean[base], stats.mean[base + 1]};
      d.xi_outer_re_std_error(a, b) = stats.std_error[base];
      d.xi_outer_im_std_error(a, b) = stats.std_error[base + 1];
    }
  }
  return d;
}

}  // namespace grassfeed
