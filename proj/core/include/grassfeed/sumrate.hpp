#pragma once

#include <cstdint>
#include <optional>

#include "grassfeed/cgmatrix.hpp"
#include "grassfeed/grassmann.hpp"
#include "grassfeed/mc.hpp"

namespace grassfeed {

/// One simulated multi-access configuration. rho is the total average SNR in
/// linear scale (also the average received SNR); trials/seed drive the
/// Monte Carlo; K is the beamforming codebook size (ignored by antenna
/// selection).
struct SystemParams {
  int L_R = 4;
  int L_T = 2;
  int N = 8;
  int l = 2;
  double rho = 10.0;
  int K = 16;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
};

enum class NormSumMode { antenna, beamforming };

/// Monte Carlo sum rate (natural log units) together with the theoretical
/// bound pipeline evaluated at the same configuration.
struct SumRateResult {
  McStat mc_rate;
  McStat ub_mc;                           // MC of the norm-decoupled bound expression
  double ub_lower_theory = 0.0;           // Wishart asymptotic on the bound
  std::optional<double> ub_upper_theory;  // Jensen closed form; absent for l > 5
  double e_norm_sum = 0.0;                // E[sum n_j^2] fed into the bound
  std::optional<double> gamma_sup;        // beamforming only
  std::optional<McStat> perfect_rate;     // beamforming only: b_j = v_{j,1}
};

struct UpperBoundEval {
  McStat mc;
  double lower = 0.0;
  std::optional<double> upper;
};

/// Largest achievable expected beamforming energy gamma for a K-point
/// codebook: l - D*(K) with D*(K) taken as the Theorem-3 style upper bound
/// on G_{L_T,1}^(l)(C) (clamped at zero). Requires L_T >= 2.
double gamma_sup(int L_T, int l, int K);

/// zeta_1 for the Wishart shape induced by an a x b channel: the asymptotic
/// formula when min(a,b) >= 4, otherwise a cached 10^6-trial MC estimate
/// (fixed internal seed, so bound columns are reproducible).
double zeta1_for_shape(int a, int b);

/// E[sum_j n_j^2] entering the bound expression. Antenna mode: the extreme
/// order statistics of N*L_T column norms (gamma unused). Beamforming mode:
/// the zeta_1 energy split at the given gamma; throws DegenerateBeamforming
/// when L_T == 1 (use the antenna path).
double expected_norm_sum(const SystemParams& p, double gamma, NormSumMode mode);

/// The bound expression E[log det(I_l + (rho/l)(e_norm_sum/l) Xi^dagger Xi)]
/// evaluated three ways (MC / asymptotic lower / Jensen upper, the latter
/// only for l <= 5).
UpperBoundEval sum_rate_upper_bound(const SystemParams& p, double e_norm_sum,
                                    int threads = 0);

/// Antenna selection: keep the l largest-norm columns of the overall channel.
SumRateResult simulate_antenna_selection(const SystemParams& p, int threads = 0);

/// General beamforming: select l users by Frobenius norm, quantize the matrix
/// of top right singular vectors against cb (shape (L_T, 1, l)), and transmit
/// on the chosen beams. Also reports the perfect-beamforming baseline
/// (b_j = v_{j,1}). The codebook size, not p.K, determines the rate feedback.
SumRateResult simulate_beamforming(const SystemParams& p, const Codebook& cb,
                                   int threads = 0);

/// Instrumented beamforming run recording the quantities behind the energy
/// split: per-user inner products |v_{j,k}^dagger b*_j|^2, measured gamma and
/// sum of squared equivalent-channel norms, direction second moments and
/// norm-direction correlations.
struct BeamformingDiagnostics {
  std::uint64_t trials = 0;
  McStat rate;
  McStat perfect_rate;
  McStat gamma;     // sum_j |v_{j,1}^dagger b*_j|^2
  McStat norm_sum;  // sum_j n_j^2
  Eigen::MatrixXd inner_sq_mean;       // l x L_T
  Eigen::MatrixXd inner_sq_std_error;  // l x L_T
  Eigen::VectorXd normsq_mean;         // per selected user j
  Eigen::VectorXd normsq_std_error;
  Eigen::MatrixXcd xi_outer_mean;      // E[xi xi^dagger] pooled over j, L_R x L_R
  Eigen::MatrixXd xi_outer_re_std_error;
  Eigen::MatrixXd xi_outer_im_std_error;
  Eigen::MatrixXd normsq_dir_corr;     // l x 2L_R: corr(n_j^2, Re/Im xi_j coords)
};

BeamformingDiagnostics beamforming_diagnostics(const SystemParams& p,
                                               const Codebook& cb,
                                               int threads = 0);

}  // namespace grassfeed
