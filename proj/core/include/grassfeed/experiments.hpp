#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace grassfeed {

/// Everything needed to run one experiment and emit its CSV. Defaults embed
/// the figure-reproduction configuration (L_R=4, L_T=2, N=8, l in {1,2,4},
/// SNR 0..20 dB in 5 dB steps, K=16 beamforming codebook).
struct ExperimentConfig {
  std::string experiment;  // antenna | beamforming | drf | logdet | extreme | zeta | validate

  std::uint64_t trials = 100000;
  std::uint64_t seed = 12345;
  std::string output_path;  // empty -> "<experiment>.csv"
  enum class LogBase { nat, bits };
  LogBase log_base = LogBase::nat;
  int threads = 0;  // 0 = hardware concurrency

  // Rate experiments (antenna, beamforming).
  int L_R = 4;
  int L_T = 2;
  int N = 8;
  std::vector<int> l_list = {1, 2, 4};
  std::vector<double> snr_grid_db = {0, 5, 10, 15, 20};
  int K = 16;

  // drf: distortion and bounds per codebook size.
  struct {
    int n = 2;
    int m = 1;
    int k = 2;
    std::vector<int> K_list = {16, 32, 64, 128, 256, 512, 1024};
    int codebooks = 25;  // independent codebooks averaged per K
  } drf;

  // logdet: three-way bound evaluation over a (n, k, c) grid.
  struct {
    std::vector<int> n_list = {2, 4, 8};
    std::vector<int> k_list = {1, 2, 3, 4, 5};
    std::vector<double> c_list = {0.5, 1.0, 10.0};
  } logdet;

  // extreme: asymptotic vs Monte Carlo top-sum expectation.
  struct {
    std::vector<int> n_list = {50, 100, 500};
    std::vector<int> l_list = {1, 2, 4};
    std::vector<int> L_list = {1, 2, 4, 8};
  } extreme;

  // zeta: trace fractions for one Wishart shape.
  struct {
    int m = 2;
    int n = 2;
  } zeta;
};

/// Config with defaults for the given experiment name (ConfigError if the
/// name is unknown).
ExperimentConfig default_config(const std::string& experiment);

/// Parses a JSON config file on top of the defaults. The experiment name
/// comes from the subcommand; if the file also names one, they must agree.
ExperimentConfig load_config_file(const std::string& experiment,
                                  const std::string& json_path);

/// Runs the experiment and returns the CSV contents (deterministic for a
/// given config, independent of thread count). Not valid for "validate".
std::string run_experiment_to_csv(const ExperimentConfig& config);

/// Runs the experiment and writes its output file. For "validate" this runs
/// the acceptance suite, printing one line per criterion. Returns the process
/// exit code: 0 success, 2 acceptance failure.
int run_experiment(const ExperimentConfig& config);

}  // namespace grassfeed
