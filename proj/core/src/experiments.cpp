#include "grassfeed/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "grassfeed/acceptance.hpp"
#include "grassfeed/errors.hpp"
#include "grassfeed/extreme_stats.hpp"
#include "grassfeed/sumrate.hpp"
#include "grassfeed/wishart_cond.hpp"

namespace grassfeed {

namespace {

using nlohmann::json;

constexpr double kLn2 = 0.6931471805599453;

const std::set<std::string>& known_experiments() {
  static const std::set<std::string> names = {
      "antenna", "beamforming", "drf", "logdet", "extreme", "zeta", "validate"};
  return names;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Rates are kept in natural log units internally; the bits column divides by
// ln 2 at emission time only.
double to_base(double nat_value, ExperimentConfig::LogBase base) {
  return base == ExperimentConfig::LogBase::bits ? nat_value / kLn2 : nat_value;
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void read_int_list(const json& j, const char* key, std::vector<int>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_number_integer()) {
    out = {j.at(key).get<int>()};
    return;
  }
  read_field(j, key, out);
  if (out.empty()) throw ConfigError(std::string("config field '") + key + "' must be non-empty");
}

std::string rate_rows(const ExperimentConfig& cfg, bool beamforming) {
  if (cfg.snr_grid_db.empty()) throw ConfigError("config field 'snr_grid_db' must be non-empty");
  if (cfg.l_list.empty()) throw ConfigError("config field 'params.l' must be non-empty");

  std::ostringstream os;
  if (beamforming) {
    os << "snr_db,l,K,mc_rate,mc_rate_stderr,ub_mc,ub_mc_stderr,ub_lower_theory,"
          "ub_upper_theory,perfect_rate,e_norm_sum,gamma_sup\n";
  } else {
    os << "snr_db,l,K,mc_rate,mc_rate_stderr,ub_mc,ub_mc_stderr,ub_lower_theory,"
          "ub_upper_theory,e_norm_sum\n";
  }
  for (int l : cfg.l_list) {
    Codebook cb;
    if (beamforming)
      cb = generate_random_codebook(cfg.L_T, 1, l, cfg.K, cfg.seed);
    for (double snr_db : cfg.snr_grid_db) {
      SystemParams p;
      p.L_R = cfg.L_R;
      p.L_T = cfg.L_T;
      p.N = cfg.N;
      p.l = l;
      p.rho = std::pow(10.0, snr_db / 10.0);
      p.K = cfg.K;
      p.trials = cfg.trials;
      p.seed = cfg.seed;
      const SumRateResult r = beamforming
                                  ? simulate_beamforming(p, cb, cfg.threads)
                                  : simulate_antenna_selection(p, cfg.threads);
      os << fmt(snr_db) << ',' << l << ',' << (beamforming ? cb.size() : 0) << ','
         << fmt(to_base(r.mc_rate.estimate, cfg.log_base)) << ','
         << fmt(to_base(r.mc_rate.std_error, cfg.log_base)) << ','
         << fmt(to_base(r.ub_mc.estimate, cfg.log_base)) << ','
         << fmt(to_base(r.ub_mc.std_error, cfg.log_base)) << ','
         << fmt(to_base(r.ub_lower_theory, cfg.log_base)) << ','
         << (r.ub_upper_theory ? fmt(to_base(*r.ub_upper_theory, cfg.log_base)) : "");
      if (beamforming) {
        os << ',' << fmt(to_base(r.perfect_rate->estimate, cfg.log_base)) << ','
           << fmt(r.e_norm_sum) << ',' << fmt(*r.gamma_sup);
      } else {
        os << ',' << fmt(r.e_norm_sum);
      }
      os << '\n';
    }
  }
  return os.str();
}

std::string drf_rows(const ExperimentConfig& cfg) {
  const auto& d = cfg.drf;
  if (d.K_list.empty()) throw ConfigError("config field 'drf.K_list' must be non-empty");
  if (d.codebooks < 1) throw ConfigError("config field 'drf.codebooks' must be >= 1");
  std::ostringstream os;
  os << "n,m,k,K,trials,distortion,distortion_stderr,drf_lower,drf_upper\n";
  for (int K : d.K_list) {
    const DrfBounds b = drf_bounds(d.n, d.m, d.k, K);
    // Ensemble average over independent codebooks: the anchors and bounds
    // refer to the random-code ensemble, and a single codebook's distortion
    // fluctuates well beyond source-sampling noise.
    const std::uint64_t per_cb = std::max<std::uint64_t>(1, cfg.trials / d.codebooks);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < d.codebooks; ++i) {
      const Codebook cb = generate_random_codebook(
          d.n, d.m, d.k, K, cfg.seed + 0x9e3779b9u * static_cast<std::uint64_t>(i + 1));
      const double est = estimate_distortion(cb, per_cb, cfg.seed + i, cfg.threads).estimate;
      sum += est;
      sumsq += est * est;
    }
    const double mean = sum / d.codebooks;
    const double var = d.codebooks > 1
                           ? std::max(0.0, (sumsq - d.codebooks * mean * mean) / (d.codebooks - 1.0))
                           : 0.0;
    const double se = std::sqrt(var / d.codebooks);
    os << d.n << ',' << d.m << ',' << d.k << ',' << K << ',' << per_cb * d.codebooks
       << ',' << fmt(mean) << ',' << fmt(se) << ',' << fmt(b.lower) << ','
       << fmt(b.upper) << '\n';
  }
  return os.str();
}

std::string logdet_rows(const ExperimentConfig& cfg) {
  const auto& g = cfg.logdet;
  if (g.n_list.empty() || g.k_list.empty() || g.c_list.empty())
    throw ConfigError("config fields 'logdet.{n_list,k_list,c_list}' must be non-empty");
  std::ostringstream os;
  os << "n,k,c,trials,logdet_mc,logdet_mc_stderr,lower_asymptotic,jensen_upper,"
        "expected_det_closed_form\n";
  for (int n : g.n_list) {
    for (int k : g.k_list) {
      for (double c : g.c_list) {
        const LogdetQuery q{n, k, c};
        const McStat mc = logdet_mc(q, cfg.trials, cfg.seed, cfg.threads);
        const double lower = logdet_lower_asymptotic(q);
        os << n << ',' << k << ',' << fmt(c) << ',' << cfg.trials << ','
           << fmt(to_base(mc.estimate, cfg.log_base)) << ','
           << fmt(to_base(mc.std_error, cfg.log_base)) << ','
           << fmt(to_base(lower, cfg.log_base)) << ',';
        if (k <= 5) {
          os << fmt(to_base(jensen_upper(q), cfg.log_base)) << ','
             << fmt(expected_det_closed_form(q));
        } else {
          os << ',';
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

std::string extreme_rows(const ExperimentConfig& cfg) {
  const auto& e = cfg.extreme;
  if (e.n_list.empty() || e.l_list.empty() || e.L_list.empty())
    throw ConfigError("config fields 'extreme.{n_list,l_list,L_list}' must be non-empty");
  std::vector<int> ls = e.l_list;
  std::sort(ls.begin(), ls.end());
  std::ostringstream os;
  os << "n,l,L,trials,asymptotic,mc_estimate,mc_stderr,a_n,b_n\n";
  for (int L : e.L_list) {
    for (int n : e.n_list) {
      std::vector<int> valid;
      for (int l : ls)
        if (l <= n) valid.push_back(l);
      if (valid.empty()) continue;
      const McVecStat mc = mc_top_sums(n, valid, L, cfg.trials, cfg.seed, cfg.threads);
      for (std::size_t i = 0; i < valid.size(); ++i) {
        const ExtremeParams p{n, valid[i], L};
        const double a = solve_a_n(n, L);
        os << n << ',' << valid[i] << ',' << L << ',' << cfg.trials << ','
           << fmt(expected_top_sum(p)) << ',' << fmt(mc.mean[i]) << ','
           << fmt(mc.std_error[i]) << ',' << fmt(a) << ',' << fmt(b_n(a, L)) << '\n';
      }
    }
  }
  return os.str();
}

std::string zeta_rows(const ExperimentConfig& cfg) {
  const WishartShape shape{cfg.zeta.m, cfg.zeta.n};
  const McVecStat all = zeta_mc_all(shape, cfg.trials, cfg.seed, cfg.threads);
  std::ostringstream os;
  os << "m,n,i,trials,zeta_mc,zeta_mc_stderr,zeta1_asymptotic\n";
  for (int i = 1; i <= shape.m; ++i) {
    os << shape.m << ',' << shape.n << ',' << i << ',' << cfg.trials << ','
       << fmt(all.mean[i - 1]) << ',' << fmt(all.std_error[i - 1]) << ',';
    if (i == 1) os << fmt(zeta1_asymptotic(shape));
    os << '\n';
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open output file " + path);
  os << contents;
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace

ExperimentConfig default_config(const std::string& experiment) {
  if (known_experiments().count(experiment) == 0)
    throw ConfigError("unknown experiment '" + experiment + "'");
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.output_path = experiment + ".csv";
  return cfg;
}

ExperimentConfig load_config_file(const std::string& experiment,
                                  const std::string& json_path) {
  ExperimentConfig cfg = default_config(experiment);
  std::ifstream is(json_path);
  if (!is) throw IoError("cannot open config file " + json_path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }

  std::string named;
  read_field(j, "experiment", named);
  if (!named.empty() && named != experiment)
    throw ConfigError("config field 'experiment' (" + named +
                      ") does not match the subcommand (" + experiment + ")");

  read_field(j, "trials", cfg.trials);
  read_field(j, "seed", cfg.seed);
  read_field(j, "output_path", cfg.output_path);
  read_field(j, "threads", cfg.threads);
  if (j.contains("log_base")) {
    const std::string base = j.at("log_base").get<std::string>();
    if (base == "nat")
      cfg.log_base = ExperimentConfig::LogBase::nat;
    else if (base == "bits")
      cfg.log_base = ExperimentConfig::LogBase::bits;
    else
      throw ConfigError("config field 'log_base' must be 'nat' or 'bits'");
  }
  read_field(j, "snr_grid_db", cfg.snr_grid_db);
  if (j.contains("params")) {
    const json& p = j.at("params");
    read_field(p, "L_R", cfg.L_R);
    read_field(p, "L_T", cfg.L_T);
    read_field(p, "N", cfg.N);
    read_int_list(p, "l", cfg.l_list);
    read_field(p, "K", cfg.K);
  }
  if (j.contains("drf")) {
    const json& p = j.at("drf");
    read_field(p, "n", cfg.drf.n);
    read_field(p, "m", cfg.drf.m);
    read_field(p, "k", cfg.drf.k);
    read_int_list(p, "K_list", cfg.drf.K_list);
    read_field(p, "codebooks", cfg.drf.codebooks);
  }
  if (j.contains("logdet")) {
    const json& p = j.at("logdet");
    read_int_list(p, "n_list", cfg.logdet.n_list);
    read_int_list(p, "k_list", cfg.logdet.k_list);
    read_field(p, "c_list", cfg.logdet.c_list);
  }
  if (j.contains("extreme")) {
    const json& p = j.at("extreme");
    read_int_list(p, "n_list", cfg.extreme.n_list);
    read_int_list(p, "l_list", cfg.extreme.l_list);
    read_int_list(p, "L_list", cfg.extreme.L_list);
  }
  if (j.contains("zeta")) {
    const json& p = j.at("zeta");
    read_field(p, "m", cfg.zeta.m);
    read_field(p, "n", cfg.zeta.n);
  }
  return cfg;
}

std::string run_experiment_to_csv(const ExperimentConfig& cfg) {
  if (known_experiments().count(cfg.experiment) == 0)
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  if (cfg.experiment == "validate")
    throw ConfigError("'validate' emits pass/fail lines, not a data CSV; use run_experiment");
  if (cfg.trials < 100) throw ConfigError("config field 'trials' must be >= 100");

  if (cfg.experiment == "antenna") return rate_rows(cfg, false);
  if (cfg.experiment == "beamforming") return rate_rows(cfg, true);
  if (cfg.experiment == "drf") return drf_rows(cfg);
  if (cfg.experiment == "logdet") return logdet_rows(cfg);
  if (cfg.experiment == "extreme") return extreme_rows(cfg);
  return zeta_rows(cfg);
}

int run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "validate") {
    const auto results = run_all_acceptance(cfg.threads, &std::cout);
    std::ostringstream os;
    os << "criterion,name,passed,detail\n";
    bool all_ok = true;
    for (const auto& r : results) {
      all_ok = all_ok && r.passed;
      std::string detail = r.detail;
      for (auto& ch : detail)
        if (ch == ',') ch = ';';
      os << r.id << ',' << r.name << ',' << (r.passed ? "pass" : "fail") << ','
         << detail << '\n';
    }
    write_file(cfg.output_path.empty() ? "validate.csv" : cfg.output_path, os.str());
    return all_ok ? 0 : 2;
  }
  const std::string csv = run_experiment_to_csv(cfg);
  write_file(cfg.output_path, csv);
  return 0;
}

}  // namespace grassfeed
