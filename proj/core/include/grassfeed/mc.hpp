#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

#include "grassfeed/rng.hpp"

namespace grassfeed {

/// Monte Carlo sample mean with its standard error.
struct McStat {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Per-component means and standard errors of a vector-valued estimator.
struct McVecStat {
  std::uint64_t trials = 0;
  std::vector<double> mean;
  std::vector<double> std_error;
};

namespace mc_detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

constexpr std::uint64_t kChunkSize = 1024;

}  // namespace mc_detail

/// Runs `trials` independent evaluations of `fn(trial, rng, out)` where `out`
/// has `dim` slots, and returns per-component means and standard errors.
///
/// Each trial draws its own substream derived from (master_seed, stream_tag,
/// trial index), and partial sums are reduced in fixed chunk order, so the
/// result is bit-identical for any thread count. The functor is copied once
/// per worker; mutable scratch state inside it is safe.
template <typename F>
McVecStat mc_run_vec(std::uint64_t trials, std::uint64_t master_seed,
                     std::uint64_t stream_tag, std::size_t dim, F fn,
                     int threads = 0) {
  using mc_detail::kChunkSize;
  const std::uint64_t num_chunks = (trials + kChunkSize - 1) / kChunkSize;
  std::vector<double> chunk_sum(num_chunks * dim, 0.0);
  std::vector<double> chunk_sumsq(num_chunks * dim, 0.0);

  const int nthreads = static_cast<int>(
      std::min<std::uint64_t>(mc_detail::resolve_threads(threads), num_chunks));
  std::atomic<std::uint64_t> next_chunk{0};
  std::exception_ptr first_error;
  std::atomic_flag error_flag = ATOMIC_FLAG_INIT;

  auto worker = [&](F wfn) {
    std::vector<double> out(dim);
    try {
      for (;;) {
        const std::uint64_t chunk = next_chunk.fetch_add(1);
        if (chunk >= num_chunks) break;
        const std::uint64_t begin = chunk * kChunkSize;
        const std::uint64_t end = std::min(begin + kChunkSize, trials);
        double* sums = chunk_sum.data() + chunk * dim;
        double* sumsqs = chunk_sumsq.data() + chunk * dim;
        for (std::uint64_t t = begin; t < end; ++t) {
          Rng rng = Rng::substream(master_seed, stream_tag, t);
          wfn(t, rng, out.data());
          for (std::size_t d = 0; d < dim; ++d) {
            sums[d] += out[d];
            sumsqs[d] += out[d] * out[d];
          }
        }
      }
    } catch (...) {
      if (!error_flag.test_and_set()) first_error = std::current_exception();
      next_chunk.store(num_chunks);
    }
  };

  if (nthreads <= 1) {
    worker(std::move(fn));
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker, fn);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  McVecStat result;
  result.trials = trials;
  result.mean.assign(dim, 0.0);
  result.std_error.assign(dim, 0.0);
  if (trials == 0) return result;
  std::vector<double> total_sum(dim, 0.0), total_sumsq(dim, 0.0);
  for (std::uint64_t c = 0; c < num_chunks; ++c) {
    for (std::size_t d = 0; d < dim; ++d) {
      total_sum[d] += chunk_sum[c * dim + d];
      total_sumsq[d] += chunk_sumsq[c * dim + d];
    }
  }
  const double n = static_cast<double>(trials);
  for (std::size_t d = 0; d < dim; ++d) {
    const double mean = total_sum[d] / n;
    result.mean[d] = mean;
    if (trials > 1) {
      const double var = std::max(0.0, (total_sumsq[d] - n * mean * mean) / (n - 1.0));
      result.std_error[d] = std::sqrt(var / n);
    }
  }
  return result;
}

/// Scalar convenience wrapper: `fn(trial, rng) -> double`.
template <typename F>
McStat mc_run(std::uint64_t trials, std::uint64_t master_seed,
              std::uint64_t stream_tag, F fn, int threads = 0) {
  auto vec = mc_run_vec(
      trials, master_seed, stream_tag, 1,
      [g = std::move(fn)](std::uint64_t t, Rng& rng, double* out) mutable {
        out[0] = g(t, rng);
      },
      threads);
  return McStat{vec.mean[0], vec.std_error[0], trials};
}

/// Evaluates `fn(trial, rng, out)` for every trial and stores the raw per-trial
/// records row-major (trials x dim). Same substream scheme as mc_run_vec.
template <typename F>
std::vector<double> mc_collect(std::uint64_t trials, std::uint64_t master_seed,
                               std::uint64_t stream_tag, std::size_t dim, F fn,
                               int threads = 0) {
  using mc_detail::kChunkSize;
  std::vector<double> records(trials * dim);
  const std::uint64_t num_chunks = (trials + kChunkSize - 1) / kChunkSize;
  const int nthreads = static_cast<int>(
      std::min<std::uint64_t>(mc_detail::resolve_threads(threads), num_chunks));
  std::atomic<std::uint64_t> next_chunk{0};
  std::exception_ptr first_error;
  std::atomic_flag error_flag = ATOMIC_FLAG_INIT;

  auto worker = [&](F wfn) {
    try {
      for (;;) {
        const std::uint64_t chunk = next_chunk.fetch_add(1);
        if (chunk >= num_chunks) break;
        const std::uint64_t begin = chunk * kChunkSize;
        const std::uint64_t end = std::min(begin + kChunkSize, trials);
        for (std::uint64_t t = begin; t < end; ++t) {
          Rng rng = Rng::substream(master_seed, stream_tag, t);
          wfn(t, rng, records.data() + t * dim);
        }
      }
    } catch (...) {
      if (!error_flag.test_and_set()) first_error = std::current_exception();
      next_chunk.store(num_chunks);
    }
  };

  if (nthreads <= 1) {
    worker(std::move(fn));
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker, fn);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

}  // namespace grassfeed
