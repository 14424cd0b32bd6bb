#include "grassfeed/grassmann.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <limits>

#include "grassfeed/errors.hpp"

namespace grassfeed {

namespace {

constexpr std::uint64_t kTagDistortion = 0x64697374;
constexpr std::uint64_t kTagCodebook = 0x636f6465;

// Orthonormalizes g in place via Householder QR, fixing column phases so the
// R diagonal is real positive (yields the invariant measure for Gaussian g).
// Returns false when a diagonal entry is numerically zero.
bool orthonormalize(const ComplexMatrix& g, ComplexMatrix& out) {
  const Eigen::Index n = g.rows(), m = g.cols();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  out.noalias() = qr.householderQ() * ComplexMatrix::Identity(n, m);
  const auto& qrm = qr.matrixQR();
  for (Eigen::Index j = 0; j < m; ++j) {
    const std::complex<double> d = qrm(j, j);
    const double mag = std::abs(d);
    if (mag <= 1e-12 * std::max(1.0, g.col(j).norm())) return false;
    out.col(j) *= d / mag;
  }
  return true;
}

void check_same_shape(const CompositePoint& p, const CompositePoint& q) {
  if (p.n != q.n || p.m != q.m || p.k != q.k)
    throw ShapeMismatch("composite points differ in (n, m, k)");
}

double sq_factor_distance(const ComplexMatrix& p, const ComplexMatrix& q, int m) {
  // d_c^2 = (1/2)||PP^† - QQ^†||_F^2 = m - ||P^† Q||_F^2
  double overlap = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) overlap += std::norm(p.col(a).dot(q.col(b)));
  return std::max(0.0, static_cast<double>(m) - overlap);
}

}  // namespace

CompositePoint sample_uniform_composite(int n, int m, int k, Rng& stream) {
  if (m < 1 || n < m || k < 1)
    throw InvalidParams("sample_uniform_composite: need 1 <= m <= n and k >= 1");
  CompositePoint p{n, m, k, {}};
  p.blocks.reserve(k);
  ComplexMatrix block(n, m);
  for (int f = 0; f < k; ++f) {
    ComplexMatrix g = sample_complex_gaussian(n, m, stream);
    if (!orthonormalize(g, block)) {
      g = sample_complex_gaussian(n, m, stream);  // resample once
      if (!orthonormalize(g, block))
        throw RankDeficient("sample_uniform_composite: Gaussian block rank-deficient twice");
    }
    p.blocks.push_back(block);
  }
  return p;
}

double sq_chordal_distance(const CompositePoint& p, const CompositePoint& q) {
  check_same_shape(p, q);
  double d2 = 0.0;
  for (int f = 0; f < p.k; ++f)
    d2 += sq_factor_distance(p.blocks[f], q.blocks[f], p.m);
  return d2;
}

double chordal_distance(const CompositePoint& p, const CompositePoint& q) {
  return std::sqrt(sq_chordal_distance(p, q));
}

Codebook generate_random_codebook(int n, int m, int k, int K, std::uint64_t seed) {
  if (K < 1) throw InvalidParams("generate_random_codebook: K >= 1 required");
  Codebook cb{n, m, k, seed, {}};
  cb.points.reserve(K);
  Rng stream = Rng::substream(seed, kTagCodebook);
  for (int i = 0; i < K; ++i) cb.points.push_back(sample_uniform_composite(n, m, k, stream));
  return cb;
}

QuantizeResult quantize(const CompositePoint& q, const Codebook& cb) {
  if (cb.points.empty()) throw InvalidParams("quantize: empty codebook");
  if (q.n != cb.n || q.m != cb.m || q.k != cb.k)
    throw ShapeMismatch("quantize: source and codebook (n, m, k) differ");
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cb.size(); ++i) {
    const double d2 = sq_chordal_distance(q, cb.points[i]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return QuantizeResult{best, best_d2};
}

McStat estimate_distortion(const Codebook& cb, std::uint64_t trials,
                           std::uint64_t seed, int threads) {
  if (trials < 1) throw InvalidParams("estimate_distortion: trials >= 1 required");
  const Codebook* book = &cb;
  auto body = [book](std::uint64_t, Rng& rng) {
    return quantize(sample_uniform_composite(book->n, book->m, book->k, rng), *book)
        .sq_distance;
  };
  return mc_run(trials, seed, kTagDistortion, body, threads);
}

DrfBounds drf_bounds(int n, int m, int k, int K) {
  if (m == n) throw DegenerateManifold("drf_bounds: m == n is a single point (D* = 0)");
  if (m < 1 || m > n - 1 || k < 1 || K < 1)
    throw InvalidParams("drf_bounds: need 1 <= m <= n-1, k >= 1, K >= 1");
  const int t = m * (n - m);

  double log_eta = -std::lgamma(t + 1.0);
  if (2 * m <= n) {
    for (int i = 1; i <= m; ++i)
      log_eta += std::lgamma(n - i + 1.0) - std::lgamma(m - i + 1.0);
  } else {
    for (int i = 1; i <= n - m; ++i)
      log_eta += std::lgamma(n - i + 1.0) - std::lgamma(n - m - i + 1.0);
  }

  const double kt = static_cast<double>(k) * t;
  const double log_c =
      -(k * std::lgamma(t + 1.0) - std::lgamma(kt + 1.0) + k * log_eta) / kt;
  const double scale = std::exp(log_c) * std::pow(static_cast<double>(K), -1.0 / kt);

  DrfBounds b;
  b.t = t;
  b.eta = std::exp(log_eta);
  b.lower = kt / (kt + 1.0) * scale;
  b.upper = std::exp(std::lgamma(1.0 / kt)) / kt * scale;
  return b;
}

namespace {

constexpr char kMagic[8] = {'G', 'F', 'C', 'B', 'O', 'O', 'K', '1'};

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void save_codebook(const Codebook& cb, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("save_codebook: cannot open " + path);
  os.write(kMagic, sizeof(kMagic));
  const std::uint32_t n = cb.n, m = cb.m, k = cb.k;
  const std::uint64_t K = cb.points.size();
  write_pod(os, n);
  write_pod(os, m);
  write_pod(os, k);
  write_pod(os, K);
  write_pod(os, cb.seed);
  for (const auto& point : cb.points) {
    for (const auto& block : point.blocks) {
      for (int i = 0; i < cb.n; ++i) {
        for (int j = 0; j < cb.m; ++j) {
          write_pod(os, block(i, j).real());
          write_pod(os, block(i, j).imag());
        }
      }
    }
  }
  if (!os) throw IoError("save_codebook: write failed for " + path);
}

Codebook load_codebook(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_codebook: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("load_codebook: bad magic in " + path);
  std::uint32_t n = 0, m = 0, k = 0;
  std::uint64_t K = 0, seed = 0;
  read_pod(is, n);
  read_pod(is, m);
  read_pod(is, k);
  read_pod(is, K);
  read_pod(is, seed);
  if (!is || n < 1 || m < 1 || m > n || k < 1 || K < 1)
    throw IoError("load_codebook: invalid header in " + path);
  Codebook cb{static_cast<int>(n), static_cast<int>(m), static_cast<int>(k), seed, {}};
  cb.points.reserve(K);
  for (std::uint64_t p = 0; p < K; ++p) {
    CompositePoint point{cb.n, cb.m, cb.k, {}};
    point.blocks.reserve(k);
    for (std::uint32_t f = 0; f < k; ++f) {
      ComplexMatrix block(n, m);
      for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < m; ++j) {
          double re = 0.0, im = 0.0;
          read_pod(is, re);
          read_pod(is, im);
          block(i, j) = {re, im};
        }
      }
      point.blocks.push_back(std::move(block));
    }
    cb.points.push_back(std::move(point));
  }
  if (!is) throw IoError("load_codebook: truncated file " + path);
  return cb;
}

}  // namespace grassfeed
