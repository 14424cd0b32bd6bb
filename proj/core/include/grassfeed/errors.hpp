#pragma once

#include <stdexcept>

namespace grassfeed {

/// Decomposition iteration exceeded its internal cap (pathological input).
struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Matrix violates the Hermitian symmetry tolerance.
struct NotHermitian : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operands do not share the required dimensions.
struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Gaussian sample had numerical rank below the requested plane dimension.
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// m == n: the manifold is a single point and the distortion is zero.
struct DegenerateManifold : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Closed-form determinant requested for k outside 1..5.
struct UnsupportedOrder : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Bracketing solver found no root (signals an implementation bug).
struct NoRoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Beamforming norm-split requested with L_T == 1; use the antenna path.
struct DegenerateBeamforming : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace grassfeed
