#pragma once

#include "fveasm/types.hpp"

#include <cstdint>
#include <functional>

namespace fveasm {

struct LanczosOptions {
  int max_iterations = 400;
  /// Ritz residual bound relative to |theta| required for convergence.
  double tolerance = 1e-6;
  std::uint64_t seed = 20140605;
};

struct LanczosResult {
  double smallest = 0.0;
  double largest = 0.0;
  bool smallest_converged = false;
  bool largest_converged = false;
  int iterations = 0;
};

/// Extreme eigenvalues of `op`, which must be self-adjoint with respect to
/// the inner product <u, v>_B = v^T B u for the SPD matrix `inner`.
/// Lanczos with full B-reorthogonalization; no restarts.
LanczosResult lanczos_extremes(const std::function<Vector(const Vector&)>& op,
                               const SparseMatrix& inner, const LanczosOptions& options = {});

}  // namespace fveasm
