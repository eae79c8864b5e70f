#include "fveasm/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fveasm {

LanczosResult lanczos_extremes(const std::function<Vector(const Vector&)>& op,
                               const SparseMatrix& inner, const LanczosOptions& options) {
  const Index dim = inner.rows();
  if (dim == 0 || inner.cols() != dim) throw std::invalid_argument("lanczos: bad inner-product matrix");
  const int max_steps = static_cast<int>(std::min<Index>(options.max_iterations, dim));

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = normal(rng);
  v /= std::sqrt(v.dot(inner * v));

  DenseMatrix basis(dim, max_steps);
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples steps j and j + 1
  LanczosResult result;

  for (int j = 0; j < max_steps; ++j) {
    basis.col(j) = v;
    Vector w = op(v);
    alpha.push_back(w.dot(inner * v));

    // two passes of classical Gram-Schmidt in the B inner product
    for (int pass = 0; pass < 2; ++pass) {
      const Vector bw = inner * w;
      const Vector coeffs = basis.leftCols(j + 1).transpose() * bw;
      w.noalias() -= basis.leftCols(j + 1) * coeffs;
    }
    const double norm = std::sqrt(std::max(0.0, w.dot(inner * w)));
    beta.push_back(norm);

    const int m = j + 1;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> tri;
    Vector diag = Eigen::Map<Vector>(alpha.data(), m);
    Vector sub = m > 1 ? Vector(Eigen::Map<Vector>(beta.data(), m - 1)) : Vector(0);
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Vector& theta = tri.eigenvalues();
    const double res_low = std::abs(norm * tri.eigenvectors()(m - 1, 0));
    const double res_high = std::abs(norm * tri.eigenvectors()(m - 1, m - 1));

    result.iterations = m;
    result.smallest = theta(0);
    result.largest = theta(m - 1);
    const double scale = std::max(std::abs(theta(0)), std::abs(theta(m - 1)));
    const bool invariant = norm <= 1e-12 * std::max(1.0, scale);
    result.smallest_converged =
        invariant || res_low <= options.tolerance * std::max(std::abs(theta(0)), 1e-300);
    result.largest_converged =
        invariant || res_high <= options.tolerance * std::max(std::abs(theta(m - 1)), 1e-300);
    if (invariant || (result.smallest_converged && result.largest_converged)) break;
    v = w / norm;
  }
  return result;
}

}  // namespace fveasm
