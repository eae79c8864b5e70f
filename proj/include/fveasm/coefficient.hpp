#pragma once

#include "fveasm/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fveasm {

/// Symmetric 2x2 diffusion coefficient A(x), optionally scaled by a constant
/// multiplier on each cell of an N x N grid of squares.
///
/// Cells are half-open, [iH,(i+1)H) x [jH,(j+1)H), with the right and top
/// edges of the domain closed. Callers that integrate over a triangle should
/// use the `locator` overload with a point strictly inside the triangle so
/// that quadrature points on cell boundaries pick up the triangle's cell.
class CoefficientField {
 public:
  using TensorFunction = std::function<Tensor2(Point)>;

  CoefficientField(std::string name, TensorFunction base);
  CoefficientField(std::string name, TensorFunction base, int cells_per_side,
                   std::vector<double> cell_multipliers);

  Tensor2 operator()(Point x) const { return evaluate(x, x); }
  Tensor2 evaluate(Point x, Point locator) const;

  const std::string& name() const { return name_; }
  int cells_per_side() const { return cells_per_side_; }
  /// Multiplier of cell (i, j); 1 when the field has no cell structure.
  double cell_multiplier(int i, int j) const;
  /// Cell (i, j) containing p under the half-open convention.
  std::pair<int, int> cell_of(Point p) const;

 private:
  std::string name_;
  TensorFunction base_;
  int cells_per_side_ = 0;
  std::vector<double> multipliers_;  // row-major, j * N + i
};

/// (2 + sin(k pi x) sin(k pi y)) I
CoefficientField smooth_field(int k);

/// alpha_1 (2 + sin(k pi x) sin(k pi y)) I with alpha_1 = alpha_hat on the
/// shaded cells ((i + j) even, so the lower-left cell is shaded) of an N x N checkerboard and 1 elsewhere.
CoefficientField checkerboard_field(int k, double alpha_hat, int cells_per_side);

CoefficientField constant_field(const Tensor2& value);
CoefficientField constant_field(double value);

/// Constant tensor on each cell of an N x N grid (cell-wise constant field).
CoefficientField cellwise_constant_field(int cells_per_side, std::vector<double> values);

/// Look up a field by the names accepted on the command line:
/// smooth1, smooth10, checkerboard.
CoefficientField field_by_name(const std::string& name, double alpha_hat, int cells_per_side);

/// Smallest eigenvalue of A over a samples x samples grid of cell centers.
double sampled_min_eigenvalue(const CoefficientField& field, int samples = 100);

/// Throws std::domain_error if sampled_min_eigenvalue is not positive.
void require_elliptic(const CoefficientField& field, int samples = 100);

}  // namespace fveasm
