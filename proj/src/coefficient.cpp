#include "fveasm/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fveasm {

CoefficientField::CoefficientField(std::string name, TensorFunction base)
    : name_(std::move(name)), base_(std::move(base)) {}

CoefficientField::CoefficientField(std::string name, TensorFunction base, int cells_per_side,
                                   std::vector<double> cell_multipliers)
    : name_(std::move(name)),
      base_(std::move(base)),
      cells_per_side_(cells_per_side),
      multipliers_(std::move(cell_multipliers)) {
  if (cells_per_side_ <= 0 ||
      multipliers_.size() != static_cast<std::size_t>(cells_per_side_ * cells_per_side_)) {
    throw std::invalid_argument("CoefficientField: need N*N cell multipliers");
  }
}

std::pair<int, int> CoefficientField::cell_of(Point p) const {
  if (cells_per_side_ == 0) return {0, 0};
  const int N = cells_per_side_;
  auto index = [N](double s) {
    return std::clamp(static_cast<int>(std::floor(s * N)), 0, N - 1);
  };
  return {index(p.x), index(p.y)};
}

double CoefficientField::cell_multiplier(int i, int j) const {
  if (cells_per_side_ == 0) return 1.0;
  return multipliers_.at(static_cast<std::size_t>(j * cells_per_side_ + i));
}

Tensor2 CoefficientField::evaluate(Point x, Point locator) const {
  if (cells_per_side_ == 0) return base_(x);
  const auto [i, j] = cell_of(locator);
  return cell_multiplier(i, j) * base_(x);
}

namespace {

CoefficientField::TensorFunction smooth_base(int k) {
  return [k](Point p) -> Tensor2 {
    const double w = k * std::numbers::pi;
    return (2.0 + std::sin(w * p.x) * std::sin(w * p.y)) * Tensor2::Identity();
  };
}

}  // namespace

CoefficientField smooth_field(int k) {
  if (k <= 0) throw std::invalid_argument("smooth_field: frequency must be positive");
  return CoefficientField("smooth" + std::to_string(k), smooth_base(k));
}

CoefficientField checkerboard_field(int k, double alpha_hat, int cells_per_side) {
  if (!(alpha_hat > 0.0)) throw std::invalid_argument("checkerboard_field: alpha_hat must be > 0");
  if (cells_per_side < 2 || cells_per_side % 2 != 0) {
    throw std::invalid_argument("checkerboard_field: cells per side must be even");
  }
  std::vector<double> multipliers(static_cast<std::size_t>(cells_per_side * cells_per_side));
  for (int j = 0; j < cells_per_side; ++j)
    for (int i = 0; i < cells_per_side; ++i)
      multipliers[j * cells_per_side + i] = (i + j) % 2 == 0 ? alpha_hat : 1.0;
  return CoefficientField("checkerboard", smooth_base(k), cells_per_side, std::move(multipliers));
}

CoefficientField constant_field(const Tensor2& value) {
  if ((value - value.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("constant_field: tensor must be symmetric");
  }
  return CoefficientField("constant", [value](Point) { return value; });
}

CoefficientField constant_field(double value) {
  return constant_field(Tensor2(value * Tensor2::Identity()));
}

CoefficientField cellwise_constant_field(int cells_per_side, std::vector<double> values) {
  return CoefficientField("cellwise", [](Point) -> Tensor2 { return Tensor2::Identity(); },
                          cells_per_side, std::move(values));
}

CoefficientField field_by_name(const std::string& name, double alpha_hat, int cells_per_side) {
  if (name == "smooth1") return smooth_field(1);
  if (name == "smooth10") return smooth_field(10);
  if (name == "checkerboard") return checkerboard_field(10, alpha_hat, cells_per_side);
  throw std::invalid_argument("unknown coefficient field '" + name + "'");
}

double sampled_min_eigenvalue(const CoefficientField& field, int samples) {
  double lowest = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    for (int i = 0; i < samples; ++i) {
      const Point p{(i + 0.5) / samples, (j + 0.5) / samples};
      const Tensor2 a = field(p);
      Eigen::SelfAdjointEigenSolver<Tensor2> eig(a, Eigen::EigenvaluesOnly);
      lowest = std::min(lowest, eig.eigenvalues()(0));
    }
  }
  return lowest;
}

void require_elliptic(const CoefficientField& field, int samples) {
  const double lowest = sampled_min_eigenvalue(field, samples);
  if (!(lowest > 0.0)) {
    throw std::domain_error("coefficient '" + field.name() +
                            "' is not uniformly elliptic: sampled min eigenvalue " +
                            std::to_string(lowest));
  }
}

}  // namespace fveasm
