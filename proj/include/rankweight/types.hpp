#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace rankweight {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;
using ConstVectorMap = Eigen::Map<const VectorXd>;

/// Pair label: +1 for related couples, -1 for non-related ones.
enum class Label : int { Related = 1, NonRelated = -1 };

inline constexpr double sign(Label p) { return static_cast<int>(p); }

enum class Metric { Euclidean, Cosine };

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

/// Input data violates a documented format or precondition.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euclidean distance between two dense vectors of equal size.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedX>& x,
                                             const Eigen::MatrixBase<DerivedY>& y) {
  return (x - y).norm();
}

/// 1 - cos(x, y); any zero vector is at distance 1 from everything.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar cosine_distance(const Eigen::MatrixBase<DerivedX>& x,
                                          const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  using std::sqrt;
  const Scalar sx = x.squaredNorm();
  const Scalar sy = y.squaredNorm();
  if (sx == Scalar(0) || sy == Scalar(0)) return Scalar(1);
  const Scalar d = Scalar(1) - x.dot(y) / sqrt(sx * sy);
  return d < Scalar(0) ? Scalar(0) : d;
}

/// Gradient of the chosen distance with respect to x and y, written into
/// grad_x / grad_y. Zero at the non-differentiable points (coincident
/// points for Euclidean, zero vectors for cosine).
template <typename DerivedX, typename DerivedY, typename Scalar>
void distance_gradient(Metric metric, const Eigen::MatrixBase<DerivedX>& x,
                       const Eigen::MatrixBase<DerivedY>& y, Vector<Scalar>& grad_x,
                       Vector<Scalar>& grad_y) {
  grad_x.setZero(x.size());
  grad_y.setZero(y.size());
  if (metric == Metric::Euclidean) {
    const Scalar d = (x - y).norm();
    if (d == Scalar(0)) return;
    grad_x = (x - y) / d;
    grad_y = -grad_x;
    return;
  }
  const Scalar nx = x.norm();
  const Scalar ny = y.norm();
  if (nx == Scalar(0) || ny == Scalar(0)) return;
  const Scalar c = x.dot(y) / (nx * ny);
  grad_x = -(y / (nx * ny) - c * x / (nx * nx));
  grad_y = -(x / (nx * ny) - c * y / (ny * ny));
}

template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar distance(Metric metric, const Eigen::MatrixBase<DerivedX>& x,
                                   const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("distance: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  return metric == Metric::Euclidean ? euclidean_distance(x, y) : cosine_distance(x, y);
}

}  // namespace rankweight
