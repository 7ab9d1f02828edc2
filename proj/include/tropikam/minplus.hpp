#pragma once

// Min-plus (tropical) linear algebra over dense square kernels.
//
// The semiring here has no +inf: every kernel is a complete weighted digraph,
// so there is no tropical identity matrix and powers start at 1.

#include <cstddef>
#include <string>
#include <vector>

#include "tropikam/core.hpp"

namespace tropikam {

struct Point {
  std::string label;
  std::vector<double> coords;  // optional; empty when the source had none

  bool operator==(const Point&) const = default;
};

/// A finite point set with a dense one-step cost A(x, y). Construction
/// validates squareness, finiteness and label uniqueness.
class CostKernel {
 public:
  CostKernel(std::vector<Point> points, Matrix costs);
  /// Labels "0", "1", ... and no coordinates.
  explicit CostKernel(Matrix costs);

  std::size_t size() const noexcept { return costs_.rows(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Matrix& costs() const noexcept { return costs_; }
  double operator()(std::size_t x, std::size_t y) const { return costs_(x, y); }

  /// Same points, costs shifted by -shift.
  CostKernel shifted(double shift) const;

  bool operator==(const CostKernel&) const = default;

 private:
  std::vector<Point> points_;
  Matrix costs_;
};

/// result(x, y) = min_z a(x, z) + b(z, y). Both operands square, same size.
Matrix tropical_product(const Matrix& a, const Matrix& b);

/// m-fold tropical product, m >= 1.
Matrix tropical_power(const Matrix& a, int m);

/// Minimum over directed cycles of (cycle weight / cycle length), by Karp's
/// dynamic program. Equals lim A^m(x, y) / m for every entry.
double min_mean_cycle(const Matrix& a);

struct NormalizedKernel {
  CostKernel kernel;      // A - l
  double critical_value;  // l
};

NormalizedKernel normalize(const CostKernel& a);

/// Minimum cost over all walks of length >= 1 from x to y. Requires every
/// cycle mean to be >= -tol.num; throws PreconditionError otherwise.
Matrix shortest_walk_closure(const Matrix& a, const Tolerances& tol = default_tolerances());

namespace detail {
/// Rectangular min-plus product, lhs.cols() == rhs.rows().
Matrix minplus_product(const Matrix& lhs, const Matrix& rhs);
}  // namespace detail

}  // namespace tropikam
