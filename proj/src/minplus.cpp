#include "tropikam/minplus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "parallel.hpp"

namespace tropikam {

namespace {

std::vector<Point> default_points(std::size_t n) {
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i].label = std::to_string(i);
  return pts;
}

void require_square(const Matrix& a, const char* op) {
  if (!a.square() || a.rows() == 0)
    throw DimensionError(std::string(op) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

}  // namespace

CostKernel::CostKernel(std::vector<Point> points, Matrix costs)
    : points_(std::move(points)), costs_(std::move(costs)) {
  if (costs_.rows() == 0) throw PreconditionError("cost kernel needs at least one point");
  require_square(costs_, "CostKernel");
  if (points_.size() != costs_.rows())
    throw DimensionError("CostKernel: " + std::to_string(points_.size()) + " labels for " +
                         std::to_string(costs_.rows()) + " points");
  if (!costs_.all_finite()) throw PreconditionError("CostKernel: non-finite cost entry");
  std::set<std::string> seen;
  for (const auto& p : points_)
    if (!seen.insert(p.label).second)
      throw PreconditionError("CostKernel: duplicate label '" + p.label + "'");
}

CostKernel::CostKernel(Matrix costs)
    : CostKernel(default_points(costs.rows()), std::move(costs)) {}

CostKernel CostKernel::shifted(double shift) const {
  Matrix m = costs_;
  m -= shift;
  return CostKernel(points_, std::move(m));
}

namespace detail {

Matrix minplus_product(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows() || lhs.cols() == 0)
    throw DimensionError("minplus_product: inner dimensions " + std::to_string(lhs.cols()) +
                         " and " + std::to_string(rhs.rows()) + " differ");
  const std::size_t inner = lhs.cols();
  const std::size_t cols = rhs.cols();
  Matrix out(lhs.rows(), cols, std::numeric_limits<double>::infinity());
  parallel_rows(lhs.rows(), inner * cols, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double* dst = out.row(i).data();
      for (std::size_t k = 0; k < inner; ++k) {
        const double a = lhs(i, k);
        const double* src = rhs.row(k).data();
        for (std::size_t j = 0; j < cols; ++j) {
          const double v = a + src[j];
          dst[j] = v < dst[j] ? v : dst[j];
        }
      }
    }
  });
  return out;
}

}  // namespace detail

Matrix tropical_product(const Matrix& a, const Matrix& b) {
  require_square(a, "tropical_product");
  require_square(b, "tropical_product");
  if (a.rows() != b.rows())
    throw DimensionError("tropical_product: sizes " + std::to_string(a.rows()) + " and " +
                         std::to_string(b.rows()) + " differ");
  return detail::minplus_product(a, b);
}

Matrix tropical_power(const Matrix& a, int m) {
  require_square(a, "tropical_power");
  if (m < 1) throw PreconditionError("tropical_power: exponent must be >= 1");
  Matrix result = a;
  for (int k = 1; k < m; ++k) result = detail::minplus_product(result, a);
  return result;
}

double min_mean_cycle(const Matrix& a) {
  require_square(a, "min_mean_cycle");
  const std::size_t n = a.rows();
  // walk[k][v]: cheapest walk of exactly k edges ending at v, started anywhere.
  Matrix walk(n + 1, n, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t v = 0; v < n; ++v) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t u = 0; u < n; ++u) best = std::min(best, walk(k - 1, u) + a(u, v));
      walk(k, v) = best;
    }
  }
  double result = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < n; ++v) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
      worst = std::max(worst, (walk(n, v) - walk(k, v)) / static_cast<double>(n - k));
    result = std::min(result, worst);
  }
  return result;
}

NormalizedKernel normalize(const CostKernel& a) {
  const double l = min_mean_cycle(a.costs());
  return {a.shifted(l), l};
}

Matrix shortest_walk_closure(const Matrix& a, const Tolerances& tol) {
  require_square(a, "shortest_walk_closure");
  const double l = min_mean_cycle(a);
  if (l < -tol.num)
    throw PreconditionError("shortest_walk_closure: negative cycle mean " + std::to_string(l) +
                            "; normalize the kernel first");
  // Floyd-Warshall without zeroing the diagonal: entries become the cheapest
  // nonempty walks, and the diagonal the cheapest cycle through each point.
  const std::size_t n = a.rows();
  Matrix d = a;
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<double> via(d.row(k).begin(), d.row(k).end());
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d(i, k);
      double* row = d.row(i).data();
      for (std::size_t j = 0; j < n; ++j) {
        const double v = dik + via[j];
        row[j] = v < row[j] ? v : row[j];
      }
    }
  }
  return d;
}

}  // namespace tropikam
