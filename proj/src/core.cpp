#include "tropikam/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tropikam {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(line == 0 ? what
                      : what + " (line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

namespace {
Tolerances& mutable_defaults() {
  static Tolerances tol;
  return tol;
}
}  // namespace

const Tolerances& default_tolerances() { return mutable_defaults(); }

void set_default_tolerances(const Tolerances& tol) { mutable_defaults() = tol; }

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  m.rows_ = rows.size();
  m.cols_ = rows.empty() ? 0 : rows.front().size();
  m.data_.reserve(m.rows_ * m.cols_);
  for (const auto& r : rows) {
    if (r.size() != m.cols_) throw DimensionError("ragged matrix rows");
    m.data_.insert(m.data_.end(), r.begin(), r.end());
  }
  return m;
}

double Matrix::min_coeff() const {
  if (data_.empty()) throw DimensionError("min_coeff of empty matrix");
  return *std::min_element(data_.begin(), data_.end());
}

double Matrix::max_coeff() const {
  if (data_.empty()) throw DimensionError("max_coeff of empty matrix");
  return *std::max_element(data_.begin(), data_.end());
}

double Matrix::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(double shift) {
  for (double& v : data_) v += shift;
  return *this;
}

Matrix& Matrix::operator-=(double shift) {
  for (double& v : data_) v -= shift;
  return *this;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  return max_abs_diff(a.values(), b.values());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("max_abs_diff: length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

Report& Report::add(std::string name, double residual, double tolerance, std::string detail) {
  // NaN residuals must fail, so store them as +inf.
  if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
  checks_.push_back({std::move(name), residual, tolerance, std::move(detail)});
  return *this;
}

Report& Report::append(const Report& other, const std::string& prefix) {
  for (const auto& c : other.checks_)
    checks_.push_back({prefix + c.name, c.residual, c.tolerance, c.detail});
  return *this;
}

bool Report::passed() const noexcept {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed(); });
}

const Check& Report::check(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return c;
  throw std::out_of_range("no check named '" + name + "'");
}

double Report::residual(const std::string& name) const { return check(name).residual; }

}  // namespace tropikam
