#pragma once

// Shared value types: dense matrices, numeric tolerances, error types and
// residual-carrying check reports.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropikam {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input violates the documented precondition of an operation.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A computed object contradicts a property that the theory guarantees;
/// usually a normalization or tolerance problem upstream.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Malformed cost file. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// ---------------------------------------------------------------------------
// Tolerances

struct Tolerances {
  double num = 1e-9;     // "equals zero" for accumulated sums
  double aubry = 1e-7;   // Aubry-set and D membership
  double dual = 1e-7;    // LP values and duality gaps
  double mass = 1e-12;   // support threshold for probability mass
};

/// Process-wide defaults used when a caller does not pass tolerances.
/// Set once at start-up; not synchronized.
const Tolerances& default_tolerances();
void set_default_tolerances(const Tolerances& tol);

// ---------------------------------------------------------------------------
// Dense row-major matrix of doubles.

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  double min_coeff() const;
  double max_coeff() const;
  double sum() const;
  bool all_finite() const;

  Matrix transposed() const;
  Matrix& operator+=(double shift);
  Matrix& operator-=(double shift);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// sup-norm distance; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Largest absolute difference between two equally sized vectors.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

using Edge = std::pair<std::size_t, std::size_t>;
using EdgeSet = std::vector<Edge>;  // kept sorted, no duplicates

// ---------------------------------------------------------------------------
// Reports

/// One residual measured against one tolerance. Pass/fail is derived, never
/// stored, so a report cannot disagree with its own numbers.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;

  bool passed() const noexcept { return residual <= tolerance; }
};

class Report {
 public:
  Report& add(std::string name, double residual, double tolerance,
              std::string detail = {});
  Report& append(const Report& other, const std::string& prefix = {});

  const std::vector<Check>& checks() const noexcept { return checks_; }
  bool passed() const noexcept;
  /// Residual of the named check; throws std::out_of_range if absent.
  double residual(const std::string& name) const;
  const Check& check(const std::string& name) const;

 private:
  std::vector<Check> checks_;
};

}  // namespace tropikam
