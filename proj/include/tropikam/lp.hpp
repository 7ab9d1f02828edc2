#pragma once

// Small dense-basis revised simplex for the transport, dual and stationary
// coupling linear programs.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace tropikam::lp {

enum class Sense { less_equal, equal, greater_equal };

enum class Status { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(Status s);

struct Solution {
  Status status = Status::infeasible;
  double objective = 0.0;
  std::vector<double> x;      // one value per variable, in insertion order
  std::vector<double> duals;  // one multiplier per constraint
  std::size_t iterations = 0;

  bool optimal() const noexcept { return status == Status::optimal; }
};

class LinearProgram {
 public:
  using Term = std::pair<std::size_t, double>;

  /// Returns the variable index. Non-free variables are bounded below by 0.
  std::size_t add_variable(double cost, bool free = false);
  void add_constraint(std::vector<Term> terms, Sense sense, double rhs);

  std::size_t variable_count() const noexcept { return costs_.size(); }
  std::size_t constraint_count() const noexcept { return rows_.size(); }

  /// Minimizes. `pricing_seed` permutes the order in which columns are priced,
  /// which changes which optimal vertex is returned on degenerate problems.
  Solution minimize(unsigned long long pricing_seed = 0) const;

 private:
  struct Row {
    std::vector<Term> terms;
    Sense sense;
    double rhs;
  };
  std::vector<double> costs_;
  std::vector<bool> free_;
  std::vector<Row> rows_;
};

}  // namespace tropikam::lp
