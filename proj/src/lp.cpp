#include "tropikam/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tropikam::lp {

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

std::size_t LinearProgram::add_variable(double cost, bool free) {
  costs_.push_back(cost);
  free_.push_back(free);
  return costs_.size() - 1;
}

void LinearProgram::add_constraint(std::vector<Term> terms, Sense sense, double rhs) {
  for (const auto& [var, coeff] : terms)
    if (var >= costs_.size()) throw std::out_of_range("add_constraint: unknown variable");
  rows_.push_back({std::move(terms), sense, rhs});
}

namespace {

constexpr double kOptTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kZeroTol = 1e-12;
constexpr std::size_t kReinvertEvery = 64;
constexpr std::size_t kDegenerateBeforeRandom = 50;
constexpr double kPerturbation = 1e-7;
constexpr double kFeasTol = 1e-9;

struct Column {
  std::vector<std::pair<std::size_t, double>> entries;  // (row, value)
  double cost = 0.0;
  bool artificial = false;
};

// Standard form min c.x, Ax = b, x >= 0, b >= 0, with an explicit dense
// basis inverse.
class Simplex {
 public:
  Simplex(std::vector<Column> columns, std::vector<double> rhs,
          std::vector<std::size_t> initial_basis, unsigned long long seed)
      : cols_(std::move(columns)),
        b_(std::move(rhs)),
        b0_(b_),
        m_(b_.size()),
        basis_(std::move(initial_basis)),
        pos_(cols_.size(), npos),
        rng_(seed) {
    for (std::size_t r = 0; r < m_; ++r) pos_[basis_[r]] = r;
    order_.resize(cols_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (seed != 0) std::shuffle(order_.begin(), order_.end(), rng_);
    reinvert();
  }

  // Runs to optimality, unboundedness, or the shared iteration cap.
  Status run(const std::vector<double>& cost, bool allow_artificial, std::size_t& iterations) {
    const std::size_t cap = 50 * (m_ + cols_.size()) + 1000;
    std::size_t degenerate = 0;
    std::vector<double> y(m_), u(m_);
    for (std::size_t it = 0;; ++it) {
      if (iterations >= cap) return Status::iteration_limit;
      if (it > 0 && it % kReinvertEvery == 0) reinvert();
      duals(cost, y);

      // After a run of degenerate pivots, pick a random improving column and
      // break ratio ties at random; this cannot cycle with probability one.
      const bool randomized = degenerate >= kDegenerateBeforeRandom;
      std::size_t entering = npos;
      double best = -kOptTol;
      std::size_t improving = 0;
      for (std::size_t j : order_) {
        if (!eligible(j, allow_artificial)) continue;
        const double d = reduced_cost(j, cost, y);
        if (d >= -kOptTol) continue;
        if (randomized) {
          // Reservoir sampling over the improving columns.
          if (std::uniform_int_distribution<std::size_t>(0, improving++)(rng_) == 0) entering = j;
        } else if (d < best) {
          best = d;
          entering = j;
        }
      }
      if (entering == npos) return Status::optimal;

      column_in_basis(entering, u);
      std::size_t leave = npos;
      double ratio = std::numeric_limits<double>::infinity();
      std::size_t ties = 0;
      for (std::size_t r = 0; r < m_; ++r) {
        if (u[r] <= kPivotTol) continue;
        const double t = std::max(x_[r], 0.0) / u[r];
        if (t < ratio - kZeroTol) {
          ratio = t;
          leave = r;
          ties = 1;
        } else if (t <= ratio + kZeroTol) {
          const bool take = randomized
                                ? std::uniform_int_distribution<std::size_t>(0, ties)(rng_) == 0
                                : u[r] > u[leave];
          ++ties;
          if (take) ratio = std::min(ratio, t), leave = r;
        }
      }
      if (leave == npos) return Status::unbounded;

      degenerate = ratio <= kZeroTol ? degenerate + 1 : 0;
      pivot(leave, entering, u);
      ++iterations;
    }
  }

  // Shifts every basic value up by a small random amount (b moves to
  // b + B delta), so that primal pivots no longer stall on zero steps.
  void perturb() {
    std::uniform_real_distribution<double> jitter(1.0, 2.0);
    double scale = 1.0;
    for (double v : b0_) scale = std::max(scale, std::abs(v));
    for (std::size_t r = 0; r < m_; ++r) {
      const double delta = kPerturbation * scale * jitter(rng_);
      for (const auto& [row, v] : cols_[basis_[r]].entries) b_[row] += v * delta;
    }
    reinvert();
  }

  // Restores the original right-hand side. The basis keeps its reduced costs,
  // so any basic value that went negative is repaired by dual simplex pivots.
  Status unperturb(const std::vector<double>& cost, bool allow_artificial,
                   std::size_t& iterations) {
    b_ = b0_;
    reinvert();
    const std::size_t cap = 50 * (m_ + cols_.size()) + 1000;
    std::vector<double> y(m_), u(m_);
    for (std::size_t it = 0;; ++it) {
      if (iterations >= cap) return Status::iteration_limit;
      if (it > 0 && it % kReinvertEvery == 0) reinvert();
      std::size_t leave = npos;
      double worst = -kFeasTol;
      for (std::size_t r = 0; r < m_; ++r)
        if (x_[r] < worst) worst = x_[r], leave = r;
      if (leave == npos) {
        for (double& v : x_) v = std::max(v, 0.0);
        return Status::optimal;
      }
      duals(cost, y);
      const double* brow = &binv_[leave * m_];
      std::size_t entering = npos;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t j : order_) {
        if (!eligible(j, allow_artificial)) continue;
        double alpha = 0.0;
        for (const auto& [row, v] : cols_[j].entries) alpha += brow[row] * v;
        if (alpha >= -kPivotTol) continue;
        const double t = std::max(reduced_cost(j, cost, y), 0.0) / -alpha;
        if (t < ratio) ratio = t, entering = j;
      }
      if (entering == npos) return Status::infeasible;
      column_in_basis(entering, u);
      pivot(leave, entering, u);
      ++iterations;
    }
  }

  // Pivots basic artificial columns out where a structural column can replace
  // them. Artificials left behind sit on redundant rows.
  void drive_out_artificials() {
    std::vector<double> u(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (!cols_[basis_[r]].artificial) continue;
      std::size_t best_j = npos;
      double best_alpha = 1e-7;
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (cols_[j].artificial || pos_[j] != npos) continue;
        double alpha = 0.0;
        for (const auto& [row, v] : cols_[j].entries) alpha += inverse(r, row) * v;
        if (std::abs(alpha) > best_alpha) best_alpha = std::abs(alpha), best_j = j;
      }
      if (best_j == npos) continue;
      column_in_basis(best_j, u);
      pivot(r, best_j, u);
      for (double& v : x_)
        if (v < 0.0 && v > -1e-9) v = 0.0;
    }
  }

  double objective(const std::vector<double>& cost) const {
    double z = 0.0;
    for (std::size_t r = 0; r < m_; ++r) z += cost[basis_[r]] * x_[r];
    return z;
  }

  std::vector<double> primal() const {
    std::vector<double> x(cols_.size(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) x[basis_[r]] = std::max(0.0, x_[r]);
    return x;
  }

  std::vector<double> dual_values(const std::vector<double>& cost) const {
    std::vector<double> y(m_);
    duals(cost, y);
    return y;
  }

  void refresh() { reinvert(); }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  double& inverse(std::size_t i, std::size_t j) { return binv_[i * m_ + j]; }
  double inverse(std::size_t i, std::size_t j) const { return binv_[i * m_ + j]; }

  bool eligible(std::size_t j, bool allow_artificial) const {
    return pos_[j] == npos && (allow_artificial || !cols_[j].artificial);
  }

  void duals(const std::vector<double>& cost, std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &binv_[r * m_];
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * row[k];
    }
  }

  double reduced_cost(std::size_t j, const std::vector<double>& cost,
                      const std::vector<double>& y) const {
    double d = cost[j];
    for (const auto& [row, v] : cols_[j].entries) d -= y[row] * v;
    return d;
  }

  void column_in_basis(std::size_t j, std::vector<double>& u) const {
    std::fill(u.begin(), u.end(), 0.0);
    for (const auto& [row, v] : cols_[j].entries)
      for (std::size_t i = 0; i < m_; ++i) u[i] += inverse(i, row) * v;
  }

  void pivot(std::size_t leave, std::size_t entering, const std::vector<double>& u) {
    const double piv = u[leave];
    const double theta = x_[leave] / piv;
    for (std::size_t i = 0; i < m_; ++i)
      if (i != leave) x_[i] -= theta * u[i];
    x_[leave] = theta;
    for (double& v : x_)
      if (v < 0.0 && v > -kZeroTol) v = 0.0;

    double* prow = &binv_[leave * m_];
    for (std::size_t k = 0; k < m_; ++k) prow[k] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave || u[i] == 0.0) continue;
      const double f = u[i];
      double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    pos_[basis_[leave]] = npos;
    basis_[leave] = entering;
    pos_[entering] = leave;
  }

  // Gauss-Jordan inversion of the current basis; recomputes x_B.
  void reinvert() {
    std::vector<double> a(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r)
      for (const auto& [row, v] : cols_[basis_[r]].entries) a[row * m_ + r] = v;
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inverse(i, i) = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m_; ++r)
        if (std::abs(a[r * m_ + c]) > std::abs(a[p * m_ + c])) p = r;
      if (std::abs(a[p * m_ + c]) < 1e-14) throw std::runtime_error("simplex: singular basis");
      if (p != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(a[p * m_ + k], a[c * m_ + k]);
          std::swap(binv_[p * m_ + k], binv_[c * m_ + k]);
        }
      }
      const double d = a[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) a[c * m_ + k] /= d, binv_[c * m_ + k] /= d;
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = a[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          a[r * m_ + k] -= f * a[c * m_ + k];
          binv_[r * m_ + k] -= f * binv_[c * m_ + k];
        }
      }
    }
    x_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += inverse(i, k) * b_[k];
      x_[i] = (s < 0.0 && s > -1e-9) ? 0.0 : s;
    }
  }

  std::vector<Column> cols_;
  std::vector<double> b_;
  std::vector<double> b0_;  // unperturbed right-hand side
  std::size_t m_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> order_;
  std::mt19937_64 rng_;
  std::vector<double> binv_;
  std::vector<double> x_;
};

}  // namespace

Solution LinearProgram::minimize(unsigned long long pricing_seed) const {
  const std::size_t m = rows_.size();
  std::vector<Column> cols;
  std::vector<std::size_t> var_pos(costs_.size()), var_neg(costs_.size(), SIZE_MAX);
  for (std::size_t v = 0; v < costs_.size(); ++v) {
    var_pos[v] = cols.size();
    cols.push_back({{}, costs_[v], false});
    if (free_[v]) {
      var_neg[v] = cols.size();
      cols.push_back({{}, -costs_[v], false});
    }
  }

  std::vector<double> rhs(m);
  std::vector<double> row_sign(m);
  std::vector<std::size_t> basis(m, SIZE_MAX);
  for (std::size_t r = 0; r < m; ++r) {
    const Row& row = rows_[r];
    const double s = row.rhs < 0.0 ? -1.0 : 1.0;
    row_sign[r] = s;
    rhs[r] = s * row.rhs;
    for (const auto& [v, coeff] : row.terms) {
      if (coeff == 0.0) continue;
      cols[var_pos[v]].entries.emplace_back(r, s * coeff);
      if (var_neg[v] != SIZE_MAX) cols[var_neg[v]].entries.emplace_back(r, -s * coeff);
    }
    if (row.sense != Sense::equal) {
      const double slack = (row.sense == Sense::less_equal ? 1.0 : -1.0) * s;
      if (slack > 0.0) basis[r] = cols.size();
      cols.push_back({{{r, slack}}, 0.0, false});
    }
  }
  // Duplicate terms on one variable within a row are summed.
  for (auto& c : cols) {
    std::sort(c.entries.begin(), c.entries.end());
    std::vector<std::pair<std::size_t, double>> merged;
    for (const auto& e : c.entries) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(e);
    }
    c.entries = std::move(merged);
  }

  bool any_artificial = false;
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] != SIZE_MAX) continue;
    basis[r] = cols.size();
    cols.push_back({{{r, 1.0}}, 0.0, true});
    any_artificial = true;
  }

  std::vector<double> phase1(cols.size(), 0.0), phase2(cols.size(), 0.0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    phase1[j] = cols[j].artificial ? 1.0 : 0.0;
    phase2[j] = cols[j].artificial ? 0.0 : cols[j].cost;
  }

  Solution sol;
  if (m == 0) {
    // No constraints: optimal at zero unless some direction improves forever.
    for (std::size_t v = 0; v < costs_.size(); ++v)
      if (costs_[v] < 0.0 || (free_[v] && costs_[v] != 0.0)) {
        sol.status = Status::unbounded;
        return sol;
      }
    sol.status = Status::optimal;
    sol.x.assign(costs_.size(), 0.0);
    return sol;
  }

  double scale = 1.0;
  for (double v : rhs) scale = std::max(scale, std::abs(v));

  Simplex simplex(cols, rhs, basis, pricing_seed);
  // Each phase solves a perturbed problem, then repairs the exact one.
  const auto solve_phase = [&](const std::vector<double>& cost, bool artificial) {
    simplex.perturb();
    const Status s = simplex.run(cost, artificial, sol.iterations);
    if (s != Status::optimal) return s;
    return simplex.unperturb(cost, artificial, sol.iterations);
  };
  if (any_artificial) {
    const Status s1 = solve_phase(phase1, true);
    if (s1 == Status::iteration_limit) {
      sol.status = s1;
      return sol;
    }
    simplex.refresh();
    if (simplex.objective(phase1) > 1e-8 * scale) {
      sol.status = Status::infeasible;
      return sol;
    }
    simplex.drive_out_artificials();
    simplex.refresh();
  }
  sol.status = solve_phase(phase2, false);
  if (sol.status != Status::optimal) return sol;
  simplex.refresh();

  const std::vector<double> x = simplex.primal();
  sol.x.assign(costs_.size(), 0.0);
  for (std::size_t v = 0; v < costs_.size(); ++v) {
    sol.x[v] = x[var_pos[v]];
    if (var_neg[v] != SIZE_MAX) sol.x[v] -= x[var_neg[v]];
  }
  sol.objective = 0.0;
  for (std::size_t v = 0; v < costs_.size(); ++v) sol.objective += costs_[v] * sol.x[v];
  const std::vector<double> y = simplex.dual_values(phase2);
  sol.duals.resize(m);
  for (std::size_t r = 0; r < m; ++r) sol.duals[r] = row_sign[r] * y[r];
  return sol;
}

}  // namespace tropikam::lp
