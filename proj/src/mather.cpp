#include "tropikam/mather.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tropikam/lp.hpp"

namespace tropikam {

StationaryCoupling StationaryCoupling::from_mass(Matrix eta, const Tolerances& tol) {
  if (!eta.square() || eta.rows() == 0)
    throw DimensionError("StationaryCoupling: mass matrix must be square and non-empty");
  const Coupling read = Coupling::from_mass(eta);
  for (double v : eta.values())
    if (v < -tol.mass) throw PreconditionError("StationaryCoupling: negative mass");
  if (std::abs(eta.sum() - 1.0) > tol.num)
    throw PreconditionError("StationaryCoupling: total mass is not 1");
  const double gap = max_abs_diff(read.marginal0.weights, read.marginal1.weights);
  if (gap > tol.num)
    throw PreconditionError("StationaryCoupling: marginals differ by " + std::to_string(gap));
  return {std::move(eta), read.marginal0};
}

double StationaryCoupling::cost(const Matrix& a) const {
  return Coupling{eta, marginal, marginal}.cost(a);
}

MatherSolution solve_stationary_lp(const Matrix& a, std::uint64_t pricing_seed) {
  if (!a.square() || a.rows() == 0) throw DimensionError("solve_stationary_lp: bad kernel shape");
  const std::size_t n = a.rows();
  lp::LinearProgram prog;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) prog.add_variable(a(x, y));
  // Outflow equals inflow at every point but the last (implied), mass 1.
  for (std::size_t x = 0; x + 1 < n; ++x) {
    std::vector<lp::LinearProgram::Term> t;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      t.emplace_back(x * n + y, 1.0);
      t.emplace_back(y * n + x, -1.0);
    }
    prog.add_constraint(std::move(t), lp::Sense::equal, 0.0);
  }
  std::vector<lp::LinearProgram::Term> mass;
  for (std::size_t v = 0; v < n * n; ++v) mass.emplace_back(v, 1.0);
  prog.add_constraint(std::move(mass), lp::Sense::equal, 1.0);

  const lp::Solution sol = prog.minimize(pricing_seed);
  if (!sol.optimal())
    throw InconsistencyError("solve_stationary_lp: linear program ended " +
                             lp::to_string(sol.status));
  Matrix eta(n, n, 0.0);
  for (std::size_t v = 0; v < n * n; ++v) eta.values()[v] = sol.x[v];
  // Vertices are cycle couplings; the tolerance only absorbs pivoting error.
  Tolerances loose;
  loose.num = 1e-8;
  MatherSolution out{StationaryCoupling::from_mass(std::move(eta), loose), 0.0};
  out.value = out.coupling.cost(a);
  return out;
}

MatherSolution solve_mather(const CostKernel& normalized, const Tolerances& tol,
                            std::uint64_t pricing_seed) {
  MatherSolution sol = solve_stationary_lp(normalized.costs(), pricing_seed);
  if (std::abs(sol.value) > tol.dual)
    throw InconsistencyError("solve_mather: optimal value " + std::to_string(sol.value) +
                             " is not 0; the kernel is not normalized");
  return sol;
}

Report verify_minimizer_characterization(const CostKernel& normalized, const BarrierData& bd,
                                         const StationaryCoupling& eta, const Tolerances& tol) {
  const Matrix& a = normalized.costs();
  const std::size_t n = a.rows();
  if (eta.eta.rows() != n || bd.size() != n)
    throw DimensionError("verify_minimizer_characterization: size mismatch");

  const double value = eta.cost(a);
  double slack = 0.0;
  double identity = 0.0;  // sum of (A(x, y) + c(y, x)) eta(x, y)
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double m = eta.eta(x, y);
      if (m <= tol.mass) continue;
      const double defect = a(x, y) + bd(y, x);
      slack = std::max(slack, std::abs(defect));
      identity += m * defect;
    }
  const bool minimizing = std::abs(value) <= tol.dual;
  const bool on_d = slack <= tol.aubry;

  Report r;
  r.add("objective", std::abs(value), tol.dual, minimizing ? "minimizer" : "non-minimizer");
  r.add("support_in_D", slack, tol.aubry, on_d ? "supported on D" : "mass off D");
  // On D the objective is the integral of -c(y, x), so the two must agree.
  if (on_d) r.add("barrier_identity", std::abs(identity), tol.dual);
  r.add("characterization", minimizing == on_d ? 0.0 : 1.0, 0.0,
        minimizing == on_d ? "consistent" : "minimizing iff supported on D is violated");
  return r;
}

StationaryCoupling cycle_coupling(std::size_t n, std::span<const std::size_t> cycle) {
  if (cycle.empty()) throw PreconditionError("cycle_coupling: empty cycle");
  Matrix eta(n, n, 0.0);
  const double w = 1.0 / static_cast<double>(cycle.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::size_t x = cycle[i];
    const std::size_t y = cycle[(i + 1) % cycle.size()];
    if (x >= n || y >= n) throw DimensionError("cycle_coupling: point index out of range");
    eta(x, y) += w;
  }
  return StationaryCoupling::from_mass(std::move(eta));
}

std::vector<std::size_t> random_d_cycle(const BarrierData& bd, std::size_t start,
                                        std::mt19937_64& rng) {
  const std::size_t n = bd.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& [x, y] : bd.d_edges) succ[x].push_back(y);
  std::vector<std::size_t> path{start};
  std::vector<std::size_t> seen_at(n, n);
  seen_at[start] = 0;
  for (;;) {
    const auto& next = succ[path.back()];
    if (next.empty())
      throw InconsistencyError("random_d_cycle: point " + std::to_string(path.back()) +
                               " has no D-successor");
    const std::size_t y =
        next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
    if (seen_at[y] != n)
      return {path.begin() + static_cast<std::ptrdiff_t>(seen_at[y]), path.end()};
    seen_at[y] = path.size();
    path.push_back(y);
  }
}

EdgeSet contact_edges(const CostKernel& normalized, const BarrierData& bd,
                      const Tolerances& tol) {
  const std::size_t n = bd.size();
  std::vector<Potential> family;
  for (std::size_t z = 0; z < n; ++z) family.push_back(barrier_row(bd, z));
  for (std::size_t a : bd.aubry) {
    std::vector<double> from(bd.aubry.size()), to(bd.aubry.size());
    for (std::size_t k = 0; k < bd.aubry.size(); ++k) {
      from[k] = bd(a, bd.aubry[k]);
      to[k] = -bd(bd.aubry[k], a);
    }
    for (const auto* seed : {&from, &to}) {
      KamPair p = pair_from_lipschitz(bd, *seed, tol);
      family.push_back(std::move(p.phi0));
      family.push_back(std::move(p.phi1));
    }
  }
  EdgeSet edges;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double axy = normalized(x, y);
      const bool tight = std::all_of(family.begin(), family.end(), [&](const Potential& phi) {
        return std::abs(phi[y] - phi[x] - axy) <= tol.aubry;
      });
      if (tight) edges.emplace_back(x, y);
    }
  return edges;
}

EdgeSet d_infinity_filter(const EdgeSet& edges) {
  std::set<Edge> live(edges.begin(), edges.end());
  for (bool changed = true; changed;) {
    changed = false;
    std::set<std::size_t> has_in, has_out;
    for (const auto& [x, y] : live) {
      has_out.insert(x);
      has_in.insert(y);
    }
    for (auto it = live.begin(); it != live.end();) {
      if (!has_in.count(it->first) || !has_out.count(it->second)) {
        it = live.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return {live.begin(), live.end()};
}

}  // namespace tropikam
