#include "tropikam/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "tropikam/lp.hpp"

namespace tropikam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> positive_support(const Measure& mu) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) s.push_back(i);
  return s;
}

void require_lp_optimal(const lp::Solution& sol, const char* what) {
  if (!sol.optimal())
    throw InconsistencyError(std::string(what) + ": linear program ended " +
                             lp::to_string(sol.status));
}

}  // namespace

// ---------------------------------------------------------------------------
// Measure / Coupling

Measure Measure::dirac(std::size_t n, std::size_t at) {
  if (at >= n) throw DimensionError("Measure::dirac: index out of range");
  Measure m(std::vector<double>(n, 0.0));
  m.weights[at] = 1.0;
  return m;
}

Measure Measure::uniform(std::size_t n) {
  if (n == 0) throw DimensionError("Measure::uniform: empty point set");
  return Measure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Measure Measure::random(std::size_t n, std::mt19937_64& rng, std::size_t max_support) {
  if (n == 0) throw DimensionError("Measure::random: empty point set");
  const std::size_t cap = max_support == 0 ? n : std::min(n, max_support);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  Measure m(std::vector<double>(n, 0.0));
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) total += m.weights[idx[i]] = w(rng);
  for (double& v : m.weights) v /= total;
  return m;
}

std::vector<std::size_t> Measure::support(double threshold) const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] > threshold) s.push_back(i);
  return s;
}

double Measure::integrate(const Potential& f) const {
  if (f.size() != weights.size()) throw DimensionError("Measure::integrate: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] != 0.0) s += weights[i] * f[i];
  return s;
}

void Measure::validate(const Tolerances& tol) const {
  if (weights.empty()) throw PreconditionError("measure has no points");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw PreconditionError("measure has a negative or non-finite weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tol.num)
    throw PreconditionError("measure mass is " + std::to_string(total) + ", expected 1");
}

Coupling Coupling::from_mass(Matrix eta) {
  std::vector<double> rows(eta.rows(), 0.0), cols(eta.cols(), 0.0);
  for (std::size_t i = 0; i < eta.rows(); ++i)
    for (std::size_t j = 0; j < eta.cols(); ++j) {
      rows[i] += eta(i, j);
      cols[j] += eta(i, j);
    }
  return {std::move(eta), Measure(std::move(rows)), Measure(std::move(cols))};
}

double Coupling::cost(const Matrix& c) const {
  if (c.rows() != eta.rows() || c.cols() != eta.cols())
    throw DimensionError("Coupling::cost: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < eta.rows(); ++i)
    for (std::size_t j = 0; j < eta.cols(); ++j)
      if (eta(i, j) != 0.0) s += eta(i, j) * c(i, j);
  return s;
}

void Coupling::validate(const Tolerances& tol) const {
  if (eta.rows() != marginal0.size() || eta.cols() != marginal1.size())
    throw DimensionError("Coupling: marginal sizes do not match the mass matrix");
  const Coupling read = from_mass(eta);
  for (double v : eta.values())
    if (v < -tol.mass) throw PreconditionError("Coupling: negative mass");
  if (max_abs_diff(read.marginal0.weights, marginal0.weights) > tol.num ||
      max_abs_diff(read.marginal1.weights, marginal1.weights) > tol.num)
    throw PreconditionError("Coupling: marginals do not match the mass matrix");
  if (std::abs(eta.sum() - 1.0) > tol.num) throw PreconditionError("Coupling: mass is not 1");
}

// ---------------------------------------------------------------------------
// Primal and dual problems

PrimalSolution solve_primal(const Matrix& cost, const Measure& mu0, const Measure& mu1,
                            const Tolerances& tol) {
  if (cost.rows() != mu0.size() || cost.cols() != mu1.size())
    throw DimensionError("solve_primal: cost is " + std::to_string(cost.rows()) + "x" +
                         std::to_string(cost.cols()) + " but measures have sizes " +
                         std::to_string(mu0.size()) + " and " + std::to_string(mu1.size()));
  mu0.validate(tol);
  mu1.validate(tol);
  const auto rows = positive_support(mu0);
  const auto cols = positive_support(mu1);

  lp::LinearProgram prog;
  std::vector<std::size_t> var(rows.size() * cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      var[i * cols.size() + j] = prog.add_variable(cost(rows[i], cols[j]));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<lp::LinearProgram::Term> t;
    for (std::size_t j = 0; j < cols.size(); ++j) t.emplace_back(var[i * cols.size() + j], 1.0);
    prog.add_constraint(std::move(t), lp::Sense::equal, mu0[rows[i]]);
  }
  // The last column constraint is implied by the others.
  for (std::size_t j = 0; j + 1 < cols.size(); ++j) {
    std::vector<lp::LinearProgram::Term> t;
    for (std::size_t i = 0; i < rows.size(); ++i) t.emplace_back(var[i * cols.size() + j], 1.0);
    prog.add_constraint(std::move(t), lp::Sense::equal, mu1[cols[j]]);
  }
  const lp::Solution sol = prog.minimize();
  require_lp_optimal(sol, "solve_primal");

  Matrix eta(mu0.size(), mu1.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      eta(rows[i], cols[j]) = sol.x[var[i * cols.size() + j]];
  PrimalSolution out{Coupling{std::move(eta), mu0, mu1}, 0.0};
  out.value = out.plan.cost(cost);
  return out;
}

DualSolution dual_value(const BarrierData& bd, const Measure& mu0, const Measure& mu1,
                        const Tolerances& tol) {
  const std::size_t n = bd.size();
  if (mu0.size() != n || mu1.size() != n) throw DimensionError("dual_value: size mismatch");
  mu0.validate(tol);
  mu1.validate(tol);
  const auto& aubry = bd.aubry;
  const auto src = positive_support(mu0);
  const auto dst = positive_support(mu1);

  // phi on the Aubry set, pinned to 0 at its first point; s_y stands for
  // phi1(y) and t_x for phi0(x).
  lp::LinearProgram prog;
  const std::size_t none = SIZE_MAX;
  std::vector<std::size_t> phi(aubry.size(), none);
  for (std::size_t k = 1; k < aubry.size(); ++k) phi[k] = prog.add_variable(0.0, true);
  std::vector<std::size_t> s(dst.size()), t(src.size());
  for (std::size_t j = 0; j < dst.size(); ++j) s[j] = prog.add_variable(-mu1[dst[j]], true);
  for (std::size_t i = 0; i < src.size(); ++i) t[i] = prog.add_variable(mu0[src[i]], true);

  auto with_phi = [&](std::vector<lp::LinearProgram::Term> terms, std::size_t k, double sign) {
    if (phi[k] != none) terms.emplace_back(phi[k], sign);
    return terms;
  };
  for (std::size_t k = 0; k < aubry.size(); ++k) {
    for (std::size_t j = 0; j < dst.size(); ++j)
      prog.add_constraint(with_phi({{s[j], 1.0}}, k, -1.0), lp::Sense::less_equal,
                          bd(aubry[k], dst[j]));
    for (std::size_t i = 0; i < src.size(); ++i)
      prog.add_constraint(with_phi({{t[i], -1.0}}, k, 1.0), lp::Sense::less_equal,
                          bd(src[i], aubry[k]));
    for (std::size_t q = 0; q < aubry.size(); ++q) {
      if (q == k) continue;
      auto terms = with_phi({}, q, 1.0);
      terms = with_phi(std::move(terms), k, -1.0);
      if (terms.empty()) continue;
      prog.add_constraint(std::move(terms), lp::Sense::less_equal, bd(aubry[k], aubry[q]));
    }
  }
  const lp::Solution sol = prog.minimize();
  require_lp_optimal(sol, "dual_value");

  std::vector<double> phi_values(aubry.size(), 0.0);
  for (std::size_t k = 1; k < aubry.size(); ++k) phi_values[k] = sol.x[phi[k]];
  DualSolution out{pair_from_lipschitz(bd, phi_values, tol), 0.0};
  out.value = mu1.integrate(out.pair.phi1) - mu0.integrate(out.pair.phi0);
  return out;
}

double kantorovich_rubinstein_value(const Matrix& cost, const Measure& mu0, const Measure& mu1) {
  const std::size_t n = cost.rows();
  if (!cost.square() || mu0.size() != n || mu1.size() != n)
    throw DimensionError("kantorovich_rubinstein_value: size mismatch");
  lp::LinearProgram prog;
  std::vector<std::size_t> phi(n, SIZE_MAX);
  for (std::size_t x = 1; x < n; ++x) phi[x] = prog.add_variable(-(mu1[x] - mu0[x]), true);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      std::vector<lp::LinearProgram::Term> terms;
      if (phi[y] != SIZE_MAX) terms.emplace_back(phi[y], 1.0);
      if (phi[x] != SIZE_MAX) terms.emplace_back(phi[x], -1.0);
      prog.add_constraint(std::move(terms), lp::Sense::less_equal, cost(x, y));
    }
  const lp::Solution sol = prog.minimize();
  require_lp_optimal(sol, "kantorovich_rubinstein_value");
  return -sol.objective;
}

Report check_duality(double primal_value, double dual_value, const Tolerances& tol) {
  Report r;
  r.add("duality_gap", std::abs(primal_value - dual_value), tol.dual);
  return r;
}

Report check_support(const Coupling& plan, const KamPair& pair, const BarrierData& bd,
                     const Tolerances& tol) {
  double worst = 0.0;
  std::string where;
  for (std::size_t x = 0; x < plan.eta.rows(); ++x)
    for (std::size_t y = 0; y < plan.eta.cols(); ++y) {
      if (plan.eta(x, y) <= tol.mass) continue;
      const double e = std::abs(pair.phi1[y] - pair.phi0[x] - bd(x, y));
      if (e > worst) {
        worst = e;
        where = "(" + std::to_string(x) + ", " + std::to_string(y) + ")";
      }
    }
  Report r;
  r.add("support_on_contact_set", worst, tol.num, where);
  return r;
}

DualSolution var_char_pair(const BarrierData& bd, std::size_t x, std::size_t y) {
  if (x >= bd.size() || y >= bd.size()) throw DimensionError("var_char_pair: index out of range");
  Potential phi1 = barrier_row(bd, x);
  Potential phi0 = completion_from_aubry(bd, phi1);
  const double value = phi1[y] - phi0[x];
  return {{std::move(phi0), std::move(phi1)}, value};
}

Measure converse_measure(const BarrierData& bd, const KamPair& pair, const Measure& mu0,
                         const Tolerances& tol) {
  const std::size_t n = bd.size();
  if (mu0.size() != n) throw DimensionError("converse_measure: size mismatch");
  mu0.validate(tol);
  Measure mu1(std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    if (mu0[x] <= 0.0) continue;
    std::size_t target = n;
    for (std::size_t y = 0; y < n && target == n; ++y)
      if (std::abs(pair.phi1[y] - pair.phi0[x] - bd(x, y)) <= tol.num) target = y;
    if (target == n)
      throw InconsistencyError("converse_measure: no point y attains phi1(y) = phi0(" +
                               std::to_string(x) + ") + c(" + std::to_string(x) + ", y)");
    mu1.weights[target] += mu0[x];
  }
  return mu1;
}

Factorization factor_through_aubry(const BarrierData& bd, const Measure& mu0, const Measure& mu1,
                                   const Tolerances& tol) {
  const Matrix& c = bd.barrier;
  const PrimalSolution direct = solve_primal(c, mu0, mu1, tol);
  const std::size_t n = bd.size();
  Measure via(std::vector<double>(n, 0.0));
  double routing_slack = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double mass = direct.plan.eta(x, y);
      if (mass <= 0.0) continue;
      // Lowest-index Aubry point attaining the factorization; the arg min if
      // rounding leaves none within tolerance.
      std::size_t chosen = bd.aubry.front();
      double best = kInf;
      for (std::size_t s : bd.aubry) {
        const double e = c(x, s) + c(s, y) - c(x, y);
        if (e <= tol.num) {
          chosen = s;
          best = e;
          break;
        }
        if (e < best) best = e, chosen = s;
      }
      if (mass > tol.mass) routing_slack = std::max(routing_slack, std::abs(best));
      via.weights[chosen] += mass;
    }
  const double total = std::accumulate(via.weights.begin(), via.weights.end(), 0.0);
  for (double& w : via.weights) w /= total;

  Factorization f;
  f.direct = direct.value;
  f.first = solve_primal(c, mu0, via, tol).value;
  f.second = solve_primal(c, via, mu1, tol).value;
  double off_aubry = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    if (!bd.in_aubry(x)) off_aubry += via[x];
  f.report.add("routing", routing_slack, tol.num);
  f.report.add("via_on_aubry", off_aubry, tol.mass);
  f.report.add("additive_identity", std::abs(f.direct - f.first - f.second), tol.dual);
  f.via = std::move(via);
  return f;
}

Coupling glue_couplings(const Coupling& eta0, const Coupling& eta1, const Tolerances& tol) {
  if (eta0.eta.cols() != eta1.eta.rows())
    throw DimensionError("glue_couplings: middle spaces differ in size");
  const Coupling first = Coupling::from_mass(eta0.eta);
  const Coupling second = Coupling::from_mass(eta1.eta);
  const double mismatch = max_abs_diff(first.marginal1.weights, second.marginal0.weights);
  if (mismatch > tol.num)
    throw PreconditionError("glue_couplings: middle marginals differ by " +
                            std::to_string(mismatch));
  const std::size_t mid = eta0.eta.cols();
  Matrix eta(eta0.eta.rows(), eta1.eta.cols(), 0.0);
  for (std::size_t z = 0; z < mid; ++z) {
    const double mu = first.marginal1[z];
    if (mu <= tol.mass) continue;
    for (std::size_t x = 0; x < eta.rows(); ++x) {
      const double a = eta0.eta(x, z);
      if (a == 0.0) continue;
      for (std::size_t y = 0; y < eta.cols(); ++y) eta(x, y) += a * eta1.eta(z, y) / mu;
    }
  }
  return Coupling::from_mass(std::move(eta));
}

}  // namespace tropikam
