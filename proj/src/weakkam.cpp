#include "tropikam/weakkam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tropikam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_size(std::size_t expected, std::size_t got, const char* op) {
  if (expected != got)
    throw DimensionError(std::string(op) + ": potential has " + std::to_string(got) +
                         " values for " + std::to_string(expected) + " points");
}

}  // namespace

Potential Potential::shifted(double t) const {
  Potential out = *this;
  for (double& v : out.values) v += t;
  return out;
}

Potential lax_oleinik_minus(const CostKernel& a, const Potential& u) {
  const std::size_t n = a.size();
  require_size(n, u.size(), "lax_oleinik_minus");
  Potential out(std::vector<double>(n, kInf));
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) out[x] = std::min(out[x], u[y] + a(y, x));
  return out;
}

Potential lax_oleinik_plus(const CostKernel& a, const Potential& u) {
  const std::size_t n = a.size();
  require_size(n, u.size(), "lax_oleinik_plus");
  Potential out(std::vector<double>(n, -kInf));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) out[x] = std::max(out[x], u[y] - a(x, y));
  return out;
}

std::vector<Potential> lax_oleinik_orbit(const CostKernel& a, const Potential& u, int steps) {
  std::vector<Potential> orbit{u};
  for (int k = 0; k < steps; ++k) orbit.push_back(lax_oleinik_minus(a, orbit.back()));
  return orbit;
}

Potential barrier_row(const BarrierData& bd, std::size_t z) {
  auto row = bd.barrier.row(z);
  return Potential(std::vector<double>(row.begin(), row.end()));
}

LipschitzViolation lipschitz_violation(const Matrix& cost, const Potential& phi) {
  require_size(cost.rows(), phi.size(), "lipschitz_violation");
  LipschitzViolation worst{-kInf, 0, 0};
  for (std::size_t x = 0; x < cost.rows(); ++x)
    for (std::size_t y = 0; y < cost.cols(); ++y) {
      const double e = phi[y] - phi[x] - cost(x, y);
      if (e > worst.excess) worst = {e, x, y};
    }
  return worst;
}

KamPair pair_from_lipschitz(const BarrierData& bd, std::span<const double> phi_on_aubry,
                            const Tolerances& tol) {
  const auto& aubry = bd.aubry;
  if (phi_on_aubry.size() != aubry.size())
    throw DimensionError("pair_from_lipschitz: " + std::to_string(phi_on_aubry.size()) +
                         " values for an Aubry set of size " + std::to_string(aubry.size()));
  double worst = -kInf;
  std::size_t wa = 0, wb = 0;
  for (std::size_t i = 0; i < aubry.size(); ++i)
    for (std::size_t j = 0; j < aubry.size(); ++j) {
      const double e = phi_on_aubry[j] - phi_on_aubry[i] - bd(aubry[i], aubry[j]);
      if (e > worst) worst = e, wa = aubry[i], wb = aubry[j];
    }
  if (worst > tol.num) {
    std::ostringstream msg;
    msg << "pair_from_lipschitz: phi is not c-Lipschitz on the Aubry set; worst pair (" << wa
        << ", " << wb << ") exceeds c by " << worst;
    throw PreconditionError(msg.str());
  }

  const std::size_t n = bd.size();
  KamPair pair{Potential(std::vector<double>(n, -kInf)), Potential(std::vector<double>(n, kInf))};
  for (std::size_t k = 0; k < aubry.size(); ++k) {
    const std::size_t s = aubry[k];
    for (std::size_t x = 0; x < n; ++x) {
      pair.phi1[x] = std::min(pair.phi1[x], phi_on_aubry[k] + bd(s, x));
      pair.phi0[x] = std::max(pair.phi0[x], phi_on_aubry[k] - bd(x, s));
    }
  }
  return pair;
}

Potential completion_from_aubry(const BarrierData& bd, const Potential& phi1) {
  const std::size_t n = bd.size();
  require_size(n, phi1.size(), "completion_from_aubry");
  Potential phi0(std::vector<double>(n, -kInf));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t s : bd.aubry) phi0[x] = std::max(phi0[x], phi1[s] - bd(x, s));
  return phi0;
}

Potential completion_from_all_points(const BarrierData& bd, const Potential& phi1) {
  const std::size_t n = bd.size();
  require_size(n, phi1.size(), "completion_from_all_points");
  Potential phi0(std::vector<double>(n, -kInf));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) phi0[x] = std::max(phi0[x], phi1[y] - bd(x, y));
  return phi0;
}

KamPair complete_pair(const CostKernel& normalized, const BarrierData& bd,
                      const Potential& phi1, const Tolerances& tol) {
  const double residual = max_abs_diff(lax_oleinik_minus(normalized, phi1).values, phi1.values);
  if (residual > tol.num)
    throw PreconditionError("complete_pair: phi1 is not a T- fixed point (residual " +
                            std::to_string(residual) + ")");
  return {completion_from_aubry(bd, phi1), phi1};
}

Report is_admissible_pair(const BarrierData& bd, const KamPair& pair, const Tolerances& tol) {
  const std::size_t n = bd.size();
  require_size(n, pair.phi0.size(), "is_admissible_pair");
  require_size(n, pair.phi1.size(), "is_admissible_pair");
  double forward = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    double best = kInf;
    for (std::size_t x = 0; x < n; ++x) best = std::min(best, pair.phi0[x] + bd(x, y));
    forward = std::max(forward, std::abs(pair.phi1[y] - best));
  }
  double backward = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double best = -kInf;
    for (std::size_t y = 0; y < n; ++y) best = std::max(best, pair.phi1[y] - bd(x, y));
    backward = std::max(backward, std::abs(pair.phi0[x] - best));
  }
  Report r;
  r.add("phi1_is_min_convolution", forward, tol.num);
  r.add("phi0_is_max_convolution", backward, tol.num);
  return r;
}

Report check_theorem_pairs(const CostKernel& normalized, const BarrierData& bd,
                           const KamPair& pair, const Tolerances& tol) {
  const Report admissible = is_admissible_pair(bd, pair, tol);
  const double plus =
      max_abs_diff(lax_oleinik_plus(normalized, pair.phi0).values, pair.phi0.values);
  const double minus =
      max_abs_diff(lax_oleinik_minus(normalized, pair.phi1).values, pair.phi1.values);
  double gap = 0.0;
  for (std::size_t s : bd.aubry) gap = std::max(gap, std::abs(pair.phi0[s] - pair.phi1[s]));

  Report r;
  r.append(admissible);
  r.add("phi0_fixed_by_T_plus", plus, tol.num);
  r.add("phi1_fixed_by_T_minus", minus, tol.num);
  r.add("equal_on_aubry", gap, tol.num);
  const bool conditions = plus <= tol.num && minus <= tol.num && gap <= tol.num;
  r.add("equivalence", conditions == admissible.passed() ? 0.0 : 1.0, 0.0,
        conditions ? "conditions hold" : "conditions fail");
  return r;
}

Report is_a_lipschitz(const CostKernel& a, const Potential& phi, const Tolerances& tol) {
  const LipschitzViolation v = lipschitz_violation(a.costs(), phi);
  Report r;
  r.add("kernel_lipschitz", std::max(0.0, v.excess), tol.num,
        "worst pair (" + std::to_string(v.from) + ", " + std::to_string(v.to) + ")");
  return r;
}

std::vector<double> random_lipschitz_on_aubry(const BarrierData& bd, std::mt19937_64& rng,
                                              double spread) {
  const auto& aubry = bd.aubry;
  std::uniform_real_distribution<double> level(-spread, spread);
  std::bernoulli_distribution pick(0.5);
  std::vector<std::size_t> anchors;
  for (std::size_t s : aubry)
    if (pick(rng)) anchors.push_back(s);
  if (anchors.empty())
    anchors.push_back(aubry[std::uniform_int_distribution<std::size_t>(0, aubry.size() - 1)(rng)]);

  std::vector<double> phi(aubry.size(), kInf);
  for (std::size_t b : anchors) {
    const double r = level(rng);
    for (std::size_t k = 0; k < aubry.size(); ++k) phi[k] = std::min(phi[k], r + bd(b, aubry[k]));
  }
  return phi;
}

}  // namespace tropikam
