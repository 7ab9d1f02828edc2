#pragma once

// Monge-Kantorovich transport for the barrier cost: primal and dual linear
// programs, support and duality checks, and factorization through the Aubry set.

#include <cstddef>
#include <random>
#include <vector>

#include "tropikam/barrier.hpp"
#include "tropikam/core.hpp"
#include "tropikam/weakkam.hpp"

namespace tropikam {

struct Measure {
  std::vector<double> weights;

  Measure() = default;
  explicit Measure(std::vector<double> w) : weights(std::move(w)) {}
  Measure(std::initializer_list<double> w) : weights(w) {}

  static Measure dirac(std::size_t n, std::size_t at);
  static Measure uniform(std::size_t n);
  /// Random weights on a random support of at most `max_support` points.
  static Measure random(std::size_t n, std::mt19937_64& rng, std::size_t max_support = 0);

  std::size_t size() const noexcept { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
  /// Indices with weight above `threshold`.
  std::vector<std::size_t> support(double threshold) const;
  double integrate(const Potential& f) const;

  /// Throws PreconditionError unless weights are >= 0 and sum to 1.
  void validate(const Tolerances& tol = default_tolerances()) const;
};

struct Coupling {
  Matrix eta;
  Measure marginal0;  // row sums
  Measure marginal1;  // column sums

  /// Builds from a mass matrix, reading the marginals off it.
  static Coupling from_mass(Matrix eta);
  double cost(const Matrix& c) const;
  void validate(const Tolerances& tol = default_tolerances()) const;
};

struct PrimalSolution {
  Coupling plan;
  double value = 0.0;
};

/// min over couplings of mu0 and mu1 of the integral of `cost`. The cost may
/// be rectangular (mu0 over rows, mu1 over columns).
PrimalSolution solve_primal(const Matrix& cost, const Measure& mu0, const Measure& mu1,
                            const Tolerances& tol = default_tolerances());

struct DualSolution {
  KamPair pair;
  double value = 0.0;
};

/// max over admissible pairs of int phi1 dmu1 - int phi0 dmu0, as a linear
/// program in the values of a c-Lipschitz function on the Aubry set.
DualSolution dual_value(const BarrierData& bd, const Measure& mu0, const Measure& mu1,
                        const Tolerances& tol = default_tolerances());

/// max over single cost-Lipschitz functions phi of int phi d(mu1 - mu0). Equals
/// the transport cost when the cost satisfies the triangle inequality and
/// vanishes on the diagonal.
double kantorovich_rubinstein_value(const Matrix& cost, const Measure& mu0, const Measure& mu1);

Report check_duality(double primal_value, double dual_value,
                     const Tolerances& tol = default_tolerances());

/// Every support point of the plan must satisfy phi1(y) - phi0(x) = c(x, y).
Report check_support(const Coupling& plan, const KamPair& pair, const BarrierData& bd,
                     const Tolerances& tol = default_tolerances());

/// The pair built from phi1 = c(x, .), attaining c(x, y) = phi1(y) - phi0(x).
DualSolution var_char_pair(const BarrierData& bd, std::size_t x, std::size_t y);

/// Pushes mu0 forward along a selection y(x) with phi1(y) = phi0(x) + c(x, y),
/// lowest index first. Throws InconsistencyError when no such y exists.
Measure converse_measure(const BarrierData& bd, const KamPair& pair, const Measure& mu0,
                         const Tolerances& tol = default_tolerances());

struct Factorization {
  Measure via;   // supported on the Aubry set
  double direct = 0.0;  // C(mu0, mu1)
  double first = 0.0;   // C(mu0, via)
  double second = 0.0;  // C(via, mu1)
  Report report;
};

/// Routes an optimal plan through the Aubry set and checks
/// C(mu0, mu1) = C(mu0, via) + C(via, mu1).
Factorization factor_through_aubry(const BarrierData& bd, const Measure& mu0,
                                   const Measure& mu1,
                                   const Tolerances& tol = default_tolerances());

/// Composes plans eta0 (mu0 -> mu) and eta1 (mu -> mu1) through their common
/// marginal: eta(x, y) = sum_z eta0(x, z) eta1(z, y) / mu(z).
Coupling glue_couplings(const Coupling& eta0, const Coupling& eta1,
                        const Tolerances& tol = default_tolerances());

}  // namespace tropikam
