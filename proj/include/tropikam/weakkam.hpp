#pragma once

// Lax-Oleinik operators, weak KAM / Kantorovich admissible pairs, and the
// executable form of their equivalence.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tropikam/barrier.hpp"
#include "tropikam/core.hpp"
#include "tropikam/minplus.hpp"

namespace tropikam {

/// A real function on the point set.
struct Potential {
  std::vector<double> values;

  Potential() = default;
  explicit Potential(std::vector<double> v) : values(std::move(v)) {}
  Potential(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  Potential shifted(double t) const;

  bool operator==(const Potential&) const = default;
};

struct KamPair {
  Potential phi0;  // backward solution, fixed point of T+
  Potential phi1;  // forward solution, fixed point of T-
};

/// T-u(x) = min_y u(y) + A(y, x).
Potential lax_oleinik_minus(const CostKernel& a, const Potential& u);
/// T+u(x) = max_y u(y) - A(x, y).
Potential lax_oleinik_plus(const CostKernel& a, const Potential& u);

/// Successive T- iterates u, T-u, ..., for diagnostics. On normalized kernels
/// the iterates need not converge pointwise.
std::vector<Potential> lax_oleinik_orbit(const CostKernel& a, const Potential& u, int steps);

/// Row z of the barrier, y -> c(z, y). Always a T- fixed point.
Potential barrier_row(const BarrierData& bd, std::size_t z);

/// Builds the admissible pair parameterized by a c-Lipschitz function on the
/// Aubry set. `phi_on_aubry[k]` is the value at `bd.aubry[k]`.
/// Throws PreconditionError naming the worst pair when phi is not
/// c-Lipschitz within tol.num.
KamPair pair_from_lipschitz(const BarrierData& bd, std::span<const double> phi_on_aubry,
                            const Tolerances& tol = default_tolerances());

/// The unique phi0 making (phi0, phi1) admissible, for phi1 a T- fixed point.
/// Throws PreconditionError with the fixed-point residual otherwise.
KamPair complete_pair(const CostKernel& normalized, const BarrierData& bd,
                      const Potential& phi1, const Tolerances& tol = default_tolerances());

/// complete_pair without the fixed-point precondition check.
Potential completion_from_aubry(const BarrierData& bd, const Potential& phi1);

/// phi0(x) = max over all y of phi1(y) - c(x, y): the completion read directly
/// off the admissibility relation. Agrees with completion_from_aubry on
/// admissible input.
Potential completion_from_all_points(const BarrierData& bd, const Potential& phi1);

/// Residuals of both defining relations of an admissible pair for c.
Report is_admissible_pair(const BarrierData& bd, const KamPair& pair,
                          const Tolerances& tol = default_tolerances());

/// Fixed-point residuals of phi0 under T+ and phi1 under T-, and the gap
/// between phi0 and phi1 on the Aubry set, together with admissibility.
/// The "equivalence" check fails when admissibility and the three fixed-point
/// conditions disagree.
Report check_theorem_pairs(const CostKernel& normalized, const BarrierData& bd,
                           const KamPair& pair, const Tolerances& tol = default_tolerances());

/// max over (x, y) of phi(y) - phi(x) - A(x, y); passes when <= tol.num.
Report is_a_lipschitz(const CostKernel& a, const Potential& phi,
                      const Tolerances& tol = default_tolerances());

/// max over (x, y) of phi(y) - phi(x) - cost(x, y), with the arg max.
struct LipschitzViolation {
  double excess = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
};
LipschitzViolation lipschitz_violation(const Matrix& cost, const Potential& phi);

/// Random c-Lipschitz function on the Aubry set, phi(a) = min over b in S of
/// r_b + c(b, a), for a random nonempty S and r_b uniform in [-spread, spread].
std::vector<double> random_lipschitz_on_aubry(const BarrierData& bd, std::mt19937_64& rng,
                                              double spread = 1.0);

}  // namespace tropikam
