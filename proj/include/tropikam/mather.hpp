#pragma once

// Minimization of the one-step cost over couplings with equal marginals, and
// the characterization of minimizers by their support in D.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tropikam/barrier.hpp"
#include "tropikam/core.hpp"
#include "tropikam/transport.hpp"
#include "tropikam/weakkam.hpp"

namespace tropikam {

/// A probability on pairs whose two marginals coincide.
struct StationaryCoupling {
  Matrix eta;
  Measure marginal;

  /// Validates equal marginals and unit mass; throws PreconditionError.
  static StationaryCoupling from_mass(Matrix eta, const Tolerances& tol = default_tolerances());
  double cost(const Matrix& a) const;
};

struct MatherSolution {
  StationaryCoupling coupling;
  double value = 0.0;
};

/// Solves min sum A(x, y) eta(x, y) over stationary couplings for any kernel.
/// The optimum equals the kernel's minimum cycle mean. A nonzero
/// `pricing_seed` steers the simplex towards a different optimal vertex.
MatherSolution solve_stationary_lp(const Matrix& a, std::uint64_t pricing_seed = 0);

/// solve_stationary_lp on a normalized kernel; throws InconsistencyError when
/// the optimum is farther than tol.dual from 0.
MatherSolution solve_mather(const CostKernel& normalized,
                            const Tolerances& tol = default_tolerances(),
                            std::uint64_t pricing_seed = 0);

/// Both directions of "minimizing iff supported on D" for one coupling.
Report verify_minimizer_characterization(const CostKernel& normalized, const BarrierData& bd,
                                         const StationaryCoupling& eta,
                                         const Tolerances& tol = default_tolerances());

/// Uniform mass on the directed edges of a closed cycle (last point wraps to
/// the first).
StationaryCoupling cycle_coupling(std::size_t n, std::span<const std::size_t> cycle);

/// A cycle of the graph D reached by a random walk from `start` (an Aubry
/// point). Throws InconsistencyError if the walk finds no D-successor.
std::vector<std::size_t> random_d_cycle(const BarrierData& bd, std::size_t start,
                                        std::mt19937_64& rng);

/// Edges (x, y) with phi(y) - phi(x) = A(x, y) for every phi in a finite
/// family of kernel-Lipschitz functions: barrier rows c(z, .) for all z, and
/// both halves of the pairs seeded by c(a, .) and -c(., a) on the Aubry set.
EdgeSet contact_edges(const CostKernel& normalized, const BarrierData& bd,
                      const Tolerances& tol = default_tolerances());

/// Keeps only the edges extendable to bi-infinite chains inside `edges`:
/// repeatedly drops (x, y) unless x has an incoming and y an outgoing edge.
EdgeSet d_infinity_filter(const EdgeSet& edges);

}  // namespace tropikam
