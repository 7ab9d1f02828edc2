#pragma once

// Peierls barrier, Aubry set and the set D for a normalized kernel.

#include <cstddef>
#include <vector>

#include "tropikam/core.hpp"
#include "tropikam/minplus.hpp"

namespace tropikam {

struct BarrierData {
  double critical_value = 0.0;     // l of the kernel before normalization
  Matrix walk_closure;             // cheapest nonempty walks of the normalized kernel
  Matrix barrier;                  // c(x, y)
  std::vector<std::size_t> aubry;  // sorted indices with c(a, a) = 0
  EdgeSet d_edges;                 // pairs with A(x, y) + c(y, x) = 0
  double oscillation_bound = 0.0;  // C with |A^n(x, y) - l n| <= C

  std::size_t size() const noexcept { return barrier.rows(); }
  bool in_aubry(std::size_t x) const;
  bool in_d(std::size_t x, std::size_t y) const;
  double operator()(std::size_t x, std::size_t y) const { return barrier(x, y); }
};

/// Barrier of a kernel already normalized to critical value 0 (within
/// tol.num). `critical_value` is recorded as-is; pass the l that normalize()
/// subtracted.
///
/// c(x, y) = min over a in the Aubry set of W(x, a) + W(a, y), where W is the
/// walk closure and the Aubry set is {a : |W(a, a)| <= tol.aubry}.
/// Throws PreconditionError for an unnormalized kernel and
/// InconsistencyError when the Aubry set comes out empty.
BarrierData peierls_barrier(const CostKernel& normalized, double critical_value = 0.0,
                            const Tolerances& tol = default_tolerances());

/// normalize() followed by peierls_barrier().
struct Analysis {
  NormalizedKernel normalized;
  BarrierData barrier;
};
Analysis analyze_kernel(const CostKernel& raw, const Tolerances& tol = default_tolerances());

struct WindowedLiminf {
  Matrix value;        // entrywise min of A^n over n in [n_min, n_max]
  double drift = 0.0;  // change when the window is doubled
  bool stabilized = false;
};

/// Direct evaluation of liminf A^n through a finite window of powers. Serves
/// as an oracle for peierls_barrier; non-stabilization is reported, not thrown.
WindowedLiminf peierls_barrier_oracle(const CostKernel& normalized, int n_min, int n_max,
                                      const Tolerances& tol = default_tolerances());

/// Triangle inequality and factorization through the Aubry set.
Report check_cost_axioms(const BarrierData& bd, const Tolerances& tol = default_tolerances());

/// c = c (x) A^n and c = A^n (x) c, tropically.
Report check_propdec(const CostKernel& normalized, const BarrierData& bd, int n,
                     const Tolerances& tol = default_tolerances());

}  // namespace tropikam
