#include "tropikam/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tropikam {

bool BarrierData::in_aubry(std::size_t x) const {
  return std::binary_search(aubry.begin(), aubry.end(), x);
}

bool BarrierData::in_d(std::size_t x, std::size_t y) const {
  return std::binary_search(d_edges.begin(), d_edges.end(), Edge{x, y});
}

BarrierData peierls_barrier(const CostKernel& normalized, double critical_value,
                            const Tolerances& tol) {
  const Matrix& a = normalized.costs();
  const std::size_t n = a.rows();
  const double l = min_mean_cycle(a);
  if (std::abs(l) > tol.num)
    throw PreconditionError("peierls_barrier: kernel is not normalized (critical value " +
                            std::to_string(l) + ")");

  BarrierData bd;
  bd.critical_value = critical_value;
  bd.walk_closure = shortest_walk_closure(a, tol);
  for (std::size_t x = 0; x < n; ++x)
    if (std::abs(bd.walk_closure(x, x)) <= tol.aubry) bd.aubry.push_back(x);
  if (bd.aubry.empty())
    throw InconsistencyError(
        "peierls_barrier: empty Aubry set; check normalization or raise the Aubry tolerance");

  const Matrix& w = bd.walk_closure;
  bd.barrier = Matrix(n, n, std::numeric_limits<double>::infinity());
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t s : bd.aubry) best = std::min(best, w(x, s) + w(s, y));
      bd.barrier(x, y) = best;
    }

  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (std::abs(a(x, y) + bd.barrier(y, x)) <= tol.aubry) bd.d_edges.emplace_back(x, y);

  // Every m-step walk splits into a simple path plus nonnegative cycles, and
  // some m-step walk detours through a zero-mean cycle; both ends stay within
  // n * (max - min) of zero.
  bd.oscillation_bound = static_cast<double>(n) * (a.max_coeff() - a.min_coeff());
  return bd;
}

Analysis analyze_kernel(const CostKernel& raw, const Tolerances& tol) {
  NormalizedKernel nk = normalize(raw);
  BarrierData bd = peierls_barrier(nk.kernel, nk.critical_value, tol);
  return {std::move(nk), std::move(bd)};
}

WindowedLiminf peierls_barrier_oracle(const CostKernel& normalized, int n_min, int n_max,
                                      const Tolerances& tol) {
  if (n_min < 1 || n_max < 2 * n_min)
    throw PreconditionError("peierls_barrier_oracle: need 1 <= n_min and n_max >= 2 n_min");
  const Matrix& a = normalized.costs();
  const std::size_t n = a.rows();
  const double inf = std::numeric_limits<double>::infinity();
  Matrix window(n, n, inf);
  Matrix doubled(n, n, inf);
  Matrix power = a;
  for (int k = 1; k <= 2 * n_max; ++k) {
    if (k > 1) power = detail::minplus_product(power, a);
    auto fold = [&](Matrix& into) {
      for (std::size_t i = 0; i < n * n; ++i)
        into.values()[i] = std::min(into.values()[i], power.values()[i]);
    };
    if (k >= n_min && k <= n_max) fold(window);
    if (k >= 2 * n_min) fold(doubled);
  }
  WindowedLiminf out;
  out.drift = max_abs_diff(window, doubled);
  out.stabilized = out.drift <= tol.num;
  out.value = std::move(window);
  return out;
}

Report check_cost_axioms(const BarrierData& bd, const Tolerances& tol) {
  const Matrix& c = bd.barrier;
  const std::size_t n = c.rows();
  double triangle = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        triangle = std::max(triangle, c(x, z) - c(x, y) - c(y, z));

  double factor = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t s : bd.aubry) best = std::min(best, c(x, s) + c(s, y));
      factor = std::max(factor, std::abs(c(x, y) - best));
    }

  Report r;
  r.add("triangle", triangle, tol.num);
  r.add("aubry_factorization", factor, tol.num);
  return r;
}

Report check_propdec(const CostKernel& normalized, const BarrierData& bd, int n,
                     const Tolerances& tol) {
  const Matrix an = tropical_power(normalized.costs(), n);
  Report r;
  r.add("barrier_then_power", max_abs_diff(tropical_product(bd.barrier, an), bd.barrier),
        tol.num);
  r.add("power_then_barrier", max_abs_diff(tropical_product(an, bd.barrier), bd.barrier),
        tol.num);
  return r;
}

}  // namespace tropikam
