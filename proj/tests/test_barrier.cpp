#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tropikam/barrier.hpp"

using namespace tropikam;

namespace {
const Matrix g3{{0, 1, 4}, {2, 1, 3}, {1, 2, 2}};
const Matrix g3_barrier{{0, 1, 4}, {2, 3, 6}, {1, 2, 5}};
}  // namespace

TEST_CASE("barrier of the three-point kernel") {
  const BarrierData bd = peierls_barrier(CostKernel(g3));
  CHECK(bd.barrier == g3_barrier);
  CHECK(bd.aubry == std::vector<std::size_t>{0});
  CHECK(bd.d_edges == EdgeSet{{0, 0}});
  CHECK(bd.in_aubry(0));
  CHECK_FALSE(bd.in_aubry(1));
  CHECK(bd.in_d(0, 0));
  CHECK_FALSE(bd.in_d(1, 2));
  CHECK(bd(1, 2) == 6.0);
}

TEST_CASE("barrier agrees with brute-force walk enumeration") {
  // c(x, y) is the liminf of cheapest walks; for this kernel the walk costs
  // are constant from length 2 on.
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      CHECK(oracle::cheapest_walk(g3, x, y, 9) == g3_barrier(x, y));
}

TEST_CASE("windowed liminf oracle") {
  const WindowedLiminf w = peierls_barrier_oracle(CostKernel(g3), 8, 16);
  CHECK(w.value == g3_barrier);
  CHECK(w.stabilized);
  CHECK(w.drift == 0.0);
  CHECK_THROWS_AS(peierls_barrier_oracle(CostKernel(g3), 8, 12), PreconditionError);
}

TEST_CASE("metric costs: every point is in the Aubry set and D is the diagonal") {
  std::mt19937_64 rng(5);
  const Matrix d = oracle::random_metric(6, rng);
  const BarrierData bd = peierls_barrier(CostKernel(d));
  CHECK(bd.aubry.size() == 6);
  CHECK(max_abs_diff(bd.barrier, d) <= 1e-12);
  for (const auto& [x, y] : bd.d_edges) CHECK(x == y);
  CHECK(bd.d_edges.size() == 6);
}

TEST_CASE("unnormalized kernels are rejected") {
  CHECK_THROWS_AS(peierls_barrier(CostKernel(Matrix{{1, 2}, {2, 1}})), PreconditionError);
  CHECK_THROWS_AS(peierls_barrier(CostKernel(Matrix{{-1}})), PreconditionError);
  const Analysis an = analyze_kernel(CostKernel(Matrix{{1, 2}, {2, 1}}));
  CHECK(an.normalized.critical_value == 1.0);
  CHECK(an.barrier.critical_value == 1.0);
  CHECK(an.barrier.aubry == std::vector<std::size_t>{0, 1});
}

TEST_CASE("cost axioms and propagation identities on the three-point kernel") {
  const CostKernel a(g3);
  const BarrierData bd = peierls_barrier(a);
  const Report axioms = check_cost_axioms(bd);
  CHECK(axioms.residual("triangle") == 0.0);
  CHECK(axioms.residual("aubry_factorization") == 0.0);
  for (int n = 1; n <= 4; ++n) {
    const Report r = check_propdec(a, bd, n);
    CHECK(r.passed());
    for (const Check& c : r.checks()) CHECK(c.residual == 0.0);
  }
}

TEST_CASE("oscillation bound holds for powers") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const Analysis an = analyze_kernel(CostKernel(oracle::random_kernel(n, -1, 1, rng)));
    const Matrix& a = an.normalized.kernel.costs();
    Matrix p = a;
    for (int m = 1; m <= 60; ++m) {
      if (m > 1) p = oracle::product(p, a);
      CHECK(std::max(std::abs(p.min_coeff()), std::abs(p.max_coeff())) <=
            an.barrier.oscillation_bound + 1e-9);
    }
  }
}
