#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tropikam/mather.hpp"

using namespace tropikam;

namespace {
const CostKernel g3(Matrix{{0, 1, 4}, {2, 1, 3}, {1, 2, 2}});
}

TEST_CASE("minimizing coupling of the three-point kernel") {
  const BarrierData bd = peierls_barrier(g3);
  const MatherSolution s = solve_mather(g3);
  CHECK(s.value == doctest::Approx(0.0));
  CHECK(s.coupling.eta(0, 0) == doctest::Approx(1.0));
  CHECK(verify_minimizer_characterization(g3, bd, s.coupling).passed());
}

TEST_CASE("a cycle off D is detected as a non-minimizer") {
  const BarrierData bd = peierls_barrier(g3);
  const std::vector<std::size_t> cycle{1, 2};
  const StationaryCoupling eta = cycle_coupling(3, cycle);
  CHECK(eta.cost(g3.costs()) == 2.5);
  const Report r = verify_minimizer_characterization(g3, bd, eta);
  CHECK_FALSE(r.check("objective").passed());
  CHECK_FALSE(r.check("support_in_D").passed());
  CHECK(r.check("characterization").passed());
}

TEST_CASE("stationary couplings need equal marginals") {
  Matrix m(3, 3, 0.0);
  m(1, 2) = 1.0;
  CHECK_THROWS_AS(StationaryCoupling::from_mass(m), PreconditionError);
  const std::vector<std::size_t> loop{0};
  CHECK(cycle_coupling(3, loop).eta(0, 0) == 1.0);
  CHECK_THROWS_AS(cycle_coupling(3, std::vector<std::size_t>{}), PreconditionError);
}

TEST_CASE("unnormalized kernels have a nonzero optimum") {
  const CostKernel a(Matrix{{1, 2}, {2, 1}});
  CHECK(solve_stationary_lp(a.costs()).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(solve_mather(a), InconsistencyError);
}

TEST_CASE("stationary optimum equals the minimum simple cycle mean") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const Matrix a = oracle::random_kernel(n, -1, 1, rng);
    CHECK(solve_stationary_lp(a, trial).value ==
          doctest::Approx(oracle::min_mean_cycle(a)).epsilon(1e-9));
  }
}

TEST_CASE("D cycles and the contact-set filter") {
  const BarrierData bd = peierls_barrier(g3);
  std::mt19937_64 rng(0);
  CHECK(random_d_cycle(bd, 0, rng) == std::vector<std::size_t>{0});
  const EdgeSet d1 = contact_edges(g3, bd);
  CHECK(d_infinity_filter(d1) == EdgeSet{{0, 0}});
  CHECK(d_infinity_filter(EdgeSet{{0, 1}, {1, 2}}).empty());
  CHECK(d_infinity_filter(EdgeSet{{0, 1}, {1, 0}, {1, 2}}) == EdgeSet{{0, 1}, {1, 0}});
}

TEST_CASE("two-point zero-cost cycle") {
  const Analysis an = analyze_kernel(CostKernel(Matrix{{1, 0}, {0, 1}}));
  CHECK(an.barrier.d_edges == EdgeSet{{0, 1}, {1, 0}});
  std::mt19937_64 rng(0);
  const auto c = random_d_cycle(an.barrier, 0, rng);
  CHECK(c == std::vector<std::size_t>{0, 1});
  const StationaryCoupling eta = cycle_coupling(2, c);
  CHECK(verify_minimizer_characterization(an.normalized.kernel, an.barrier, eta).passed());
}

TEST_CASE("heavily degenerate stationary LP") {
  // Quadratic circle costs with a single critical loop: every vertex is a
  // cycle coupling, so almost all basic variables are zero.
  const std::size_t n = 80;
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = oracle::free_particle(i, j, n) + (i == 0 && j == 0 ? 0.0 : 1e-3);
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const MatherSolution s = solve_stationary_lp(a, seed);
    CHECK(std::abs(s.value) <= 1e-12);
    CHECK(s.coupling.eta(0, 0) == doctest::Approx(1.0));
  }
}
