#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tropikam/transport.hpp"

using namespace tropikam;

namespace {
const CostKernel g3(Matrix{{0, 1, 4}, {2, 1, 3}, {1, 2, 2}});
}

TEST_CASE("measures") {
  CHECK(Measure::dirac(3, 1).weights == std::vector<double>{0, 1, 0});
  CHECK(Measure::uniform(4)[2] == 0.25);
  CHECK_THROWS_AS(Measure::dirac(3, 3), DimensionError);
  CHECK_THROWS_AS(Measure({0.5, 0.6}).validate(), PreconditionError);
  CHECK_THROWS_AS(Measure({1.5, -0.5}).validate(), PreconditionError);
  CHECK(Measure({0.5, 0, 0.5}).support(0.0) == std::vector<std::size_t>{0, 2});
  CHECK(Measure({0.5, 0.5}).integrate(Potential{2, 4}) == 3.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const Measure m = Measure::random(6, rng, 2);
    CHECK_NOTHROW(m.validate());
    CHECK(m.support(0.0).size() <= 2);
  }
}

TEST_CASE("Dirac to Dirac transport on the three-point kernel") {
  const BarrierData bd = peierls_barrier(g3);
  const Measure mu0 = Measure::dirac(3, 1), mu1 = Measure::dirac(3, 2);
  const PrimalSolution p = solve_primal(bd.barrier, mu0, mu1);
  CHECK(p.value == doctest::Approx(6).epsilon(1e-12));
  CHECK(p.plan.eta(1, 2) == doctest::Approx(1));
  const DualSolution d = dual_value(bd, mu0, mu1);
  CHECK(d.value == doctest::Approx(6).epsilon(1e-12));
  CHECK(check_duality(p.value, d.value).passed());
  CHECK(check_support(p.plan, d.pair, bd).passed());
}

TEST_CASE("primal value equals the polytope vertex minimum") {
  const BarrierData bd = peierls_barrier(g3);
  const std::vector<double> mu0{0.5, 0.5, 0}, mu1{0, 0.5, 0.5};
  const PrimalSolution p = solve_primal(bd.barrier, Measure(mu0), Measure(mu1));
  CHECK(p.value == doctest::Approx(oracle::transport_by_vertices(bd.barrier, mu0, mu1)));
  CHECK_NOTHROW(p.plan.validate());
}

TEST_CASE("the pair of a point pair attains the barrier") {
  const BarrierData bd = peierls_barrier(g3);
  const DualSolution d = var_char_pair(bd, 1, 2);
  CHECK(d.value == 6.0);
  CHECK(d.pair.phi1 == Potential{2, 3, 6});
  CHECK(d.pair.phi0[1] == 0.0);
  CHECK(is_admissible_pair(bd, d.pair).passed());
  CHECK_THROWS_AS(var_char_pair(bd, 3, 0), DimensionError);
}

TEST_CASE("converse construction from the canonical pair") {
  const BarrierData bd = peierls_barrier(g3);
  const KamPair canonical{{0, -2, -1}, {0, 1, 4}};
  const Measure mu1 = converse_measure(bd, canonical, Measure::dirac(3, 1));
  CHECK(mu1.weights == std::vector<double>{1, 0, 0});
  const double value = mu1.integrate(canonical.phi1) - Measure::dirac(3, 1).integrate(canonical.phi0);
  CHECK(value == 2.0);
  CHECK(solve_primal(bd.barrier, Measure::dirac(3, 1), mu1).value == doctest::Approx(2.0));
}

TEST_CASE("factorization through the Aubry set") {
  const BarrierData bd = peierls_barrier(g3);
  const Factorization f = factor_through_aubry(bd, Measure::dirac(3, 1), Measure::dirac(3, 2));
  CHECK(f.via.weights == std::vector<double>{1, 0, 0});
  CHECK(f.direct == doctest::Approx(6));
  CHECK(f.first == doctest::Approx(2));
  CHECK(f.second == doctest::Approx(4));
  CHECK(f.report.passed());
}

TEST_CASE("gluing plans through a common marginal") {
  const BarrierData bd = peierls_barrier(g3);
  const Coupling a = solve_primal(bd.barrier, Measure::dirac(3, 1), Measure::dirac(3, 0)).plan;
  const Coupling b = solve_primal(bd.barrier, Measure::dirac(3, 0), Measure::dirac(3, 2)).plan;
  const Coupling glued = glue_couplings(a, b);
  CHECK(glued.eta(1, 2) == doctest::Approx(1));
  CHECK(glued.cost(bd.barrier) == doctest::Approx(6));
  CHECK_THROWS_AS(glue_couplings(b, a), PreconditionError);
}

TEST_CASE("single-function dual for metric costs") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix d = oracle::random_metric(5, rng);
    const BarrierData bd = peierls_barrier(CostKernel(d));
    const Measure mu0 = Measure::random(5, rng), mu1 = Measure::random(5, rng);
    const double kr = kantorovich_rubinstein_value(d, mu0, mu1);
    CHECK(kr == doctest::Approx(dual_value(bd, mu0, mu1).value).epsilon(1e-9));
    CHECK(kr == doctest::Approx(solve_primal(d, mu0, mu1).value).epsilon(1e-9));
  }
}

TEST_CASE("primal and dual agree with vertex enumeration on random kernels") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + trial % 6;
    const BarrierData bd =
        analyze_kernel(CostKernel(oracle::random_kernel(n, -1, 1, rng))).barrier;
    const Measure mu0 = Measure::random(n, rng, 3), mu1 = Measure::random(n, rng, 3);
    const double brute = oracle::transport_by_vertices(bd.barrier, mu0.weights, mu1.weights);
    CHECK(solve_primal(bd.barrier, mu0, mu1).value == doctest::Approx(brute).epsilon(1e-9));
    CHECK(dual_value(bd, mu0, mu1).value == doctest::Approx(brute).epsilon(1e-9));
  }
}
