#include <doctest.h>

#include "tropikam/ergodic.hpp"

using namespace tropikam;

namespace {
const CostKernel g3(Matrix{{0, 1, 4}, {2, 1, 3}, {1, 2, 2}});

StationaryCoupling coupling(Matrix m) { return StationaryCoupling::from_mass(std::move(m)); }
}  // namespace

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("Markov realizations of simple couplings") {
  const MarkovRealization fixed = markov_from_coupling(coupling(Matrix{{1, 0}, {0, 0}}));
  CHECK(fixed.domain == std::vector<std::size_t>{0});
  CHECK(fixed.kernel(0, 0) == 1.0);

  const MarkovRealization swap = markov_from_coupling(coupling(Matrix{{0, 0.5}, {0.5, 0}}));
  CHECK(swap.kernel(0, 1) == 1.0);
  CHECK(swap.kernel(1, 0) == 1.0);

  const MarkovRealization id = markov_from_coupling(coupling(Matrix{{0.5, 0}, {0, 0.5}}));
  CHECK(id.kernel == Matrix{{1, 0}, {0, 1}});
  CHECK(recurrent_classes(id).size() == 2);
  CHECK(recurrent_classes(swap).size() == 1);
}

TEST_CASE("orbit sampling") {
  const MarkovRealization fixed = markov_from_coupling(coupling(Matrix{{1, 0}, {0, 0}}));
  CHECK(sample_orbit(fixed, 5, 1).path == std::vector<std::size_t>(5, 0));

  const MarkovRealization swap = markov_from_coupling(coupling(Matrix{{0, 0.5}, {0.5, 0}}));
  const OrbitSample o = sample_orbit(swap, 6, 2);
  for (std::size_t j = 1; j < o.length(); ++j) CHECK(o.path[j] != o.path[j - 1]);

  const MarkovRealization mixed =
      markov_from_coupling(coupling(Matrix{{0.2, 0.1, 0.1}, {0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}}));
  CHECK(sample_orbit(mixed, 500, 42).path == sample_orbit(mixed, 500, 42).path);
  CHECK(sample_orbit(mixed, 500, 42).path != sample_orbit(mixed, 500, 43).path);
  CHECK_THROWS_AS(sample_orbit(mixed, 0, 1), PreconditionError);
}

TEST_CASE("Birkhoff averages") {
  const OrbitSample at_zero{{0, 0, 0, 0}};
  CHECK(birkhoff_average(at_zero, g3) == 0.0);
  CHECK_THROWS_AS(birkhoff_average(OrbitSample{{0}}, g3), PreconditionError);

  const CostKernel metric(Matrix{{0, 1}, {1, 0}});
  CHECK(birkhoff_average(OrbitSample{{0, 1, 0, 1, 0}}, metric) == 1.0);
  const BirkhoffStatistics s = birkhoff_statistics(OrbitSample{{0, 1, 1, 0}}, metric);
  CHECK(s.steps == 3);
  CHECK(s.mean == doctest::Approx(2.0 / 3.0));
  CHECK(s.sigma > 0.0);
  CHECK(s.tolerance() >= 1e-2);
}

TEST_CASE("orbits inside D") {
  const BarrierData bd = peierls_barrier(g3);
  CHECK(orbit_in_d(bd, 0, 4).path == std::vector<std::size_t>(4, 0));
  CHECK_THROWS_AS(orbit_in_d(bd, 1, 4), PreconditionError);

  const BarrierData two = analyze_kernel(CostKernel(Matrix{{1, 0}, {0, 1}})).barrier;
  CHECK(orbit_in_d(two, 0, 5).path == std::vector<std::size_t>{0, 1, 0, 1, 0});

  const BarrierData metric = peierls_barrier(CostKernel(Matrix{{0, 1}, {1, 0}}));
  CHECK(orbit_in_d(metric, 1, 3).path == std::vector<std::size_t>{1, 1, 1});
}

TEST_CASE("frequencies and total variation") {
  const OrbitSample o{{0, 1, 0, 1, 0}};
  CHECK(pair_frequencies(o, 2) == Matrix{{0, 0.5}, {0.5, 0}});
  const Measure occ = occupation_frequencies(o, 2);
  CHECK(occ[0] == doctest::Approx(0.6));
  CHECK(occ[1] == doctest::Approx(0.4));
  CHECK(total_variation(Matrix{{1, 0}}, Matrix{{0, 1}}) == 1.0);
  CHECK(total_variation(Measure{0.5, 0.5}, Measure{0.5, 0.5}) == 0.0);
}

TEST_CASE("ergodic check with several recurrent classes") {
  const CostKernel a(Matrix{{0, 3}, {3, 0}});
  const StationaryCoupling eta = coupling(Matrix{{0.3, 0}, {0, 0.7}});
  const ErgodicResult r = check_ergodic(a, eta, {2000, 5});
  CHECK(r.classes == 2);
  CHECK(r.average == 0.0);
  CHECK(r.pair_tv == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.report.passed());
}

TEST_CASE("ergodic check for a non-minimizing coupling") {
  const StationaryCoupling eta = cycle_coupling(3, std::vector<std::size_t>{1, 2});
  const ErgodicResult r = check_ergodic(g3, eta, {10000, 1});
  CHECK(r.space_average == 2.5);
  CHECK(r.average == doctest::Approx(2.5).epsilon(1e-3));
  CHECK(r.report.passed());
}
