#pragma once

// Stationary couplings realized as Markov chains, orbit sampling, and
// empirical Birkhoff averages of the one-step cost.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tropikam/barrier.hpp"
#include "tropikam/core.hpp"
#include "tropikam/mather.hpp"
#include "tropikam/minplus.hpp"
#include "tropikam/transport.hpp"

namespace tropikam {

/// Seed of child stream `stream`, derived with SplitMix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

struct MarkovRealization {
  Measure stationary;
  Matrix kernel;                     // row-stochastic on `domain`, zero elsewhere
  std::vector<std::size_t> domain;   // points of positive stationary mass

  std::size_t size() const noexcept { return kernel.rows(); }
};

struct OrbitSample {
  std::vector<std::size_t> path;

  std::size_t length() const noexcept { return path.size(); }
};

/// kernel(x, y) = eta(x, y) / mu(x) for mu(x) > tol.mass.
MarkovRealization markov_from_coupling(const StationaryCoupling& eta,
                                       const Tolerances& tol = default_tolerances());

/// x_0 drawn from the stationary law, then x_{j+1} ~ kernel(x_j, .).
/// Deterministic given `seed` (mt19937_64). Throws PreconditionError if
/// length is 0.
OrbitSample sample_orbit(const MarkovRealization& mr, std::size_t length, std::uint64_t seed);

/// Same, with x_0 drawn from `start` instead of the stationary law.
OrbitSample sample_orbit(const MarkovRealization& mr, const Measure& start, std::size_t length,
                         std::uint64_t seed);

/// (1 / (L - 1)) sum_j A(x_j, x_{j+1}); throws PreconditionError if L < 2.
double birkhoff_average(const OrbitSample& orbit, const CostKernel& a);

struct BirkhoffStatistics {
  double mean = 0.0;
  double sigma = 0.0;  // sample standard deviation of the summands
  std::size_t steps = 0;

  /// max(floor, 3 sigma / sqrt(steps)).
  double tolerance(double floor = 1e-2) const;
};

BirkhoffStatistics birkhoff_statistics(const OrbitSample& orbit, const CostKernel& a);

/// Follows D from an Aubry point, always taking the lowest-index successor.
/// Throws InconsistencyError when a point has no D-successor.
OrbitSample orbit_in_d(const BarrierData& bd, std::size_t x0, std::size_t length);

/// Empirical law of consecutive pairs (x_j, x_{j+1}).
Matrix pair_frequencies(const OrbitSample& orbit, std::size_t n);
/// Empirical law of visited points.
Measure occupation_frequencies(const OrbitSample& orbit, std::size_t n);

double total_variation(const Matrix& p, const Matrix& q);
double total_variation(const Measure& p, const Measure& q);

/// Closed communicating classes of the chain on its domain, each sorted.
/// Under a stationary law every point of the domain is recurrent.
std::vector<std::vector<std::size_t>> recurrent_classes(const MarkovRealization& mr);

struct ErgodicResult {
  double average = 0.0;        // mass-weighted Birkhoff average over classes
  double space_average = 0.0;  // sum A eta
  double statistical_tolerance = 0.0;
  double pair_tv = 0.0;
  double occupation_tv = 0.0;
  std::size_t classes = 0;
  Report report;
};

struct ErgodicOptions {
  std::size_t length = 100000;
  std::uint64_t seed = 0;
  double floor = 1e-2;          // lower bound on the statistical tolerance
  double tv_tolerance = 5e-2;
};

/// Samples one orbit per recurrent class, started from the class-restricted
/// stationary law, and compares the mass-weighted time averages with the
/// space averages of eta. Does not assume ergodicity.
ErgodicResult check_ergodic(const CostKernel& a, const StationaryCoupling& eta,
                            const ErgodicOptions& opt = {},
                            const Tolerances& tol = default_tolerances());

}  // namespace tropikam
