#pragma once

// Cost kernels from files, and from time-periodic Lagrangians on the circle by
// discretized action minimization.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "tropikam/minplus.hpp"

namespace tropikam {

enum class PotentialKind { zero, pendulum, two_harmonic };

/// L(x, v, t) = kinetic / 2 * v^2 - V(x, t) on the circle [0, 1), with
///   pendulum:      V = eps1 cos(2 pi x)
///   two_harmonic:  V = eps1 cos(2 pi x) + eps2 cos(2 pi (2x - t))
///   zero:          V = 0
struct LagrangianSpec {
  std::size_t grid_size = 50;  // N nodes x_i = i / N
  std::size_t substeps = 10;   // K time slices per period
  PotentialKind potential = PotentialKind::pendulum;
  double eps1 = 0.1;
  double eps2 = 0.0;
  double kinetic = 1.0;

  /// Throws PreconditionError unless N >= 2, K >= 1 and kinetic > 0.
  void validate() const;
  double potential_at(double x, double t) const;
  double lagrangian(double x, double v, double t) const;
};

/// Parses "pendulum:eps=0.1,N=50,K=10". Kinds: zero (alias free), pendulum,
/// two-harmonic (eps1, eps2). Optional key m sets the kinetic coefficient.
/// Throws PreconditionError on unknown kinds, keys or malformed numbers.
LagrangianSpec parse_lagrangian(std::string_view text);
std::string to_string(const LagrangianSpec& spec);

/// Signed displacement in grid units from `from` to `to` on a circle of `m`
/// points, wrapped to (-m/2, m/2] (ties go the positive way).
long circle_displacement(std::size_t from, std::size_t to, std::size_t m);

/// Tropical product of the K substep kernels
///   B_s(x, y) = (1/K) L(midpoint(x, y), K * disp(x, y), (s + 1/2) / K),
/// with paths passing through a refined grid of N * K points between
/// periods' endpoints. Node i sits at refined point i * K, so straight paths
/// of the free particle stay on the grid and the result does not depend on K.
CostKernel action_kernel(const LagrangianSpec& spec);

enum class CostFormat { json, csv };

/// Chooses csv for a ".csv" extension, json otherwise.
CostFormat format_for_path(const std::filesystem::path& path);

/// Throws ParseError with 1-based line and column (0 when unknown).
CostKernel parse_cost(std::string_view text, CostFormat format);
/// Numbers use 17 significant digits, so parse_cost(format_cost(k)) == k.
std::string format_cost(const CostKernel& kernel, CostFormat format);

/// File wrappers. Errors opening the file surface as ParseError at line 0.
CostKernel load_cost(const std::filesystem::path& path, CostFormat format);
CostKernel load_cost(const std::filesystem::path& path);
void save_cost(const CostKernel& kernel, const std::filesystem::path& path, CostFormat format);
void save_cost(const CostKernel& kernel, const std::filesystem::path& path);

}  // namespace tropikam
