#pragma once

// Brute-force reference computations. Deliberately naive and independent of
// the library algorithms: enumeration instead of dynamic programming, vertex
// enumeration instead of simplex.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "tropikam/core.hpp"

namespace oracle {

using tropikam::Matrix;
constexpr double inf = std::numeric_limits<double>::infinity();

inline Matrix product(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  Matrix c(n, n, inf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c(i, j) = std::min(c(i, j), a(i, k) + b(k, j));
  return c;
}

/// Minimum weight over every walk of exactly `len` edges from x to y, by
/// enumerating the walks one by one.
inline double cheapest_walk(const Matrix& a, std::size_t x, std::size_t y, int len) {
  double best = inf;
  std::function<void(std::size_t, int, double)> go = [&](std::size_t at, int left, double w) {
    if (left == 0) {
      if (at == y) best = std::min(best, w);
      return;
    }
    for (std::size_t z = 0; z < a.rows(); ++z) go(z, left - 1, w + a(at, z));
  };
  go(x, len, 0.0);
  return best;
}

/// Every simple directed cycle, listed once with its smallest vertex first.
inline std::vector<std::vector<std::size_t>> simple_cycles(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::vector<char> used(n, 0);
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    out.push_back(path);
    for (std::size_t z = start + 1; z < n; ++z) {
      if (used[z]) continue;
      used[z] = 1;
      path.push_back(z);
      extend(start);
      path.pop_back();
      used[z] = 0;
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, 0);
    used[s] = 1;
    extend(s);
  }
  return out;
}

inline double cycle_mean(const Matrix& a, const std::vector<std::size_t>& c) {
  double w = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) w += a(c[i], c[(i + 1) % c.size()]);
  return w / static_cast<double>(c.size());
}

inline double min_mean_cycle(const Matrix& a) {
  double best = inf;
  for (const auto& c : simple_cycles(a.rows())) best = std::min(best, cycle_mean(a, c));
  return best;
}

/// Entrywise min of A^m over m in [lo, hi], from naive products.
inline Matrix windowed_liminf(const Matrix& a, int lo, int hi) {
  Matrix p = a;
  Matrix best(a.rows(), a.cols(), inf);
  for (int m = 1; m <= hi; ++m) {
    if (m > 1) p = product(p, a);
    if (m >= lo)
      for (std::size_t i = 0; i < p.values().size(); ++i)
        best.values()[i] = std::min(best.values()[i], p.values()[i]);
  }
  return best;
}

/// Solves the square-or-tall system M z = r by Gaussian elimination. Returns
/// false when the columns are dependent or the system is inconsistent.
inline bool solve_system(std::vector<std::vector<double>> m, std::vector<double> r,
                         std::vector<double>& z) {
  const std::size_t rows = m.size();
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t i = 0; i < rows; ++i) m[i].push_back(r[i]);
  std::size_t lead = 0;
  for (std::size_t c = 0; c < cols; ++c, ++lead) {
    std::size_t p = lead;
    for (std::size_t i = lead; i < rows; ++i)
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    if (p >= rows || std::abs(m[p][c]) < 1e-12) return false;
    std::swap(m[p], m[lead]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == lead) continue;
      const double f = m[i][c] / m[lead][c];
      for (std::size_t k = c; k <= cols; ++k) m[i][k] -= f * m[lead][k];
    }
  }
  for (std::size_t i = cols; i < rows; ++i)
    if (std::abs(m[i][cols]) > 1e-9) return false;
  z.assign(cols, 0.0);
  for (std::size_t c = 0; c < cols; ++c) z[c] = m[c][cols] / m[c][c];
  return true;
}

/// Transport cost by enumerating every basic feasible plan between the
/// supports: all cell subsets of size |S0| + |S1| - 1.
inline double transport_by_vertices(const Matrix& cost, const std::vector<double>& mu0,
                                    const std::vector<double>& mu1) {
  std::vector<std::size_t> s0, s1;
  for (std::size_t i = 0; i < mu0.size(); ++i)
    if (mu0[i] > 0.0) s0.push_back(i);
  for (std::size_t j = 0; j < mu1.size(); ++j)
    if (mu1[j] > 0.0) s1.push_back(j);
  const std::size_t p = s0.size(), q = s1.size(), cells = p * q, k = p + q - 1;
  std::vector<double> rhs;
  for (std::size_t i : s0) rhs.push_back(mu0[i]);
  for (std::size_t j : s1) rhs.push_back(mu1[j]);
  double best = inf;
  std::vector<char> pick(cells, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
  std::sort(pick.begin(), pick.end());
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t c = 0; c < cells; ++c)
      if (pick[c]) chosen.push_back(c);
    std::vector<std::vector<double>> m(p + q, std::vector<double>(k, 0.0));
    for (std::size_t v = 0; v < k; ++v) {
      m[chosen[v] / q][v] = 1.0;
      m[p + chosen[v] % q][v] = 1.0;
    }
    std::vector<double> z;
    if (!solve_system(m, rhs, z)) continue;
    if (std::any_of(z.begin(), z.end(), [](double v) { return v < -1e-12; })) continue;
    double w = 0.0;
    for (std::size_t v = 0; v < k; ++v)
      w += z[v] * cost(s0[chosen[v] / q], s1[chosen[v] % q]);
    best = std::min(best, w);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

/// Uniform integer kernel entries in [lo, hi].
inline Matrix random_integer_kernel(std::size_t n, int lo, int hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(lo, hi);
  Matrix a(n, n);
  for (double& v : a.values()) v = d(rng);
  return a;
}

inline Matrix random_kernel(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(lo, hi);
  Matrix a(n, n);
  for (double& v : a.values()) v = d(rng);
  return a;
}

/// Shortest-path metric of a random positive graph, as a cost with zero
/// diagonal and the triangle inequality.
inline Matrix random_metric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.5, 3.0);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = i == j ? 0.0 : d(rng);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = std::min(a(i, j), a(i, k) + a(k, j));
  return a;
}

/// Free particle action between nodes i and j of an N-grid:
/// half the squared shortest circle distance.
inline double free_particle(std::size_t i, std::size_t j, std::size_t n) {
  const double d = std::abs(static_cast<double>(i) - static_cast<double>(j)) /
                   static_cast<double>(n);
  const double w = std::min(d, 1.0 - d);
  return 0.5 * w * w;
}

}  // namespace oracle
