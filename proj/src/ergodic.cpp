#include "tropikam/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace tropikam {

namespace {

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Sampler {
  std::vector<std::vector<std::size_t>> next;
  std::vector<std::vector<double>> cumulative;

  explicit Sampler(const MarkovRealization& mr)
      : next(mr.size()), cumulative(mr.size()) {
    for (std::size_t x : mr.domain) {
      double acc = 0.0;
      for (std::size_t y = 0; y < mr.size(); ++y) {
        if (mr.kernel(x, y) <= 0.0) continue;
        acc += mr.kernel(x, y);
        next[x].push_back(y);
        cumulative[x].push_back(acc);
      }
    }
  }

  static std::size_t draw(const std::vector<std::size_t>& items,
                          const std::vector<double>& cum, std::mt19937_64& rng) {
    const double u = unit(rng) * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()),
                                         items.size() - 1);
    return items[k];
  }

  std::size_t step(std::size_t x, std::mt19937_64& rng) const {
    if (next[x].empty())
      throw PreconditionError("sample_orbit: point " + std::to_string(x) +
                              " lies outside the chain's domain");
    return draw(next[x], cumulative[x], rng);
  }
};

std::size_t draw_from(const Measure& mu, std::mt19937_64& rng) {
  std::vector<std::size_t> items;
  std::vector<double> cum;
  double acc = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (mu[x] <= 0.0) continue;
    acc += mu[x];
    items.push_back(x);
    cum.push_back(acc);
  }
  if (items.empty()) throw PreconditionError("sample_orbit: start law has no mass");
  return Sampler::draw(items, cum, rng);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MarkovRealization markov_from_coupling(const StationaryCoupling& eta, const Tolerances& tol) {
  const std::size_t n = eta.eta.rows();
  MarkovRealization mr{eta.marginal, Matrix(n, n, 0.0), {}};
  for (std::size_t x = 0; x < n; ++x) {
    const double mu = eta.marginal[x];
    if (mu <= tol.mass) continue;
    mr.domain.push_back(x);
    for (std::size_t y = 0; y < n; ++y) mr.kernel(x, y) = std::max(0.0, eta.eta(x, y)) / mu;
  }
  return mr;
}

OrbitSample sample_orbit(const MarkovRealization& mr, const Measure& start, std::size_t length,
                         std::uint64_t seed) {
  if (length == 0) throw PreconditionError("sample_orbit: length must be at least 1");
  if (start.size() != mr.size()) throw DimensionError("sample_orbit: start law size mismatch");
  const Sampler sampler(mr);
  std::mt19937_64 rng(seed);
  OrbitSample orbit;
  orbit.path.reserve(length);
  orbit.path.push_back(draw_from(start, rng));
  while (orbit.path.size() < length) orbit.path.push_back(sampler.step(orbit.path.back(), rng));
  return orbit;
}

OrbitSample sample_orbit(const MarkovRealization& mr, std::size_t length, std::uint64_t seed) {
  return sample_orbit(mr, mr.stationary, length, seed);
}

BirkhoffStatistics birkhoff_statistics(const OrbitSample& orbit, const CostKernel& a) {
  if (orbit.length() < 2) throw PreconditionError("birkhoff_average: orbit needs two points");
  BirkhoffStatistics s;
  s.steps = orbit.length() - 1;
  // Welford's update keeps the variance accurate for long orbits.
  double m2 = 0.0;
  for (std::size_t j = 0; j < s.steps; ++j) {
    const double v = a(orbit.path[j], orbit.path[j + 1]);
    const double delta = v - s.mean;
    s.mean += delta / static_cast<double>(j + 1);
    m2 += delta * (v - s.mean);
  }
  s.sigma = s.steps > 1 ? std::sqrt(m2 / static_cast<double>(s.steps - 1)) : 0.0;
  return s;
}

double birkhoff_average(const OrbitSample& orbit, const CostKernel& a) {
  return birkhoff_statistics(orbit, a).mean;
}

double BirkhoffStatistics::tolerance(double floor) const {
  return std::max(floor, 3.0 * sigma / std::sqrt(static_cast<double>(std::max<std::size_t>(steps, 1))));
}

OrbitSample orbit_in_d(const BarrierData& bd, std::size_t x0, std::size_t length) {
  if (length == 0) throw PreconditionError("orbit_in_d: length must be at least 1");
  if (!bd.in_aubry(x0))
    throw PreconditionError("orbit_in_d: start point " + std::to_string(x0) +
                            " is not in the Aubry set");
  const std::size_t n = bd.size();
  std::vector<std::size_t> succ(n, n);
  for (auto it = bd.d_edges.rbegin(); it != bd.d_edges.rend(); ++it) succ[it->first] = it->second;
  OrbitSample orbit{{x0}};
  orbit.path.reserve(length);
  while (orbit.path.size() < length) {
    const std::size_t y = succ[orbit.path.back()];
    if (y == n)
      throw InconsistencyError("orbit_in_d: point " + std::to_string(orbit.path.back()) +
                               " has no D-successor");
    orbit.path.push_back(y);
  }
  return orbit;
}

Matrix pair_frequencies(const OrbitSample& orbit, std::size_t n) {
  Matrix f(n, n, 0.0);
  if (orbit.length() < 2) return f;
  const double w = 1.0 / static_cast<double>(orbit.length() - 1);
  for (std::size_t j = 0; j + 1 < orbit.length(); ++j) f(orbit.path[j], orbit.path[j + 1]) += w;
  return f;
}

Measure occupation_frequencies(const OrbitSample& orbit, std::size_t n) {
  std::vector<double> f(n, 0.0);
  const double w = 1.0 / static_cast<double>(std::max<std::size_t>(orbit.length(), 1));
  for (std::size_t x : orbit.path) f[x] += w;
  return Measure(std::move(f));
}

double total_variation(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw DimensionError("total_variation: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.values().size(); ++i)
    s += std::abs(p.values()[i] - q.values()[i]);
  return 0.5 * s;
}

double total_variation(const Measure& p, const Measure& q) {
  if (p.size() != q.size()) throw DimensionError("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

std::vector<std::vector<std::size_t>> recurrent_classes(const MarkovRealization& mr) {
  const std::size_t n = mr.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t s : mr.domain) {
    std::vector<std::size_t> stack{s};
    reach[s][s] = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y)
        if (mr.kernel(x, y) > 0.0 && !reach[s][y]) {
          reach[s][y] = 1;
          stack.push_back(y);
        }
    }
  }
  std::vector<std::vector<std::size_t>> classes;
  std::vector<char> placed(n, 0);
  for (std::size_t s : mr.domain) {
    if (placed[s]) continue;
    std::vector<std::size_t> cls;
    bool closed = true;
    for (std::size_t y = 0; y < n; ++y) {
      if (!reach[s][y]) continue;
      if (reach[y][s]) {
        cls.push_back(y);
      } else {
        closed = false;
      }
    }
    for (std::size_t y : cls) placed[y] = 1;
    if (closed) classes.push_back(std::move(cls));
  }
  return classes;
}

ErgodicResult check_ergodic(const CostKernel& a, const StationaryCoupling& eta,
                            const ErgodicOptions& opt, const Tolerances& tol) {
  const std::size_t n = a.size();
  if (eta.eta.rows() != n) throw DimensionError("check_ergodic: size mismatch");
  const MarkovRealization mr = markov_from_coupling(eta, tol);
  const auto classes = recurrent_classes(mr);

  ErgodicResult out;
  out.space_average = eta.cost(a.costs());
  out.classes = classes.size();
  Matrix pairs(n, n, 0.0);
  std::vector<double> occupation(n, 0.0);
  double variance = 0.0;
  double covered = 0.0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    double w = 0.0;
    for (std::size_t x : classes[k]) w += mr.stationary[x];
    if (w <= 0.0) continue;
    covered += w;
    std::vector<double> start(n, 0.0);
    for (std::size_t x : classes[k]) start[x] = mr.stationary[x] / w;
    const OrbitSample orbit =
        sample_orbit(mr, Measure(std::move(start)), opt.length, derive_seed(opt.seed, k));
    const BirkhoffStatistics st = birkhoff_statistics(orbit, a);
    out.average += w * st.mean;
    variance += w * w * st.sigma * st.sigma / static_cast<double>(st.steps);
    const Matrix f = pair_frequencies(orbit, n);
    for (std::size_t i = 0; i < f.values().size(); ++i) pairs.values()[i] += w * f.values()[i];
    const Measure occ = occupation_frequencies(orbit, n);
    for (std::size_t x = 0; x < n; ++x) occupation[x] += w * occ[x];
  }
  if (std::abs(covered - 1.0) > 1e-6)
    throw InconsistencyError("check_ergodic: recurrent classes carry mass " +
                             std::to_string(covered) + " instead of 1");
  out.statistical_tolerance = std::max(opt.floor, 3.0 * std::sqrt(variance));
  out.pair_tv = total_variation(pairs, eta.eta);
  out.occupation_tv = total_variation(Measure(std::move(occupation)), eta.marginal);

  out.report.add("birkhoff_matches_space_average", std::abs(out.average - out.space_average),
                 out.statistical_tolerance,
                 std::to_string(out.classes) + " recurrent class(es)");
  out.report.add("pair_frequencies", out.pair_tv, opt.tv_tolerance);
  out.report.add("occupation_frequencies", out.occupation_tv, opt.tv_tolerance);
  return out;
}

}  // namespace tropikam
