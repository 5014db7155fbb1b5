#pragma once

// Monte-Carlo sampling of traces of Haar-random SU(2) elements.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "cstlab/errors.hpp"
#include "cstlab/st_density.hpp"

namespace cstlab {

/// n i.i.d. draws from the semicircle density sqrt(4 - u^2) / (2 pi) on [-2, 2],
/// by rejection from the uniform envelope. Deterministic given the seed.
inline std::vector<double> semicircle_sample(std::uint64_t seed, std::size_t n) {
  if (n == 0) throw DomainError("semicircle_sample: n must be >= 1");
  std::mt19937_64 gen(seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double u = 4.0 * unit() - 2.0;
    const double v = unit();
    if (v * v <= 1.0 - 0.25 * u * u) out.push_back(u);
  }
  return out;
}

/// (u1 + u2) / 4 for independent semicircle pairs: samples of Phi.
inline std::vector<double> phi_sample(std::uint64_t seed, std::size_t n) {
  std::vector<double> u = semicircle_sample(seed, 2 * n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.25 * (u[2 * i] + u[2 * i + 1]);
  return out;
}

/// Kolmogorov-Smirnov statistic of a sample against the CDF of Phi.
inline double ks_statistic(std::vector<double> z, const PhiCdf& cdf = phi_cdf()) {
  if (z.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = cdf(z[i]);
    d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  return std::min(1.0, d);
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Pearson chi-square of a sample against Phi over equal-mass bins.
inline ChiSquareResult chi_square_vs_phi(const std::vector<double>& z, int bins, const PhiCdf& cdf = phi_cdf()) {
  if (bins < 2) throw DomainError("chi_square_vs_phi: need at least 2 bins");
  std::vector<double> edges(static_cast<std::size_t>(bins) - 1);
  for (int k = 1; k < bins; ++k) edges[static_cast<std::size_t>(k) - 1] = cdf.quantile(static_cast<double>(k) / bins);
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : z) {
    counts[static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin())]++;
  }
  const double expected = static_cast<double>(z.size()) / bins;
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  const boost::math::chi_squared dist(bins - 1);
  return {stat, bins - 1, boost::math::cdf(boost::math::complement(dist, stat))};
}

struct MonteCarloSummary {
  std::size_t draws = 0;
  double mean = 0.0;
  double second_moment = 0.0;
  ChiSquareResult chi_square;
  double ks = 0.0;
};

/// Moments of single semicircle draws, and chi-square / KS of paired draws against Phi.
inline MonteCarloSummary monte_carlo_phi(std::uint64_t seed, std::size_t n, int bins = 50) {
  MonteCarloSummary s;
  s.draws = n;
  const std::vector<double> u = semicircle_sample(seed, 2 * n);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m1 += u[i];
    m2 += u[i] * u[i];
  }
  s.mean = m1 / static_cast<double>(n);
  s.second_moment = m2 / static_cast<double>(n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = 0.25 * (u[2 * i] + u[2 * i + 1]);
  s.chi_square = chi_square_vs_phi(z, bins);
  s.ks = ks_statistic(std::move(z));
  return s;
}

}  // namespace cstlab
