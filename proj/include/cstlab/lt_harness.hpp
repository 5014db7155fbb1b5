#pragma once

// Empirical side: joint congruence/interval prime counts, Chebotarev-Sato-Tate
// predictions, the error term E(x, t, m, I), and Lang-Trotter counts.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cstlab/curve.hpp"
#include "cstlab/errors.hpp"
#include "cstlab/gl2_counts.hpp"
#include "cstlab/semicircle.hpp"
#include "cstlab/st_density.hpp"

namespace cstlab {

struct CountQuery {
  double x = 2.0;
  std::int64_t t = 0;
  std::uint64_t m = 1;
  IntervalSpec interval{-1.0, 1.0};

  static CountQuery make(double x, std::int64_t t, std::uint64_t m, IntervalSpec I) {
    if (!(x >= 2.0)) throw DomainError("CountQuery: x must be >= 2");
    if (m < 1) throw DomainError("CountQuery: m must be >= 1");
    return {x, t, m, I};
  }
};

namespace detail {

inline bool congruent(std::int64_t a, std::int64_t t, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  const std::int64_t r = (a - t) % mm;
  return r == 0;
}

// sign(a^2 - 16 h^2 p) for h >= 0, exactly.
inline int compare_square(std::int64_t a, double h, std::int64_t p) {
  const long double lhs = static_cast<long double>(a) * a;
  const long double rhs = 16.0L * h * h * p;
  const long double gap = lhs - rhs;
  if (std::fabs(gap) > 1e-12L * (lhs + rhs)) return gap > 0 ? 1 : -1;
  int e = 0;
  const double frac = std::frexp(h, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  e -= 53;  // h = mant * 2^e
  BigInt L = BigInt(a) * a;
  BigInt R = BigInt(mant) * mant * p * 16;
  if (e < 0) L <<= static_cast<unsigned>(-2 * e);
  else R <<= static_cast<unsigned>(2 * e);
  return L == R ? 0 : (L > R ? 1 : -1);
}

}  // namespace detail

/// a / (4 sqrt p) in I, decided without rounding.
inline bool normalized_trace_in(std::int64_t a, std::int64_t p, const IntervalSpec& I) {
  bool upper, lower;
  if (a > 0) {
    const int c = detail::compare_square(a, I.hi, p);
    upper = I.open ? c < 0 : c <= 0;
  } else {
    upper = I.open ? (a < 0 || I.hi > 0) : true;
  }
  if (a < 0) {
    const int c = detail::compare_square(a, -I.lo, p);
    lower = I.open ? c < 0 : c <= 0;
  } else {
    lower = I.open ? (a > 0 || I.lo < 0) : true;
  }
  return upper && lower;
}

namespace detail {

template <class Pred>
std::uint64_t fold_count(std::span<const TraceRecord> records, double x, Pred pred) {
  std::uint64_t n = 0;
  std::int64_t last = 0;
  for (const auto& r : records) {
    if (r.p <= last) throw DomainError("record stream is not ascending in p at p = " + std::to_string(r.p));
    last = r.p;
    if (static_cast<double>(r.p) > x) break;
    if (pred(r)) ++n;
  }
  return n;
}

}  // namespace detail

/// #{p <= x, p > p_floor : a1p = t mod m, a1p / (4 sqrt p) in I}.
inline std::uint64_t count_joint(std::span<const TraceRecord> records, const CountQuery& q, double p_floor = 0.0) {
  return detail::fold_count(records, q.x, [&](const TraceRecord& r) {
    return static_cast<double>(r.p) > p_floor && detail::congruent(r.a1p, q.t, q.m) &&
           normalized_trace_in(r.a1p, r.p, q.interval);
  });
}

/// pi_A(x, t) = #{p <= x : a1p = t} over the (good-prime) records.
inline std::uint64_t pi_A_count(std::span<const TraceRecord> records, double x, std::int64_t t) {
  return detail::fold_count(records, x, [t](const TraceRecord& r) { return r.a1p == t; });
}

/// The open interval I = (-(m-|t|)/(4 sqrt x), (m-|t|)/(4 sqrt x)) and threshold
/// x t^2 / (m-|t|)^2 above which the joint condition forces a1p = t.
struct ExactMatchWindow {
  IntervalSpec interval;
  double p_threshold = 0.0;
};

/// Preset `theorem4-window`; requires |t| x^{1/4} < m < sqrt(x) / log(x).
inline ExactMatchWindow theorem4_window(double x, std::int64_t t, std::uint64_t m) {
  if (t == 0) throw DomainError("theorem4-window: t must be nonzero");
  if (!(x > 1.0)) throw DomainError("theorem4-window: x must be > 1");
  const double at = std::fabs(static_cast<double>(t));
  const double md = static_cast<double>(m);
  if (!(at * std::pow(x, 0.25) < md && md < std::sqrt(x) / std::log(x))) {
    throw DomainError("theorem4-window: m must satisfy |t| x^{1/4} < m < sqrt(x)/log(x)");
  }
  const double half = (md - at) / (4.0 * std::sqrt(x));
  return {IntervalSpec::make(-half, half, true), x * at * at / ((md - at) * (md - at))};
}

/// class_fraction(m, t) * int_I Phi.
inline double cst_prediction(std::uint64_t m, std::int64_t t, const IntervalSpec& I) {
  const double mass = integrate_phi(I);
  if (mass == 0.0) return 0.0;
  return class_fraction(m, t).convert_to<double>() * mass;
}

struct RegimeFlags {
  bool delta_window = false;
  bool m_lower = false;
  bool m_upper = false;
  std::string notes;

  bool ok() const noexcept { return delta_window && m_lower && m_upper; }
};

inline constexpr double kDefaultC1 = 1.0;
inline constexpr double kDefaultC2 = 1.0;

/// delta(I) < 1/sqrt(log m) and C1 (log x)^2 < m <= C2 delta(I) sqrt(x).
inline RegimeFlags regime_check(double x, std::int64_t t, std::uint64_t m, const IntervalSpec& I,
                                double C1 = kDefaultC1, double C2 = kDefaultC2) {
  (void)t;
  if (!(C1 > 0.0 && C2 > 0.0)) throw DomainError("regime_check: C1, C2 must be > 0");
  RegimeFlags f;
  const double md = static_cast<double>(m);
  const double delta = I.delta();
  if (m == 1) {
    f.delta_window = true;
    f.notes = "m = 1: log m = 0, delta window vacuously true";
  } else {
    f.delta_window = delta * std::sqrt(std::log(md)) < 1.0;
  }
  const double lx = std::log(x);
  f.m_lower = C1 * lx * lx < md;
  f.m_upper = md <= C2 * delta * std::sqrt(x);
  return f;
}

/// (Phi(0)/2) F sqrt(x) / log x.
inline double lt_prediction(double x, std::int64_t t, double F_value) {
  if (t == 0) throw DomainError("lt_prediction: t must be nonzero (t in Z \\ {0})");
  if (!(x > 1.0)) throw DomainError("lt_prediction: x must be > 1");
  return 0.5 * kPhiZero * F_value * std::sqrt(x) / std::log(x);
}

struct FEstimate {
  double value = 0.0;
  double tail_bound = 0.0;
};

struct ExperimentReport {
  CountQuery query;
  std::uint64_t raw_count = 0;
  std::uint64_t pi_x = 0;
  double empirical_ratio = 0.0;
  double prediction = 0.0;
  double error_value = 0.0;
  double main_term_eq5 = 0.0;
  RegimeFlags regime;
  FEstimate F;
  std::string notes;

  bool regime_ok() const noexcept { return regime.ok(); }
};

/// Fill a report for one (x, t, m, I) cell. `pi_x` is the plain prime count pi(x).
inline ExperimentReport error_term(std::span<const TraceRecord> records, const CountQuery& q, std::uint64_t pi_x,
                                   const FEstimate& F, double C1 = kDefaultC1, double C2 = kDefaultC2) {
  if (pi_x == 0) throw DomainError("error_term: pi(x) must be positive");
  ExperimentReport r;
  r.query = q;
  r.raw_count = count_joint(records, q);
  r.pi_x = pi_x;
  r.empirical_ratio = static_cast<double>(r.raw_count) / static_cast<double>(pi_x);
  r.prediction = cst_prediction(q.m, q.t, q.interval);
  r.error_value = r.empirical_ratio - r.prediction;
  r.main_term_eq5 = kPhiZero * F.value * q.interval.delta() / static_cast<double>(q.m);
  r.regime = regime_check(q.x, q.t, q.m, q.interval, C1, C2);
  r.F = F;
  r.notes = r.regime.notes;
  if (q.m > 1 && q.interval.delta() > 0) {
    const double scaled = std::fabs(r.error_value) * static_cast<double>(q.m) * std::log(static_cast<double>(q.m)) /
                          q.interval.delta();
    if (!r.notes.empty()) r.notes += "; ";
    r.notes += "scaled_error=" + std::to_string(scaled);
  }
  return r;
}

/// KS distance between {a1p / (4 sqrt p) : p <= x} and the law Phi. Order of records is irrelevant.
inline double ks_distance(std::span<const TraceRecord> records, double x, const PhiCdf& cdf = phi_cdf()) {
  std::vector<double> z;
  for (const auto& r : records) {
    if (static_cast<double>(r.p) > x) continue;
    z.push_back(static_cast<double>(r.a1p) / (4.0 * std::sqrt(static_cast<double>(r.p))));
  }
  if (z.empty()) throw DomainError("ks_distance: no records with p <= x");
  return ks_statistic(std::move(z), cdf);
}

}  // namespace cstlab
