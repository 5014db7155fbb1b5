#pragma once

// Local factors F_t(m) = m #C(m,t) / #G(m) and the Euler product F(t).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cstlab/errors.hpp"
#include "cstlab/gl2_counts.hpp"
#include "cstlab/primes.hpp"

namespace cstlab {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

enum class Provenance { closed_form, enumeration, plug_in };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed-form";
    case Provenance::enumeration: return "enumeration";
    case Provenance::plug_in: return "plug-in";
  }
  return "unknown";
}

struct LocalFactorValue {
  std::uint64_t ell = 0;
  int k = 0;
  std::int64_t t = 0;
  Rational value;
  Provenance provenance = Provenance::closed_form;
};

/// F_t(ell^k) by enumeration over GL2(Z/ell^k).
inline LocalFactorValue local_factor_bruteforce(std::uint64_t ell, int k, std::int64_t t,
                                                std::uint64_t cap = kEnumerationCap) {
  if (!is_prime(ell)) throw DomainError("local_factor_bruteforce: ell must be prime");
  if (k < 0) throw DomainError("local_factor_bruteforce: k must be >= 0");
  std::uint64_t m = 1;
  for (int i = 0; i < k; ++i) {
    m *= ell;
    if (m > cap) {
      throw ResourceError("local_factor_bruteforce: " + std::to_string(ell) + "^" + std::to_string(k) +
                          " exceeds enumeration cap " + std::to_string(cap));
    }
  }
  return {ell, k, t, Rational(m) * class_fraction(trace_det_table_direct(m, cap), t), Provenance::enumeration};
}

/// The stable local factor F_t(ell^{v+1}), v = v_ell(t), in closed form:
///   ell does not divide t:  ell (ell^4 - ell^3 - 2 ell^2 + ell + 2) / ((ell^2 - 1)^2 (ell - 1))
///   otherwise:              (ell^2 (ell^3 + ell^2 - ell - 2) - ell^{1-2v} (ell^2 + ell + 1))
///                           / ((ell^2 - 1)^2 (ell + 1))
inline LocalFactorValue local_factor_universal(std::uint64_t ell, std::int64_t t) {
  if (t == 0) throw DomainError("local_factor_universal: t must be nonzero (t in Z \\ {0})");
  if (!is_prime(ell)) throw DomainError("local_factor_universal: ell must be prime");
  const int v = valuation(t, static_cast<std::int64_t>(ell));
  const BigInt l = ell;
  const BigInt l2m1 = l * l - 1;
  Rational value;
  if (v == 0) {
    value = Rational(l * (l * l * l * l - l * l * l - 2 * l * l + l + 2), l2m1 * l2m1 * (l - 1));
  } else {
    const BigInt lodd = boost::multiprecision::pow(l, static_cast<unsigned>(2 * v - 1));
    value = Rational(lodd * l * l * (l * l * l + l * l - l - 2) - (l * l + l + 1),
                     lodd * l2m1 * l2m1 * (l + 1));
  }
  return {ell, v + 1, t, value, Provenance::closed_form};
}

/// m_{A,t} = m_A prod_{l | m_A} l^{v_l(t)}.
inline std::uint64_t entanglement_modulus(std::uint64_t m_A, std::int64_t t) {
  if (m_A == 0) throw DomainError("m_A must be >= 1");
  if (t == 0) throw DomainError("t must be nonzero (t in Z \\ {0})");
  std::uint64_t r = m_A;
  for (auto [l, e] : factor_small(m_A)) {
    for (int i = valuation(t, static_cast<std::int64_t>(l)); i > 0; --i) r *= l;
  }
  return r;
}

/// Primes scanned for the tail constant (the first 1229 primes, i.e. those < 10^4).
inline constexpr std::uint64_t kTailScanLimit = 10000;

/// max |F_t(l^{v+1}) - 1| l^2 over scanned primes l not dividing m_A, plus prime divisors of t.
inline Rational tail_constant(std::int64_t t, std::uint64_t m_A = 1) {
  std::vector<std::uint64_t> ls;
  for (auto l : sieve_primes(kTailScanLimit)) ls.push_back(l);
  const auto abs_t = static_cast<std::uint64_t>(t < 0 ? -t : t);
  for (auto [l, e] : factor_small(abs_t)) ls.push_back(l);
  Rational best = 0;
  for (auto l : ls) {
    if (m_A % l == 0) continue;
    Rational dev = local_factor_universal(l, t).value - 1;
    if (dev < 0) dev = -dev;
    best = std::max(best, Rational(dev * l * l));
  }
  return best;
}

struct EulerProductResult {
  std::int64_t t = 0;
  std::uint64_t m_A = 1;
  std::uint64_t cutoff = 0;
  HighPrecision value = 0;
  double tail_bound = 0.0;
  std::vector<LocalFactorValue> factors;

  double value_double() const { return value.convert_to<double>(); }
};

struct EulerProductOptions {
  std::uint64_t cap = kEnumerationCap;
  /// Externally computed F_t(m_{A,t}); replaces the full-image enumeration.
  std::optional<Rational> nonuniversal_factor;
};

/// F(t) truncated at primes <= cutoff:
///   F_t(m_{A,t}) * prod_{l <= cutoff, l not dividing m_A} F_t(l^{v_l(t)+1}),
/// with a bound on |F(t) - value| from |F_t(l) - 1| <= C / l^2 and sum_{l > L} 1/l^2 <= 1/(L - 1).
inline EulerProductResult euler_product_F(std::int64_t t, std::uint64_t m_A, std::uint64_t cutoff,
                                          const EulerProductOptions& opt = {}) {
  if (t == 0) throw DomainError("euler_product_F: t must be nonzero (t in Z \\ {0})");
  if (m_A == 0) throw DomainError("euler_product_F: m_A must be >= 1");
  if (cutoff < 2) throw DomainError("euler_product_F: cutoff must be >= 2");

  EulerProductResult res;
  res.t = t;
  res.m_A = m_A;
  res.cutoff = cutoff;
  HighPrecision value = 1;

  if (m_A > 1) {
    const std::uint64_t mat = entanglement_modulus(m_A, t);
    if (opt.nonuniversal_factor) {
      if (*opt.nonuniversal_factor < 0) throw DomainError("euler_product_F: plug-in factor must be >= 0");
      res.factors.push_back({mat, 1, t, *opt.nonuniversal_factor, Provenance::plug_in});
      value *= HighPrecision(*opt.nonuniversal_factor);
    } else {
      for (auto [l, e] : factor_small(mat)) {
        std::uint64_t q = 1;
        for (int i = 0; i < e; ++i) q *= l;
        if (q > opt.cap) {
          throw ResourceError("euler_product_F: m_{A,t} = " + std::to_string(mat) + " has prime power " +
                              std::to_string(q) + " above the enumeration cap " + std::to_string(opt.cap) +
                              "; use a smaller m_A or supply a precomputed F_t(m_{A,t})");
        }
        auto f = local_factor_bruteforce(l, e, t, opt.cap);
        value *= HighPrecision(f.value);
        res.factors.push_back(std::move(f));
      }
    }
  }

  for (std::uint64_t l : sieve_primes(cutoff)) {
    if (m_A % l == 0) continue;
    auto f = local_factor_universal(l, t);
    value *= HighPrecision(f.value);
    res.factors.push_back(std::move(f));
  }
  res.value = value;

  const double C = tail_constant(t, m_A).convert_to<double>();
  const double tail_sum = C / static_cast<double>(cutoff - 1);
  res.tail_bound = value.convert_to<double>() * std::expm1(tail_sum);
  return res;
}

struct ConvergencePoint {
  int n = 0;
  Rational value;  // F_t(m_n), m_n = prod_{l <= n} l^n
};

/// F_t(m_n) for n = 1..n_max, prime by prime: enumeration where l^n fits under the
/// cap, otherwise the stable factor once n >= v_l(t) + 1.
inline std::vector<ConvergencePoint> f_convergence_sequence(std::int64_t t, int n_max,
                                                            std::uint64_t cap = kEnumerationCap) {
  if (t == 0) throw DomainError("f_convergence_sequence: t must be nonzero (t in Z \\ {0})");
  if (n_max < 1) throw DomainError("f_convergence_sequence: n_max must be >= 1");
  std::vector<ConvergencePoint> out;
  for (int n = 1; n <= n_max; ++n) {
    Rational value = 1;
    for (std::uint64_t l : sieve_primes(static_cast<std::uint64_t>(n))) {
      double q = std::pow(static_cast<double>(l), n);
      if (q <= static_cast<double>(cap)) {
        value *= local_factor_bruteforce(l, n, t, cap).value;
      } else if (n >= valuation(t, static_cast<std::int64_t>(l)) + 1) {
        value *= local_factor_universal(l, t).value;
      } else {
        throw ResourceError("f_convergence_sequence: " + std::to_string(l) + "^" + std::to_string(n) +
                            " is above the cap and below the stable exponent");
      }
    }
    out.push_back({n, value});
  }
  return out;
}

}  // namespace cstlab
