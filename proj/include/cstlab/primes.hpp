#pragma once

// Prime generation, primality and small factorization helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "cstlab/errors.hpp"

namespace cstlab {

using BigInt = boost::multiprecision::cpp_int;

/// floor(sqrt(n)) computed exactly.
constexpr std::uint64_t isqrt(std::uint64_t n) {
  if (n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Default ceiling on the sieve's working set plus output, in bytes.
inline constexpr std::uint64_t kDefaultSieveBudget = std::uint64_t{1} << 31;

/// Ascending list of primes <= x, by a segmented sieve of Eratosthenes.
/// Throws ResourceError when the estimated output would exceed `budget_bytes`.
inline std::vector<std::uint32_t> sieve_primes(std::uint64_t x,
                                               std::uint64_t budget_bytes = kDefaultSieveBudget) {
  std::vector<std::uint32_t> out;
  if (x < 2) return out;
  if (x > 0xFFFFFFFFull) throw ResourceError("sieve_primes: x exceeds 2^32 - 1");
  const double est = 1.26 * static_cast<double>(x) / std::log(static_cast<double>(x)) + 16.0;
  if (est * sizeof(std::uint32_t) + 65536.0 > static_cast<double>(budget_bytes)) {
    throw ResourceError("sieve_primes: x = " + std::to_string(x) +
                        " exceeds memory budget of " + std::to_string(budget_bytes) + " bytes");
  }
  out.reserve(static_cast<std::size_t>(est));

  const std::uint64_t root = isqrt(x);
  std::vector<std::uint8_t> small(root + 1, 1);
  std::vector<std::uint32_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<std::uint8_t> seg(kSegment);
  for (std::uint64_t lo = 2; lo <= x; lo += kSegment) {
    const std::uint64_t hi = std::min(x, lo + kSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::uint32_t q : base) {
      const std::uint64_t qq = std::uint64_t{q} * q;
      if (qq > hi) break;
      std::uint64_t start = std::max(qq, (lo + q - 1) / q * q);
      for (std::uint64_t j = start; j <= hi; j += q) seg[j - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (seg[n - lo]) out.push_back(static_cast<std::uint32_t>(n));
    }
  }
  return out;
}

/// pi(x), the number of primes <= x.
inline std::uint64_t prime_count(std::uint64_t x) { return sieve_primes(x).size(); }

namespace detail {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, b, m);
    b = mulmod64(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Exponent of prime `ell` in nonzero `n`.
inline int valuation(std::int64_t n, std::int64_t ell) {
  if (n == 0) throw DomainError("valuation of zero is undefined");
  int v = 0;
  while (n % ell == 0) {
    n /= ell;
    ++v;
  }
  return v;
}

/// Prime-power factorization of n >= 1 by trial division, ascending primes.
inline std::vector<std::pair<std::uint64_t, int>> factor_small(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q) continue;
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace detail {

inline BigInt pollard_brent(const BigInt& n, unsigned seed) {
  if (n % 2 == 0) return BigInt(2);
  for (unsigned c = seed;; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    const BigInt cc = c;
    std::uint64_t r = 1;
    constexpr std::uint64_t m = 64;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = (y * y + cc) % n;
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = (y * y + cc) % n;
          q = q * (x > y ? x - y : y - x) % n;
        }
        g = boost::multiprecision::gcd(q, n);
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = (ys * ys + cc) % n;
        g = boost::multiprecision::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_big_into(BigInt n, std::vector<BigInt>& primes) {
  if (n == 1) return;
  if (boost::multiprecision::miller_rabin_test(n, 30)) {
    primes.push_back(n);
    return;
  }
  const BigInt d = pollard_brent(n, 1);
  factor_big_into(d, primes);
  factor_big_into(n / d, primes);
}

}  // namespace detail

/// Distinct prime divisors of |n| (n != 0), ascending.
inline std::vector<BigInt> prime_divisors(BigInt n) {
  if (n == 0) throw DomainError("prime_divisors of zero");
  if (n < 0) n = -n;
  std::vector<BigInt> out;
  for (std::uint32_t q = 2; q < 10000 && BigInt(q) * q <= n; ++q) {
    if (n % q != 0) continue;
    out.emplace_back(q);
    while (n % q == 0) n /= q;
  }
  std::vector<BigInt> rest;
  detail::factor_big_into(n, rest);
  out.insert(out.end(), rest.begin(), rest.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace cstlab
