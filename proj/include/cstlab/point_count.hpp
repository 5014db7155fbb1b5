#pragma once

// Trace of Frobenius a_p = p + 1 - #E(F_p): exhaustive enumeration and
// baby-step/giant-step order finding in the Hasse interval.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cstlab/curve.hpp"
#include "cstlab/errors.hpp"
#include "cstlab/primes.hpp"
#include "cstlab/random.hpp"

namespace cstlab {

/// Largest prime supported by the 64-bit field arithmetic below.
inline constexpr std::uint64_t kMaxFieldPrime = 0xFFFFFFFFull;

namespace detail {

/// Reduce a big integer into [0, p).
inline std::uint64_t reduce(const BigInt& v, std::uint64_t p) {
  BigInt r = v % p;
  if (r < 0) r += p;
  return r.convert_to<std::uint64_t>();
}

inline std::uint64_t reduce(std::int64_t v, std::uint64_t p) {
  const auto m = static_cast<std::int64_t>(p);
  std::int64_t r = v % m;
  return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

/// Arithmetic in F_p for p < 2^32.
struct Fp {
  std::uint64_t p;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
  std::uint64_t pow(std::uint64_t b, std::uint64_t e) const {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const {
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr) {
      const std::int64_t q = r / nr;
      std::tie(t, nt) = std::make_pair(nt, t - q * nt);
      std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
  }
  /// Legendre symbol as -1, 0, 1 (odd p).
  int legendre(std::uint64_t a) const {
    if (a == 0) return 0;
    return pow(a, (p - 1) / 2) == 1 ? 1 : -1;
  }
  /// Square root of a quadratic residue by Tonelli-Shanks.
  std::uint64_t sqrt(std::uint64_t a) const {
    if (a == 0) return 0;
    if (p % 4 == 3) return pow(a, (p + 1) / 4);
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    std::uint64_t z = 2;
    while (legendre(z) != -1) ++z;
    std::uint64_t m = static_cast<std::uint64_t>(s), c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
    while (t != 1) {
      std::uint64_t i = 0, tt = t;
      while (tt != 1) {
        tt = mul(tt, tt);
        ++i;
      }
      std::uint64_t b = c;
      for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mul(b, b);
      m = i;
      c = mul(b, b);
      t = mul(t, c);
      r = mul(r, b);
    }
    return r;
  }
};

struct Point {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  bool inf = true;
};

/// Short Weierstrass curve y^2 = x^3 + A x + B over F_p.
struct ShortCurve {
  Fp f;
  std::uint64_t A;
  std::uint64_t B;

  std::uint64_t rhs(std::uint64_t x) const { return f.add(f.mul(f.add(f.mul(x, x), A), x), B); }

  Point neg(const Point& P) const { return P.inf ? P : Point{P.x, P.y == 0 ? 0 : f.p - P.y, false}; }

  Point add(const Point& P, const Point& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    std::uint64_t lambda;
    if (P.x == Q.x) {
      if (P.y != Q.y || P.y == 0) return Point{};
      const std::uint64_t num = f.add(f.mul(3, f.mul(P.x, P.x)), A);
      lambda = f.mul(num, f.inv(f.add(P.y, P.y)));
    } else {
      lambda = f.mul(f.sub(Q.y, P.y), f.inv(f.sub(Q.x, P.x)));
    }
    const std::uint64_t x3 = f.sub(f.sub(f.mul(lambda, lambda), P.x), Q.x);
    const std::uint64_t y3 = f.sub(f.mul(lambda, f.sub(P.x, x3)), P.y);
    return Point{x3, y3, false};
  }

  Point mul(std::uint64_t k, Point P) const {
    Point R;
    while (k) {
      if (k & 1) R = add(R, P);
      P = add(P, P);
      k >>= 1;
    }
    return R;
  }

  Point random_point(SplitMix64& rng) const {
    for (;;) {
      const std::uint64_t x = rng.below(f.p);
      const std::uint64_t r = rhs(x);
      if (r == 0) return Point{x, 0, false};
      if (f.legendre(r) != 1) continue;
      std::uint64_t y = f.sqrt(r);
      if (rng() & 1) y = f.p - y;
      return Point{x, y, false};
    }
  }
};

/// Short model y^2 = x^3 - 27 c4 x - 54 c6 of E over F_p, p > 3.
inline ShortCurve short_model(const EllipticCurveQ& E, std::uint64_t p) {
  const BigInt a1 = E.a1(), a2 = E.a2(), a3 = E.a3(), a4 = E.a4(), a6 = E.a6();
  const BigInt b2 = a1 * a1 + 4 * a2;
  const BigInt b4 = 2 * a4 + a1 * a3;
  const BigInt b6 = a3 * a3 + 4 * a6;
  const BigInt c4 = b2 * b2 - 24 * b4;
  const BigInt c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
  return ShortCurve{Fp{p}, reduce(BigInt(-27 * c4), p), reduce(BigInt(-54 * c6), p)};
}

/// Smallest positive multiple of ord(P) hit inside the Hasse interval, via BSGS.
inline std::optional<std::uint64_t> hasse_multiple(const ShortCurve& C, const Point& P) {
  const std::uint64_t p = C.f.p;
  const auto bound = static_cast<std::int64_t>(isqrt(4 * p));
  const auto s = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(bound)) + 1);
  const std::int64_t w = 2 * s + 1;

  std::vector<std::pair<std::uint64_t, std::int64_t>> baby;
  std::vector<Point> baby_pts(static_cast<std::size_t>(s) + 1);
  Point J = P;
  for (std::int64_t j = 1; j <= s; ++j) {
    if (J.inf) return static_cast<std::uint64_t>(j);  // ord(P) = j
    baby_pts[static_cast<std::size_t>(j)] = J;
    baby.emplace_back(J.x, j);
    J = C.add(J, P);
  }
  std::sort(baby.begin(), baby.end());

  const std::int64_t K = bound / w + 1;
  const Point W = C.mul(static_cast<std::uint64_t>(w), P);
  const Point R = C.mul(p + 1, P);
  Point G = C.add(R, C.neg(C.mul(static_cast<std::uint64_t>(K), W)));
  for (std::int64_t k = -K; k <= K; ++k, G = C.add(G, W)) {
    std::int64_t r;
    if (G.inf) {
      r = k * w;
    } else {
      auto it = std::lower_bound(baby.begin(), baby.end(), std::make_pair(G.x, std::int64_t{0}));
      if (it == baby.end() || it->first != G.x) continue;
      const std::int64_t j = it->second;
      r = baby_pts[static_cast<std::size_t>(j)].y == G.y ? k * w - j : k * w + j;
    }
    if (r < -bound || r > bound) continue;
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(p) + 1 + r);
  }
  return std::nullopt;
}

/// Exact order of P given a multiple M of it.
inline std::uint64_t order_from_multiple(const ShortCurve& C, const Point& P, std::uint64_t M) {
  for (auto [q, e] : factor_small(M)) {
    for (int i = 0; i < e && M % q == 0; ++i) {
      if (!C.mul(M / q, P).inf) break;
      M /= q;
    }
  }
  return M;
}

}  // namespace detail

/// Trace of Frobenius by exhaustive point enumeration.
inline std::int64_t ap_naive(const EllipticCurveQ& E, std::uint64_t p) {
  if (p < 2 || !is_prime(p)) throw DomainError("ap_naive: " + std::to_string(p) + " is not prime");
  if (p > kMaxFieldPrime) throw DomainError("ap_naive: p exceeds 2^32");
  if (!E.has_good_reduction(p)) throw BadReductionError(p);

  std::uint64_t count = 1;  // point at infinity
  if (p <= 3) {
    const std::int64_t P = static_cast<std::int64_t>(p);
    auto md = [P](std::int64_t v) { return ((v % P) + P) % P; };
    for (std::int64_t x = 0; x < P; ++x) {
      for (std::int64_t y = 0; y < P; ++y) {
        const std::int64_t lhs = y * y + E.a1() * x * y + E.a3() * y;
        const std::int64_t rhs = x * x * x + E.a2() * x * x + E.a4() * x + E.a6();
        if (md(lhs - rhs) == 0) ++count;
      }
    }
  } else {
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    const detail::Fp f{p};
    const std::uint64_t b2 = detail::reduce(BigInt(E.a1()) * E.a1() + 4 * BigInt(E.a2()), p);
    const std::uint64_t b4 = detail::reduce(2 * BigInt(E.a4()) + BigInt(E.a1()) * E.a3(), p);
    const std::uint64_t b6 = detail::reduce(BigInt(E.a3()) * E.a3() + 4 * BigInt(E.a6()), p);
    std::vector<std::int8_t> chi;
    const bool table = p <= (1u << 24);
    if (table) {
      chi.assign(p, -1);
      chi[0] = 0;
      for (std::uint64_t y = 1; y <= p / 2; ++y) chi[f.mul(y, y)] = 1;
    }
    for (std::uint64_t x = 0; x < p; ++x) {
      const std::uint64_t v =
          f.add(f.mul(f.add(f.mul(f.add(f.mul(4, x), b2), x), f.mul(2, b4)), x), b6);
      count += static_cast<std::uint64_t>(1 + (table ? chi[v] : f.legendre(v)));
    }
  }
  return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(count);
}

struct BsgsOptions {
  std::uint64_t seed = 0;
  int max_attempts = 48;
};

/// Trace of Frobenius by BSGS order finding in the Hasse interval, combining
/// point orders on E and on its quadratic twist until #E(F_p) is unique.
inline std::int64_t ap_bsgs(const EllipticCurveQ& E, std::uint64_t p, const BsgsOptions& opt = {}) {
  if (p < 5 || !is_prime(p)) throw DomainError("ap_bsgs: requires a prime p >= 5, got " + std::to_string(p));
  if (p > kMaxFieldPrime) throw DomainError("ap_bsgs: p exceeds 2^32");
  if (!E.has_good_reduction(p)) throw BadReductionError(p);

  const detail::ShortCurve C = detail::short_model(E, p);
  std::uint64_t d = 2;
  while (C.f.legendre(d) != -1) ++d;
  const std::uint64_t d2 = C.f.mul(d, d);
  const detail::ShortCurve T{C.f, C.f.mul(C.A, d2), C.f.mul(C.B, C.f.mul(d2, d))};

  const std::uint64_t bound = isqrt(4 * p);
  const std::uint64_t lo = p + 1 - bound, hi = p + 1 + bound;
  const auto& a = E.coefficients();
  SplitMix64 rng(derive_seed(opt.seed, "ap_bsgs",
                             {static_cast<std::uint64_t>(a[0]), static_cast<std::uint64_t>(a[1]),
                              static_cast<std::uint64_t>(a[2]), static_cast<std::uint64_t>(a[3]),
                              static_cast<std::uint64_t>(a[4]), p}));

  std::uint64_t lcm_e = 1, lcm_t = 1;
  std::vector<std::uint64_t> candidates;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const bool on_twist = attempt % 2 == 1;
    const detail::ShortCurve& G = on_twist ? T : C;
    const detail::Point P = G.random_point(rng);
    const auto M = detail::hasse_multiple(G, P);
    if (!M) throw AmbiguityError(p, "ap_bsgs: no multiple of the point order in the Hasse interval at p = " +
                                        std::to_string(p));
    const std::uint64_t n = detail::order_from_multiple(G, P, *M);
    std::uint64_t& L = on_twist ? lcm_t : lcm_e;
    L = std::lcm(L, n);

    candidates.clear();
    for (std::uint64_t N = (lo + lcm_e - 1) / lcm_e * lcm_e; N <= hi; N += lcm_e) {
      if ((2 * p + 2 - N) % lcm_t == 0) candidates.push_back(N);
    }
    if (candidates.size() == 1) return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(candidates[0]);
    if (candidates.empty()) {
      throw AmbiguityError(p, "ap_bsgs: inconsistent order constraints at p = " + std::to_string(p));
    }
  }
  // After many points the lcms are the group exponents (with overwhelming
  // probability). E(F_p) ~ Z/n1 x Z/n2 with n1 | n2 and n1 | p - 1, so N / exponent
  // must divide gcd(exponent, p - 1); same for the twist.
  auto structure_ok = [p](std::uint64_t order, std::uint64_t exponent) {
    return order % exponent == 0 && std::gcd(exponent, p - 1) % (order / exponent) == 0;
  };
  std::erase_if(candidates, [&](std::uint64_t N) {
    return !structure_ok(N, lcm_e) || !structure_ok(2 * p + 2 - N, lcm_t);
  });
  if (candidates.size() == 1) return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(candidates[0]);
  std::string list;
  for (auto N : candidates) list += " " + std::to_string(N);
  throw AmbiguityError(p, "ap_bsgs: group order not unique at p = " + std::to_string(p) +
                              " after " + std::to_string(opt.max_attempts) + " points; candidates:" + list);
}

}  // namespace cstlab
