#pragma once

// Rational elliptic curves in long Weierstrass form and the surface pair
// E1 x E2 whose Frobenius traces are studied.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cstlab/errors.hpp"
#include "cstlab/primes.hpp"

namespace cstlab {

/// Weierstrass coefficients [a1, a2, a3, a4, a6].
using Coefficients = std::array<std::int64_t, 5>;

/// Discriminant of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
inline BigInt discriminant(const Coefficients& a) {
  const BigInt a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
  const BigInt b2 = a1 * a1 + 4 * a2;
  const BigInt b4 = 2 * a4 + a1 * a3;
  const BigInt b6 = a3 * a3 + 4 * a6;
  const BigInt b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

/// A nonsingular integral Weierstrass model over Q.
class EllipticCurveQ {
 public:
  explicit EllipticCurveQ(const Coefficients& a) : a_(a), disc_(discriminant(a)) {
    if (disc_ == 0) throw DomainError("singular Weierstrass model " + to_string());
  }

  /// Construct from coefficients plus a stored discriminant, which must match.
  EllipticCurveQ(const Coefficients& a, const BigInt& stored_disc) : EllipticCurveQ(a) {
    if (stored_disc != disc_) {
      throw DomainError("stored discriminant " + stored_disc.str() + " does not match " +
                        disc_.str() + " for " + to_string());
    }
  }

  const Coefficients& coefficients() const noexcept { return a_; }
  std::int64_t a1() const noexcept { return a_[0]; }
  std::int64_t a2() const noexcept { return a_[1]; }
  std::int64_t a3() const noexcept { return a_[2]; }
  std::int64_t a4() const noexcept { return a_[3]; }
  std::int64_t a6() const noexcept { return a_[4]; }
  const BigInt& disc() const noexcept { return disc_; }

  bool has_good_reduction(std::uint64_t p) const { return disc_ % p != 0; }

  /// Quadratic twist by d for odd p: the model y^2 = x^3 + b2 d x^2 + 8 b4 d^2 x + 16 b6 d^3.
  EllipticCurveQ quadratic_twist(std::int64_t d) const {
    const std::int64_t b2 = a1() * a1() + 4 * a2();
    const std::int64_t b4 = 2 * a4() + a1() * a3();
    const std::int64_t b6 = a3() * a3() + 4 * a6();
    return EllipticCurveQ(Coefficients{0, b2 * d, 0, 8 * b4 * d * d, 16 * b6 * d * d * d});
  }

  /// "a1,a2,a3,a4,a6"
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(a_[i]);
    }
    return s;
  }

  friend bool operator==(const EllipticCurveQ& x, const EllipticCurveQ& y) { return x.a_ == y.a_; }

 private:
  Coefficients a_;
  BigInt disc_;
};

/// Two curves forming the surface A ~ E1 x E2, with its bad primes.
class SurfacePair {
 public:
  SurfacePair(EllipticCurveQ e1, EllipticCurveQ e2)
      : e1_(std::move(e1)), e2_(std::move(e2)), bad_primes_(prime_divisors(e1_.disc() * e2_.disc())) {}

  const EllipticCurveQ& e1() const noexcept { return e1_; }
  const EllipticCurveQ& e2() const noexcept { return e2_; }

  /// Prime divisors of disc(E1) * disc(E2), ascending.
  const std::vector<BigInt>& bad_primes() const noexcept { return bad_primes_; }

  bool is_bad(std::uint64_t p) const {
    for (const auto& q : bad_primes_) {
      if (q == p) return true;
    }
    return false;
  }

 private:
  EllipticCurveQ e1_;
  EllipticCurveQ e2_;
  std::vector<BigInt> bad_primes_;
};

/// Frobenius traces of E1, E2 at a good prime p, and the surface trace a1p = ap1 + ap2.
struct TraceRecord {
  std::int64_t p = 0;
  std::int64_t ap1 = 0;
  std::int64_t ap2 = 0;
  std::int64_t a1p = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Hasse-bound and additivity check, integer exact: ap^2 <= 4p, a1p^2 <= 16p.
inline bool satisfies_invariants(const TraceRecord& r) {
  if (r.p < 2) return false;
  const auto p = static_cast<__int128>(r.p);
  auto sq = [](std::int64_t v) { return static_cast<__int128>(v) * v; };
  return sq(r.ap1) <= 4 * p && sq(r.ap2) <= 4 * p && sq(r.a1p) <= 16 * p && r.a1p == r.ap1 + r.ap2;
}

}  // namespace cstlab
