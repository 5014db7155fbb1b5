#pragma once

// Counting matrices in GL2(Z/mZ) by trace and determinant, and trace classes
// in the fibre product G(m) = {(g1, g2) in GL2 x GL2 : det g1 = det g2}.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cstlab/errors.hpp"
#include "cstlab/primes.hpp"

namespace cstlab {

using Rational = boost::multiprecision::cpp_rational;

/// Largest prime power enumerated directly.
inline constexpr std::uint64_t kEnumerationCap = 32;

/// Largest composite modulus for which a full CRT table is materialized.
inline constexpr std::uint64_t kCompositeTableCap = 1024;

/// N_m(t, d) = #{g in GL2(Z/mZ) : tr g = t, det g = d}.
class TraceDetTable {
 public:
  explicit TraceDetTable(std::uint64_t m) : m_(m), counts_(m * m, 0) {}

  std::uint64_t modulus() const noexcept { return m_; }

  std::uint64_t count(std::int64_t t, std::int64_t d) const { return counts_[index(t, d)]; }
  std::uint64_t& at(std::int64_t t, std::int64_t d) { return counts_[index(t, d)]; }

  /// D(d) = #{g : det g = d}.
  std::uint64_t det_total(std::int64_t d) const {
    std::uint64_t s = 0;
    for (std::uint64_t t = 0; t < m_; ++t) s += counts_[t * m_ + reduce(d)];
    return s;
  }

  BigInt total() const {
    BigInt s = 0;
    for (auto c : counts_) s += c;
    return s;
  }

  std::uint64_t reduce(std::int64_t v) const {
    const auto m = static_cast<std::int64_t>(m_);
    const std::int64_t r = v % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
  }

  friend bool operator==(const TraceDetTable&, const TraceDetTable&) = default;

 private:
  std::size_t index(std::int64_t t, std::int64_t d) const { return reduce(t) * m_ + reduce(d); }

  std::uint64_t m_;
  std::vector<std::uint64_t> counts_;
};

/// |GL2(Z/mZ)| = m^4 prod_{l | m} (1 - 1/l)(1 - 1/l^2).
inline BigInt gl2_order(std::uint64_t m) {
  if (m == 0) throw DomainError("gl2_order: m must be >= 1");
  BigInt r = BigInt(m) * m * m * m;
  for (auto [l, e] : factor_small(m)) {
    r = r / (BigInt(l) * l * l) * (BigInt(l) - 1) * (BigInt(l) * l - 1);
  }
  return r;
}

/// Table by enumerating all 4-tuples mod m.
inline TraceDetTable trace_det_table_direct(std::uint64_t m, std::uint64_t cap = kEnumerationCap) {
  if (m == 0) throw DomainError("trace_det_table: m must be >= 1");
  if (m > cap) {
    throw ResourceError("trace_det_table: direct enumeration of m = " + std::to_string(m) + " exceeds cap " +
                        std::to_string(cap));
  }
  TraceDetTable table(m);
  std::vector<bool> unit(m);
  for (std::uint64_t r = 0; r < m; ++r) unit[r] = std::gcd(r, m) == 1;
  std::vector<std::uint64_t> bc_count(m, 0);  // #{(b, c) : bc = r}
  for (std::uint64_t b = 0; b < m; ++b)
    for (std::uint64_t c = 0; c < m; ++c) ++bc_count[b * c % m];
  for (std::uint64_t a = 0; a < m; ++a) {
    for (std::uint64_t d = 0; d < m; ++d) {
      const std::uint64_t tr = (a + d) % m;
      const std::uint64_t ad = a * d % m;
      for (std::uint64_t bc = 0; bc < m; ++bc) {
        const std::uint64_t det = (ad + m - bc) % m;
        if (unit[det]) table.at(static_cast<std::int64_t>(tr), static_cast<std::int64_t>(det)) += bc_count[bc];
      }
    }
  }
  return table;
}

/// Table for m whose prime-power parts are each within `cap`, composed by CRT.
inline TraceDetTable trace_det_table(std::uint64_t m, std::uint64_t cap = kEnumerationCap) {
  if (m == 0) throw DomainError("trace_det_table: m must be >= 1");
  const auto fac = factor_small(m);
  if (fac.size() <= 1) return trace_det_table_direct(m, cap);
  if (m > kCompositeTableCap) {
    throw ResourceError("trace_det_table: composite m = " + std::to_string(m) + " exceeds table cap " +
                        std::to_string(kCompositeTableCap));
  }
  std::vector<TraceDetTable> parts;
  for (auto [l, e] : fac) {
    std::uint64_t q = 1;
    for (int i = 0; i < e; ++i) q *= l;
    if (q > cap) {
      throw ResourceError("trace_det_table: prime power " + std::to_string(q) + " of m = " + std::to_string(m) +
                          " exceeds enumeration cap " + std::to_string(cap));
    }
    parts.push_back(trace_det_table_direct(q, cap));
  }
  TraceDetTable table(m);
  for (std::uint64_t t = 0; t < m; ++t) {
    for (std::uint64_t d = 0; d < m; ++d) {
      std::uint64_t n = 1;
      for (const auto& part : parts) {
        n *= part.count(static_cast<std::int64_t>(t), static_cast<std::int64_t>(d));
        if (n == 0) break;
      }
      table.at(static_cast<std::int64_t>(t), static_cast<std::int64_t>(d)) = n;
    }
  }
  return table;
}

/// #C(m, t) / #G(m) for G(m) the full fibre product, from a table of GL2(Z/mZ).
inline Rational class_fraction(const TraceDetTable& table, std::int64_t t) {
  using u128 = unsigned __int128;
  const std::uint64_t m = table.modulus();
  u128 group = 0, cls = 0;
  for (std::uint64_t d = 0; d < m; ++d) {
    const u128 D = table.det_total(static_cast<std::int64_t>(d));
    if (D == 0) continue;
    group += D * D;
    for (std::uint64_t t1 = 0; t1 < m; ++t1) {
      const u128 n1 = table.count(static_cast<std::int64_t>(t1), static_cast<std::int64_t>(d));
      if (n1 == 0) continue;
      cls += n1 * table.count(t - static_cast<std::int64_t>(t1), static_cast<std::int64_t>(d));
    }
  }
  auto big = [](u128 v) {
    BigInt r = static_cast<std::uint64_t>(v >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(v);
    return r;
  };
  return Rational(big(cls), big(group));
}

/// Order of the fibre product G(m) = |GL2(Z/mZ)|^2 / phi(m).
inline BigInt fibre_product_order(std::uint64_t m) {
  BigInt phi = m;
  for (auto [l, e] : factor_small(m)) phi = phi / l * (l - 1);
  const BigInt g = gl2_order(m);
  return g * g / phi;
}

/// #C(m, t) / #G(m). Uses one CRT table when small enough, otherwise the product over
/// prime-power parts (G(m) splits over coprime factors).
inline Rational class_fraction(std::uint64_t m, std::int64_t t, std::uint64_t cap = kEnumerationCap) {
  if (m == 0) throw DomainError("class_fraction: m must be >= 1");
  if (m <= kCompositeTableCap) return class_fraction(trace_det_table(m, cap), t);
  Rational r = 1;
  for (auto [l, e] : factor_small(m)) {
    std::uint64_t q = 1;
    for (int i = 0; i < e; ++i) q *= l;
    r *= class_fraction(trace_det_table_direct(q, cap), t);
  }
  return r;
}

}  // namespace cstlab
