#pragma once

// Self-check suite behind the `verify` subcommand.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cstlab/curve.hpp"
#include "cstlab/gl2_counts.hpp"
#include "cstlab/local_factors.hpp"
#include "cstlab/point_count.hpp"
#include "cstlab/random.hpp"
#include "cstlab/semicircle.hpp"
#include "cstlab/st_density.hpp"
#include "cstlab/trace_sweep.hpp"

namespace cstlab {

struct CheckResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace verify_detail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// 199 interior points of (-1, 1) with spacing 0.01.
inline std::vector<double> density_grid() {
  std::vector<double> g;
  for (int i = -99; i <= 99; ++i) g.push_back(i / 100.0);
  return g;
}

inline CheckResult timed(std::string id, std::string name, const std::function<bool(std::string&)>& body) {
  CheckResult r;
  r.id = std::move(id);
  r.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.passed = body(r.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace verify_detail

inline CheckResult check_phi_zero() {
  return verify_detail::timed("1", "Phi(0) = 32/(3 pi^2) by three routes", [](std::string& d) {
    const double exact = 32.0 / (3.0 * kPi * kPi);
    const double e1 = std::fabs(phi_closed(0.0) - exact);
    const double e2 = std::fabs(phi_marginal_quadrature(0.0) - exact);
    const double e3 = std::fabs(phi_convolution_oracle(0.0) - exact);
    d = "closed err " + verify_detail::num(e1) + ", quadrature err " + verify_detail::num(e2) +
        ", convolution err " + verify_detail::num(e3) + ", reconciliation constant " +
        verify_detail::num(marginal_normalization());
    return e1 < 1e-10 && e2 < 1e-8 && e3 < 1e-8;
  });
}

inline CheckResult check_phi_normalization() {
  return verify_detail::timed("2", "Phi normalized, vanishing at +-1, even", [](std::string& d) {
    const double mass = integrate_phi(-1.0, 1.0);
    const double ends = std::max(std::fabs(phi_closed(1.0)), std::fabs(phi_closed(-1.0)));
    double odd = 0.0;
    for (double s : verify_detail::density_grid()) odd = std::max(odd, std::fabs(phi_closed(s) - phi_closed(-s)));
    d = "mass " + verify_detail::num(mass) + ", |Phi(+-1)| " + verify_detail::num(ends) + ", max asymmetry " +
        verify_detail::num(odd);
    return std::fabs(mass - 1.0) < 1e-8 && ends < 1e-10 && odd < 1e-12;
  });
}

inline CheckResult check_phi_triple() {
  return verify_detail::timed("3", "closed form, marginal quadrature, convolution agree to 1e-6", [](std::string& d) {
    double worst = 0.0, at = 0.0;
    for (double s : verify_detail::density_grid()) {
      const double a = phi_closed(s), b = phi_marginal_quadrature(s), c = phi_convolution_oracle(s);
      const double e = std::max({std::fabs(a - b), std::fabs(a - c), std::fabs(b - c)});
      if (e > worst) worst = e, at = s;
    }
    d = "max disagreement " + verify_detail::num(worst) + " at s = " + verify_detail::num(at);
    return worst < 1e-6;
  });
}

inline CheckResult check_local_factors() {
  return verify_detail::timed("4", "universal local factors equal enumeration", [](std::string& d) {
    int cases = 0;
    for (std::uint64_t l : {2, 3, 5}) {
      for (std::int64_t t = 1; t <= 12; ++t) {
        const int v = valuation(t, static_cast<std::int64_t>(l));
        if (std::pow(static_cast<double>(l), v + 1) > 32.0) continue;
        const Rational closed = local_factor_universal(l, t).value;
        const Rational brute = local_factor_bruteforce(l, v + 1, t).value;
        if (closed != brute) {
          d = "mismatch at l = " + std::to_string(l) + ", t = " + std::to_string(t) + ": closed " + closed.str() +
              " vs enumeration " + brute.str();
          return false;
        }
        ++cases;
      }
    }
    const Rational anchor = local_factor_bruteforce(2, 1, 1).value;
    if (anchor != Rational(8, 9)) {
      d = "F_1(2) = " + anchor.str() + ", expected 8/9";
      return false;
    }
    // Partition and CRT multiplicativity of class fractions.
    for (std::uint64_t m : {2, 3, 4, 5, 6, 8, 9, 12, 16}) {
      Rational sum = 0;
      for (std::int64_t t = 0; t < static_cast<std::int64_t>(m); ++t) sum += class_fraction(m, t);
      if (sum != 1) {
        d = "class fractions mod " + std::to_string(m) + " sum to " + sum.str();
        return false;
      }
    }
    for (auto [m1, m2] : {std::pair<std::uint64_t, std::uint64_t>{2, 3}, {2, 5}, {3, 4}}) {
      for (std::int64_t t = 0; t < static_cast<std::int64_t>(m1 * m2); ++t) {
        const Rational direct = class_fraction(trace_det_table_direct(m1 * m2), t);
        const Rational split = class_fraction(trace_det_table_direct(m1), t) * class_fraction(trace_det_table_direct(m2), t);
        if (direct != split) {
          d = "CRT mismatch at m = " + std::to_string(m1 * m2) + ", t = " + std::to_string(t);
          return false;
        }
      }
    }
    for (std::uint64_t l : sieve_primes(10000)) {
      for (std::int64_t t : {1, 2, 3, 6, 12}) {
        const Rational f = local_factor_universal(l, t).value;
        if (!(f > 0 && f < 2)) {
          d = "factor outside (0, 2) at l = " + std::to_string(l) + ", t = " + std::to_string(t);
          return false;
        }
      }
    }
    d = std::to_string(cases) + " (l, t) cases exact; F_1(2) = 8/9; partition, CRT and (0, 2) band hold";
    return true;
  });
}

inline CheckResult check_stabilization() {
  return verify_detail::timed("5", "local factors stabilize at k = v + 1", [](std::string& d) {
    const Rational f2 = local_factor_bruteforce(2, 1, 1).value;
    const Rational f4 = local_factor_bruteforce(2, 2, 1).value;
    const Rational f8 = local_factor_bruteforce(2, 3, 1).value;
    if (!(f2 == f4 && f4 == f8)) {
      d = "F_1(2), F_1(4), F_1(8) = " + f2.str() + ", " + f4.str() + ", " + f8.str();
      return false;
    }
    struct Case { std::uint64_t l; int kmax; };
    for (Case c : {Case{2, 4}, Case{3, 2}}) {
      for (std::int64_t t = 1; t <= 12; ++t) {
        const int v = valuation(t, static_cast<std::int64_t>(c.l));
        if (v + 1 > c.kmax) continue;
        const Rational base = local_factor_bruteforce(c.l, v + 1, t).value;
        for (int k = v + 2; k <= c.kmax; ++k) {
          const Rational fk = local_factor_bruteforce(c.l, k, t).value;
          if (fk != base) {
            d = "F_" + std::to_string(t) + "(" + std::to_string(c.l) + "^" + std::to_string(k) + ") = " + fk.str() +
                " differs from " + base.str();
            return false;
          }
        }
      }
    }
    d = "F_1(2) = F_1(4) = F_1(8) = " + f2.str() + "; (2, k <= 4) and (3, k <= 2) stable";
    return true;
  });
}

inline CheckResult check_euler_product() {
  return verify_detail::timed("6", "Euler product truncations within tail bound; F(1) = F(-1)", [](std::string& d) {
    const auto a = euler_product_F(1, 1, 10000);
    const auto b = euler_product_F(1, 1, 20000);
    const auto c = euler_product_F(-1, 1, 10000);
    const double gap = std::fabs(a.value_double() - b.value_double());
    const double sym = std::fabs(a.value_double() - c.value_double());
    d = "F(1; 1e4) = " + verify_detail::num(a.value_double()) + ", gap to L = 2e4 " + verify_detail::num(gap) +
        ", tail bound " + verify_detail::num(a.tail_bound) + ", |F(1) - F(-1)| " + verify_detail::num(sym);
    return gap < a.tail_bound && sym < 1e-12 && b.tail_bound < a.tail_bound;
  });
}

inline CheckResult check_point_counts(std::uint64_t seed = 0) {
  return verify_detail::timed("7", "BSGS equals enumeration below 1e4; sweep within Hasse bound", [seed](std::string& d) {
    const std::vector<EllipticCurveQ> curves{EllipticCurveQ({0, 0, 1, -1, 0}), EllipticCurveQ({0, 1, 1, 0, 0}),
                                             EllipticCurveQ({0, 0, 0, 0, 1})};
    std::size_t compared = 0;
    for (const auto& E : curves) {
      for (std::uint64_t p : sieve_primes(9999)) {
        if (p < 5 || !E.has_good_reduction(p)) continue;
        const auto n = ap_naive(E, p);
        const auto b = ap_bsgs(E, p, BsgsOptions{seed});
        if (n != b) {
          d = "curve [" + E.to_string() + "] p = " + std::to_string(p) + ": naive " + std::to_string(n) + ", bsgs " +
              std::to_string(b);
          return false;
        }
        ++compared;
      }
    }
    const SurfacePair pair(curves[0], curves[1]);
    const auto records = trace_sweep(pair, 100000, SweepOptions{1, 512, seed});
    for (const auto& r : records) {
      if (!satisfies_invariants(r)) {
        d = "record at p = " + std::to_string(r.p) + " violates the Hasse bound";
        return false;
      }
    }
    d = std::to_string(compared) + " (curve, p) pairs agree; " + std::to_string(records.size()) +
        " sweep records to 1e5 satisfy the Hasse bound";
    return true;
  });
}

inline CheckResult check_monte_carlo(std::uint64_t seed = 0) {
  return verify_detail::timed("9", "Monte-Carlo semicircle pairs match Phi", [seed](std::string& d) {
    const auto s = monte_carlo_phi(derive_seed(seed, "mc"), 1000000, 50);
    d = "chi-square " + verify_detail::num(s.chi_square.statistic) + " on " + std::to_string(s.chi_square.dof) +
        " dof, p = " + verify_detail::num(s.chi_square.p_value) + ", second moment " +
        verify_detail::num(s.second_moment);
    return s.chi_square.p_value > 0.001 && std::fabs(s.second_moment - 1.0) < 0.01;
  });
}

/// Criteria 1-7 and 9, in order.
inline std::vector<CheckResult> run_verify(std::uint64_t seed = 0) {
  return {check_phi_zero(),      check_phi_normalization(), check_phi_triple(),
          check_local_factors(), check_stabilization(),     check_euler_product(),
          check_point_counts(seed), check_monte_carlo(seed)};
}

}  // namespace cstlab
