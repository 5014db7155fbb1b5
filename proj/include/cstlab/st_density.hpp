#pragma once

// Sato-Tate densities for SU(2) x SU(2): the joint density rho(s, y) of
// (a1/sqrt p, a2/p), and the density Phi of the normalized trace a1/(4 sqrt p)
// in three independent forms (closed form, marginal quadrature, semicircle
// self-convolution).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cstlab/elliptic_integrals.hpp"
#include "cstlab/errors.hpp"

namespace cstlab {

inline constexpr double kPi = std::numbers::pi;

/// Phi(0) = 32 / (3 pi^2).
inline constexpr double kPhiZero = 32.0 / (3.0 * kPi * kPi);

/// Half-width of the neighbourhood of 0 where phi_closed returns Phi(0).
inline constexpr double kPhiSMin = 1e-6;

/// Step of the central difference in phi_prime.
inline constexpr double kPhiPrimeStep = 1e-6;

/// Points within this distance of the parabola y = s^2/4 + 2 are singular for rho.
inline constexpr double kParabolaTolerance = 1e-12;

/// A point (a1/sqrt p, a2/p) in [-4,4] x [-6,6].
struct JointPoint {
  double s;
  double y;

  static JointPoint make(double s, double y) {
    if (!(s >= -4.0 && s <= 4.0 && y >= -6.0 && y <= 6.0)) {
      throw DomainError("JointPoint out of [-4,4] x [-6,6]");
    }
    return {s, y};
  }
};

/// Subinterval [lo, hi] of [-1, 1] containing 0. Closed unless `open` is set.
struct IntervalSpec {
  double lo = 0.0;
  double hi = 0.0;
  bool open = false;

  static IntervalSpec make(double lo, double hi, bool open = false) {
    if (std::isnan(lo) || std::isnan(hi)) throw DomainError("interval endpoint is NaN");
    if (lo > hi) throw DomainError("interval lo > hi");
    if (!(lo >= -1.0 && lo <= 0.0 && hi >= 0.0 && hi <= 1.0)) {
      throw DomainError("interval must satisfy -1 <= lo <= 0 <= hi <= 1");
    }
    return {lo, hi, open};
  }

  double delta() const noexcept { return hi - lo; }
};

/// Membership in S: y >= 2s - 2, y >= -2s - 2, y <= s^2/4 + 2 (boundary inclusive).
inline bool in_support(double s, double y) {
  return y >= 2.0 * s - 2.0 && y >= -2.0 * s - 2.0 && y <= 0.25 * s * s + 2.0;
}

/// Joint density rho(s, y) on S.
inline double rho_joint(double s, double y) {
  if (!in_support(s, y)) throw DomainError("rho_joint: point outside the support region");
  const double top = 0.25 * s * s + 2.0;
  if (top - y <= kParabolaTolerance) {
    throw SingularityError("rho_joint: point on the parabola y = s^2/4 + 2, density diverges");
  }
  const double num = std::max(0.0, (y - 2.0 * s + 2.0) * (y + 2.0 * s + 2.0));
  return std::sqrt(num / (s * s - 4.0 * y + 8.0)) / (2.0 * kPi * kPi);
}

/// rho(s, y) dy/dv under y = s^2/4 + 2 - v^2. The parabola singularity cancels,
/// leaving sqrt((A^2 - v^2)(B^2 - v^2)) / (2 pi^2) with A = 2 - |s|/2, B = 2 + |s|/2.
/// `gap`, when positive, is A - v supplied by the caller without cancellation.
inline double rho_joint_regularized(double s, double v, double gap = -1.0) {
  const double A = 2.0 - 0.5 * std::fabs(s), B = 2.0 + 0.5 * std::fabs(s);
  const double d = gap > 0.0 ? gap : A - v;
  const double num = d * (A + v) * (B - v) * (B + v);
  return num > 0.0 ? std::sqrt(num) / (2.0 * kPi * kPi) : 0.0;
}

namespace detail {

inline void check_unit(double s, const char* who) {
  if (!(std::fabs(s) <= 1.0)) throw DomainError(std::string(who) + ": |s| > 1");
}

inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_engine() {
  thread_local boost::math::quadrature::tanh_sinh<double> engine(15);
  return engine;
}

template <class F>
double integrate_bounded(F f, double a, double b, double abs_tol, const char* who) {
  if (b <= a) return 0.0;
  double err = 0.0, l1 = 0.0;
  const double v = tanh_sinh_engine().integrate(f, a, b, 1e-14, &err, &l1);
  if (!(err <= abs_tol)) {
    throw AccuracyError(std::string(who) + ": quadrature did not reach tolerance (achieved " +
                            std::to_string(err) + ")",
                        err);
  }
  return v;
}

}  // namespace detail

/// Phi via the complete elliptic integrals at parameter 1 - 1/s^2.
inline double phi_closed(double s) {
  detail::check_unit(s, "phi_closed");
  const double a = std::fabs(s);
  if (a < kPhiSMin) return kPhiZero;
  const double m = 1.0 - 1.0 / (s * s);
  const double bracket = (s * s + 1.0) * ellip_E(m) - 2.0 * ellip_K(m);
  return std::max(0.0, kPhiZero * a * bracket);
}

/// Integral of rho(4s, y) over the y-range allowed by S, before normalization.
inline double phi_marginal_raw(double s) {
  detail::check_unit(s, "phi_marginal_quadrature");
  const double u = 4.0 * s;
  const double vmax = 2.0 - 0.5 * std::fabs(u);  // sqrt(top - bottom)
  if (vmax <= 0.0) return 0.0;
  // Boost passes the signed distance to the nearer endpoint as the second argument.
  return detail::integrate_bounded(
      [u](double v, double vc) { return rho_joint_regularized(u, v, vc > 0.0 ? vc : -1.0); }, 0.0, vmax, 1e-12,
      "phi_marginal_quadrature");
}

/// Constant c with Phi(s) = c * int rho(4s, y) dy, fixed by matching the closed form at 0.
inline double marginal_normalization() {
  static const double c = phi_closed(0.0) / phi_marginal_raw(0.0);
  return c;
}

inline double phi_marginal_quadrature(double s) { return marginal_normalization() * phi_marginal_raw(s); }

/// 4 (f * f)(4s) with f the semicircle density on [-2, 2].
inline double phi_convolution_oracle(double s) {
  detail::check_unit(s, "phi_convolution_oracle");
  const double u = 4.0 * s;
  const double a = std::max(-2.0, u - 2.0), b = std::min(2.0, u + 2.0);
  auto integrand = [u](double w) {
    const double g = std::max(0.0, 4.0 - w * w) * std::max(0.0, 4.0 - (u - w) * (u - w));
    return std::sqrt(g) / (4.0 * kPi * kPi);
  };
  return 4.0 * detail::integrate_bounded(integrand, a, b, 1e-12, "phi_convolution_oracle");
}

/// Central difference of phi_closed.
inline double phi_prime(double s) {
  const double a = std::fabs(s);
  if (!(a + kPhiPrimeStep < 1.0)) throw DomainError("phi_prime: requires |s| < 1");
  if (a - kPhiPrimeStep <= kPhiSMin) throw DomainError("phi_prime: s inside the exclusion zone around 0");
  return (phi_closed(s + kPhiPrimeStep) - phi_closed(s - kPhiPrimeStep)) / (2.0 * kPhiPrimeStep);
}

/// int_a^b Phi(s) ds for -1 <= a <= b <= 1, absolute accuracy 1e-10. Split at 0,
/// where Phi is only continuous (the derivative has an s log|s| term).
inline double integrate_phi(double a, double b) {
  detail::check_unit(a, "integrate_phi");
  detail::check_unit(b, "integrate_phi");
  if (a > b) throw DomainError("integrate_phi: a > b");
  auto piece = [](double x0, double x1) {
    return detail::integrate_bounded([](double s) { return phi_closed(s); }, x0, x1, 1e-11, "integrate_phi");
  };
  if (a < 0.0 && b > 0.0) return piece(a, 0.0) + piece(0.0, b);
  return piece(a, b);
}

inline double integrate_phi(const IntervalSpec& I) { return integrate_phi(I.lo, I.hi); }

/// Tabulated CDF of Phi with cubic Hermite interpolation (derivative data = Phi).
class PhiCdf {
 public:
  explicit PhiCdf(std::size_t panels = 4000) : n_(panels + panels % 2), x_(n_ + 1), c_(n_ + 1), d_(n_ + 1) {
    using G = boost::math::quadrature::gauss<double, 30>;
    const double h = 2.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i <= n_; ++i) {
      x_[i] = -1.0 + h * static_cast<double>(i);
      d_[i] = phi_closed(std::clamp(x_[i], -1.0, 1.0));
    }
    x_[n_ / 2] = 0.0;
    x_[n_] = 1.0;
    c_[0] = 0.0;
    for (std::size_t i = 0; i < n_; ++i) c_[i + 1] = c_[i] + G::integrate(phi_closed, x_[i], x_[i + 1]);
    // The total is 1 up to quadrature error; pin it exactly.
    const double total = c_[n_];
    for (auto& v : c_) v /= total;
    for (auto& v : d_) v /= total;
  }

  double operator()(double s) const {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double h = 2.0 / static_cast<double>(n_);
    std::size_t i = std::min(n_ - 1, static_cast<std::size_t>((s + 1.0) / h));
    const double x0 = x_[i], x1 = x_[i + 1], w = x1 - x0;
    const double t = (s - x0) / w;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return std::clamp(h00 * c_[i] + h10 * w * d_[i] + h01 * c_[i + 1] + h11 * w * d_[i + 1], 0.0, 1.0);
  }

  /// Smallest s with CDF(s) >= q, by bisection.
  double quantile(double q) const {
    double a = -1.0, b = 1.0;
    for (int i = 0; i < 100; ++i) {
      const double m = 0.5 * (a + b);
      if ((*this)(m) < q) a = m; else b = m;
    }
    return 0.5 * (a + b);
  }

 private:
  std::size_t n_;
  std::vector<double> x_, c_, d_;
};

/// Shared default-resolution CDF table.
inline const PhiCdf& phi_cdf() {
  static const PhiCdf table;
  return table;
}

}  // namespace cstlab
