// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "cstlab.hpp"

using namespace cstlab;

namespace {

// Runtime budgets in seconds, per criterion.
constexpr double kBudget[] = {0, 1, 5, 30, 120, 60, 30, 60, 600, 30};
constexpr double kSweepX = 1e7;
constexpr double kRatioLo = 0.2, kRatioHi = 5.0;

int failures = 0;

void report(const std::string& id, bool passed, const std::string& name, double seconds, const std::string& detail) {
  if (!passed) ++failures;
  std::printf("%s [%s] %s (%.2f s): %s\n", passed ? "PASS" : "FAIL", id.c_str(), name.c_str(), seconds, detail.c_str());
  std::fflush(stdout);
}

void report(const CheckResult& r, int criterion, const std::string& extra = {}) {
  const bool in_budget = r.seconds < kBudget[criterion];
  std::string detail = r.detail + extra;
  if (!in_budget) detail += "; over the " + std::to_string(static_cast<int>(kBudget[criterion])) + " s budget";
  report(r.id, r.passed && in_budget, r.name, r.seconds, detail);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  report(check_phi_zero(), 1);
  report(check_phi_normalization(), 2);
  report(check_phi_triple(), 3);
  report(check_local_factors(), 4);
  report(check_stabilization(), 5);
  report(check_euler_product(), 6);

  // Default pair: conductor 37 and 43, both non-CM and not isogenous.
  const SurfacePair pair{EllipticCurveQ({0, 0, 1, -1, 0}), EllipticCurveQ({0, 1, 1, 0, 0})};
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto t0 = std::chrono::steady_clock::now();
  const auto records = trace_sweep(pair, static_cast<std::uint64_t>(kSweepX), SweepOptions{threads, 512, 0});
  const double sweep_seconds = seconds_since(t0);

  {
    const auto r = check_point_counts(0);
    const bool hasse = std::all_of(records.begin(), records.end(), [](const auto& rec) { return satisfies_invariants(rec); });
    CheckResult c = r;
    c.passed = r.passed && hasse;
    report(c, 7, "; Hasse bound " + std::string(hasse ? "holds" : "FAILS") + " on all " + std::to_string(records.size()) +
                     " records of the 1e7 sweep");
  }

  {
    t0 = std::chrono::steady_clock::now();
    const auto F = euler_product_F(1, 1, 10000);
    const FEstimate Fe{F.value_double(), F.tail_bound};
    const auto I = IntervalSpec::make(-0.25, 0.25);
    const double ks4 = ks_distance(records, 1e4), ks6 = ks_distance(records, 1e6);
    const auto e4 = error_term(records, CountQuery::make(1e4, 1, 2, I), prime_count(10000), Fe);
    const auto e6 = error_term(records, CountQuery::make(1e6, 1, 2, I), prime_count(1000000), Fe);
    auto ratio = [&](double x) {
      return static_cast<double>(pi_A_count(records, x, 1)) / lt_prediction(x, 1, F.value_double());
    };
    const double r5 = ratio(1e5), r6 = ratio(1e6), r7 = ratio(1e7);
    const bool a = ks6 < ks4;
    const bool b = std::fabs(e6.error_value) < std::fabs(e4.error_value);
    const bool c = r7 >= kRatioLo && r7 <= kRatioHi;
    const bool fast = sweep_seconds < kBudget[8];
    const std::string detail =
        std::string("(a) KS 1e4 ") + num(ks4) + " -> 1e6 " + num(ks6) + (a ? " ok" : " NOT decreasing") +
        "; (b) |E(x,1,2,[-0.25,0.25])| 1e4 " + num(std::fabs(e4.error_value)) + " -> 1e6 " +
        num(std::fabs(e6.error_value)) + (b ? " ok" : " NOT decreasing") + "; (c) ratio 1e5 " + num(r5) + ", 1e6 " +
        num(r6) + ", 1e7 " + num(r7) + (c ? " in [0.2, 5]" : " OUTSIDE [0.2, 5]") + "; sweep " + num(sweep_seconds) +
        " s on " + std::to_string(threads) + " thread(s)" + (fast ? "" : " over budget");
    report("8", a && b && c && fast, "desk-scale end-to-end trends to x = 1e7", sweep_seconds + seconds_since(t0), detail);
  }

  report(check_monte_carlo(0), 9);

  {
    t0 = std::chrono::steady_clock::now();
    const std::string cmd = std::string("\"") + CSTLAB_CLI_PATH + "\" verify > /dev/null";
    const int status = std::system(cmd.c_str());
    const bool ok = status == 0;
    report("10", ok, "`verify` subcommand exits 0", seconds_since(t0),
           ok ? "exit status 0" : "exit status " + std::to_string(status));
  }

  std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed" : "acceptance: FAILED");
  return failures == 0 ? 0 : 1;
}
