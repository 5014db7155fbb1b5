#pragma once

// Bulk computation of surface traces a1p = ap(E1) + ap(E2) over good primes.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "cstlab/curve.hpp"
#include "cstlab/point_count.hpp"
#include "cstlab/primes.hpp"

namespace cstlab {

struct SweepOptions {
  unsigned threads = 1;
  /// Primes below this use exhaustive enumeration; BSGS above.
  std::uint64_t crossover = 512;
  std::uint64_t seed = 0;
};

/// a_p by the configured method; BSGS ambiguity falls back to enumeration.
inline std::int64_t frobenius_trace(const EllipticCurveQ& E, std::uint64_t p, const SweepOptions& opt = {}) {
  if (p < opt.crossover || p < 5) return ap_naive(E, p);
  try {
    return ap_bsgs(E, p, BsgsOptions{opt.seed});
  } catch (const AmbiguityError&) {
    return ap_naive(E, p);
  }
}

/// One record per good prime p <= x, ascending. Output does not depend on opt.threads.
inline std::vector<TraceRecord> trace_sweep(const SurfacePair& pair, std::uint64_t x,
                                            const SweepOptions& opt = {}) {
  std::vector<std::uint32_t> primes = sieve_primes(x);
  std::erase_if(primes, [&](std::uint32_t p) { return pair.is_bad(p); });
  std::vector<TraceRecord> out(primes.size());

  constexpr std::size_t kBlock = 2048;
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::size_t first_error_block = blocks;

  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
      for (std::size_t i = b * kBlock; i < end; ++i) {
        const std::uint64_t p = primes[i];
        try {
          const std::int64_t ap1 = frobenius_trace(pair.e1(), p, opt);
          const std::int64_t ap2 = frobenius_trace(pair.e2(), p, opt);
          out[i] = TraceRecord{static_cast<std::int64_t>(p), ap1, ap2, ap1 + ap2};
        } catch (const Error& e) {
          std::lock_guard lock(err_mu);
          if (b < first_error_block) {
            first_error_block = b;
            first_error = std::make_exception_ptr(
                Error(e.kind(), "trace_sweep at p = " + std::to_string(p) + ": " + e.what()));
          }
          return;
        }
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

/// Heuristic: identical a_p at every good p <= 100 suggests E1, E2 are isogenous.
inline bool likely_isogenous(const SurfacePair& pair) {
  for (std::uint32_t p : sieve_primes(100)) {
    if (pair.is_bad(p)) continue;
    if (ap_naive(pair.e1(), p) != ap_naive(pair.e2(), p)) return false;
  }
  return true;
}

}  // namespace cstlab
