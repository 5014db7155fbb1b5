#pragma once

// `cstlab` command-line frontend. dispatch() is the whole program; main() only
// forwards argv and the standard streams.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <new>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cstlab/config.hpp"
#include "cstlab/curve.hpp"
#include "cstlab/errors.hpp"
#include "cstlab/local_factors.hpp"
#include "cstlab/lt_harness.hpp"
#include "cstlab/primes.hpp"
#include "cstlab/random.hpp"
#include "cstlab/report.hpp"
#include "cstlab/semicircle.hpp"
#include "cstlab/st_density.hpp"
#include "cstlab/trace_cache.hpp"
#include "cstlab/trace_sweep.hpp"
#include "cstlab/verify.hpp"

namespace cstlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitResource = 2;
inline constexpr int kExitAccuracy = 3;

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return kExitValidation;
    case ErrorKind::resource: return kExitResource;
    case ErrorKind::accuracy: return kExitAccuracy;
  }
  return kExitValidation;
}

namespace cli_detail {

using detail::fmt_double;

inline void write_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  j["exit_code"] = code;
  err << j.dump() << '\n';
}

/// Run `body` against the configured output file, or `fallback` when none is set.
inline void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ResourceError("cannot open output file " + path);
  body(os);
  os.flush();
  if (!os) throw ResourceError("write failed for " + path);
}

inline std::string coeffs(const Coefficients& a) { return EllipticCurveQ(a).to_string(); }

inline void run_density(const RunConfig& c, std::ostream& out) {
  with_output(c.out_path, out, [&](std::ostream& os) {
    os << "s,phi_closed,phi_quadrature,phi_convolution\n";
    const double n1 = static_cast<double>(c.grid + 1);
    for (std::size_t i = 1; i <= c.grid; ++i) {
      const double s = -1.0 + 2.0 * static_cast<double>(i) / n1;
      os << fmt_double(s) << ',' << fmt_double(phi_closed(s)) << ',' << fmt_double(phi_marginal_quadrature(s)) << ','
         << fmt_double(phi_convolution_oracle(s)) << '\n';
    }
  });
}

inline nlohmann::ordered_json ffactor_json(const EulerProductResult& r) {
  nlohmann::ordered_json j;
  j["t"] = r.t;
  j["m_A"] = r.m_A;
  j["cutoff"] = r.cutoff;
  j["value"] = r.value_double();
  j["value_decimal"] = r.value.str(40);
  j["tail_bound"] = r.tail_bound;
  auto& fs = j["factors"] = nlohmann::ordered_json::array();
  for (const auto& f : r.factors) {
    fs.push_back({{"ell", f.ell},
                  {"k", f.k},
                  {"numerator", boost::multiprecision::numerator(f.value).str()},
                  {"denominator", boost::multiprecision::denominator(f.value).str()},
                  {"provenance", to_string(f.provenance)}});
  }
  return j;
}

inline void run_ffactor(const RunConfig& c, std::ostream& out) {
  nlohmann::ordered_json doc;
  if (c.t_list.size() == 1) {
    doc = ffactor_json(euler_product_F(c.t_list.front(), c.m_A, c.cutoff_L));
  } else {
    doc = nlohmann::ordered_json::array();
    for (auto t : c.t_list) doc.push_back(ffactor_json(euler_product_F(t, c.m_A, c.cutoff_L)));
  }
  with_output(c.out_path, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

inline std::vector<std::string> sweep_comments(const RunConfig& c) {
  return {" curve1=" + coeffs(c.curve1), " curve2=" + coeffs(c.curve2), " x_max=" + std::to_string(c.x_max),
          " seed=" + std::to_string(c.seed), " crossover=" + std::to_string(c.crossover)};
}

inline void run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SurfacePair pair{EllipticCurveQ(c.curve1), EllipticCurveQ(c.curve2)};
  if (likely_isogenous(pair)) {
    err << nlohmann::json{{"warning", "identical a_p for every good p <= 100: the curves are likely isogenous"}}.dump()
        << '\n';
  }
  const auto records = trace_sweep(pair, c.x_max, SweepOptions{c.threads, c.crossover, c.seed});
  const std::string path = c.out_path.empty() ? c.cache_path : c.out_path;
  cache_write(path, records, sweep_comments(c));
  out << "wrote " << records.size() << " records to " << path << '\n';
}

/// Load the cache and check it covers x and was built from the configured curves.
inline TraceCache load_cache(const RunConfig& c, double x) {
  TraceCache cache = cache_read(c.cache_path);
  for (auto [key, curve] : {std::pair{"curve1", &c.curve1}, std::pair{"curve2", &c.curve2}}) {
    if (auto v = cache.meta(key); v && *v != coeffs(*curve)) {
      throw ConfigError(std::string("curves.") + key, "cache " + c.cache_path + " was built for [" + *v +
                                                          "], configuration has [" + coeffs(*curve) + "]");
    }
  }
  const std::int64_t max_p = cache.records.empty() ? 0 : cache.records.back().p;
  double covered = static_cast<double>(max_p);
  if (auto v = cache.meta("x_max")) covered = std::max(covered, std::stod(*v));
  if (x > covered) {
    throw DomainError("x = " + fmt_double(x) + " exceeds cache coverage of " + c.cache_path +
                      " (max p = " + std::to_string(max_p) + ")");
  }
  return cache;
}

inline std::vector<double> lt_trajectory(double x) {
  std::vector<double> xs;
  for (double d = 100.0; d < x; d *= 10.0) xs.push_back(d);
  xs.push_back(x);
  return xs;
}

inline void run_lt(const RunConfig& c, std::ostream& out) {
  const double x = static_cast<double>(c.x_max);
  const TraceCache cache = load_cache(c, x);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "x,t,pi_A,prediction,ratio,F,F_tail_bound\n";
  for (auto t : c.t_list) {
    const auto F = euler_product_F(t, c.m_A, c.cutoff_L);
    for (double xi : lt_trajectory(x)) {
      const auto count = pi_A_count(cache.records, xi, t);
      const double pred = lt_prediction(xi, t, F.value_double());
      const double ratio = static_cast<double>(count) / pred;
      csv << fmt_double(xi) << ',' << t << ',' << count << ',' << fmt_double(pred) << ',' << fmt_double(ratio) << ','
          << fmt_double(F.value_double()) << ',' << fmt_double(F.tail_bound) << '\n';
      rows.push_back({{"x", xi},
                      {"t", t},
                      {"pi_A", count},
                      {"prediction", pred},
                      {"ratio", ratio},
                      {"F", {{"value", F.value_double()}, {"tail_bound", F.tail_bound}}}});
    }
  }
  with_output(c.out_path, out, [&](std::ostream& os) {
    if (c.format == ReportFormat::json) os << rows.dump(2) << '\n';
    else os << csv.str();
  });
}

inline std::vector<ExperimentReport> cst_reports(const RunConfig& c, std::span<const TraceRecord> records) {
  const double x = static_cast<double>(c.x_max);
  const std::uint64_t pi_x = prime_count(c.x_max);
  std::vector<ExperimentReport> reports;
  for (auto t : c.t_list) {
    const auto E = euler_product_F(t, c.m_A, c.cutoff_L);
    const FEstimate F{E.value_double(), E.tail_bound};
    for (auto m : c.m_list) {
      std::vector<IntervalSpec> intervals = c.intervals;
      if (c.theorem4_window) intervals.push_back(theorem4_window(x, t, m).interval);
      for (const auto& I : intervals) {
        auto r = error_term(records, CountQuery::make(x, t, m, I), pi_x, F, c.C1, c.C2);
        if (c.m_A == 1) {
          if (!r.notes.empty()) r.notes += "; ";
          r.notes += "m_A=1 full-image model: real pairs usually have m_A > 1, so F carries model risk";
        }
        reports.push_back(std::move(r));
      }
    }
  }
  return reports;
}

inline void run_cst(const RunConfig& c, std::ostream& out) {
  const TraceCache cache = load_cache(c, static_cast<double>(c.x_max));
  const auto reports = cst_reports(c, cache.records);
  if (c.out_path.empty()) report_emit(out, reports, c.format);
  else report_emit(c.out_path, reports, c.format);
}

inline void run_mc(const RunConfig& c, std::ostream& out) {
  const auto s = monte_carlo_phi(derive_seed(c.seed, "mc"), c.mc_draws, c.mc_bins);
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["draws"] = s.draws;
  j["mean"] = s.mean;
  j["second_moment"] = s.second_moment;
  j["chi_square"] = {{"statistic", s.chi_square.statistic}, {"dof", s.chi_square.dof}, {"p_value", s.chi_square.p_value}};
  j["ks"] = s.ks;
  with_output(c.out_path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

inline int run_verify_command(const RunConfig& c, std::ostream& out) {
  bool all = true;
  for (const auto& r : run_verify(c.seed)) {
    all = all && r.passed;
    out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << std::fixed
        << std::setprecision(2) << r.seconds << " s): " << r.detail << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << (all ? "verify: all checks passed" : "verify: FAILED") << '\n';
  return all ? kExitOk : kExitAccuracy;
}

}  // namespace cli_detail

/// Run one command line (without the program name). Returns the process exit status.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chebotarev-Sato-Tate and Lang-Trotter laboratory for products of elliptic curves", "cstlab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> intervals;
  app.add_option("--config", config_path, "INI configuration file");
  auto setting = [&](const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };
  setting("--curve1", "curves.curve1", "first curve, \"a1,a2,a3,a4,a6\"");
  setting("--curve2", "curves.curve2", "second curve, \"a1,a2,a3,a4,a6\"");
  setting("--xmax", "sweep.x_max", "largest prime considered");
  setting("--threads", "sweep.threads", "sweep worker threads");
  setting("--crossover", "sweep.crossover", "primes below this are counted by enumeration");
  setting("--cache", "sweep.cache", "trace cache file");
  setting("--t", "experiment.t", "comma-separated nonzero traces");
  setting("--m", "experiment.m", "comma-separated moduli");
  setting("--mA", "experiment.m_A", "entanglement modulus m_A");
  setting("--cutoff", "experiment.cutoff", "Euler product cutoff L");
  setting("--C1", "experiment.C1", "regime constant C1");
  setting("--C2", "experiment.C2", "regime constant C2");
  setting("--grid", "experiment.grid", "number of interior grid points for density");
  setting("--draws", "mc.draws", "Monte-Carlo pair count");
  setting("--bins", "mc.bins", "chi-square bins");
  setting("--seed", "run.seed", "top-level seed");
  setting("--out", "run.out", "output file (default: standard output)");
  setting("--format", "run.format", "csv or json");
  app.add_option("--interval", intervals, "lo,hi or theorem4-window (repeatable)")->allow_extra_args(false);

  const std::map<std::string, std::string> help{
      {"density", "tabulate Phi by closed form, quadrature and convolution"},
      {"ffactor", "Euler product F(t) with local factors"},
      {"sweep", "compute the trace cache"},
      {"lt", "pi_A(x, t) against the Lang-Trotter prediction"},
      {"cst", "error terms E(x, t, m, I) over the (t, m, I) grid"},
      {"mc", "Monte-Carlo validation of Phi"},
      {"verify", "run the self-check suite"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    cli_detail::write_error(err, "validation", e.what(), kExitValidation);
    return kExitValidation;
  }

  try {
    if (!intervals.empty()) {
      std::string joined;
      for (const auto& s : intervals) joined += (joined.empty() ? "" : ";") + s;
      overrides["experiment.intervals"] = joined;
    }
    const RunConfig cfg = config_path.empty() ? config_from_overrides(overrides) : parse_config_file(config_path, overrides);
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "density") cli_detail::run_density(cfg, out);
    else if (cmd == "ffactor") cli_detail::run_ffactor(cfg, out);
    else if (cmd == "sweep") cli_detail::run_sweep(cfg, out, err);
    else if (cmd == "lt") cli_detail::run_lt(cfg, out);
    else if (cmd == "cst") cli_detail::run_cst(cfg, out);
    else if (cmd == "mc") cli_detail::run_mc(cfg, out);
    else if (cmd == "verify") return cli_detail::run_verify_command(cfg, out);
    return kExitOk;
  } catch (const Error& e) {
    cli_detail::write_error(err, to_string(e.kind()), e.what(), exit_code(e.kind()));
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    cli_detail::write_error(err, "resource", "out of memory", kExitResource);
    return kExitResource;
  } catch (const std::exception& e) {
    cli_detail::write_error(err, "validation", e.what(), kExitValidation);
    return kExitValidation;
  }
}

}  // namespace cstlab
