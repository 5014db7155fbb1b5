#pragma once

// Run configuration: an INI file with sections, overridable key by key.
//
//   [curves]      curve1, curve2          "a1,a2,a3,a4,a6"
//   [sweep]       x_max, threads, crossover, cache
//   [experiment]  t, m, intervals, m_A, cutoff, C1, C2, grid
//   [mc]          draws, bins
//   [run]         seed, out, format

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cstlab/curve.hpp"
#include "cstlab/errors.hpp"
#include "cstlab/report.hpp"
#include "cstlab/st_density.hpp"

namespace cstlab {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(ErrorKind::validation, "config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

inline const Coefficients kDefaultCurve1{0, 0, 1, -1, 0};  // y^2 + y = x^3 - x
inline const Coefficients kDefaultCurve2{0, 1, 1, 0, 0};   // y^2 + y = x^3 + x^2

struct RunConfig {
  Coefficients curve1 = kDefaultCurve1;
  Coefficients curve2 = kDefaultCurve2;
  std::uint64_t x_max = 1000000;
  std::vector<std::int64_t> t_list{1};
  std::vector<std::uint64_t> m_list{1};
  std::vector<IntervalSpec> intervals{IntervalSpec{-1.0, 1.0}};
  /// Replace `intervals` by the theorem4-window for each (t, m).
  bool theorem4_window = false;
  std::uint64_t m_A = 1;
  std::uint64_t cutoff_L = 10000;
  double C1 = 1.0;
  double C2 = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t crossover = 512;
  std::size_t grid = 199;
  std::size_t mc_draws = 1000000;
  int mc_bins = 50;
  std::string cache_path = "traces.csv";
  std::string out_path;  // empty: standard output
  ReportFormat format = ReportFormat::csv;
};

/// Keys accepted in a config file, as "section.key".
inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "curves.curve1",     "curves.curve2",   "sweep.x_max",     "sweep.threads",  "sweep.crossover",
      "sweep.cache",       "experiment.t",    "experiment.m",    "experiment.intervals",
      "experiment.m_A",    "experiment.cutoff", "experiment.C1", "experiment.C2",  "experiment.grid",
      "mc.draws",          "mc.bins",         "run.seed",        "run.out",        "run.format"};
  return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class T>
T parse_key_number(const std::string& key, const std::string& s) {
  T v{};
  const std::string t = trim(s);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError(key, "malformed number '" + s + "'");
  }
  return v;
}

inline Coefficients parse_curve(const std::string& key, const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 5) throw ConfigError(key, "expected five coefficients a1,a2,a3,a4,a6");
  Coefficients a{};
  for (std::size_t i = 0; i < 5; ++i) a[i] = parse_key_number<std::int64_t>(key, parts[i]);
  try {
    EllipticCurveQ check(a);
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
  return a;
}

inline IntervalSpec parse_interval(const std::string& key, const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw ConfigError(key, "interval must be 'lo,hi', got '" + s + "'");
  const double lo = parse_key_number<double>(key, parts[0]);
  const double hi = parse_key_number<double>(key, parts[1]);
  if (lo > hi) throw ConfigError(key, "interval [" + parts[0] + ", " + parts[1] + "] has lo > hi");
  try {
    return IntervalSpec::make(lo, hi);
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace detail

/// Apply one "section.key" = value setting, validating it.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  using detail::parse_key_number;
  const std::string value = detail::trim(raw);
  if (!config_keys().contains(key)) throw ConfigError(key, "unknown key");
  auto positive = [&](auto v) {
    if (v < 1) throw ConfigError(key, "must be >= 1");
    return v;
  };
  if (key == "curves.curve1") {
    c.curve1 = detail::parse_curve(key, value);
  } else if (key == "curves.curve2") {
    c.curve2 = detail::parse_curve(key, value);
  } else if (key == "sweep.x_max") {
    c.x_max = parse_key_number<std::uint64_t>(key, value);
    if (c.x_max < 2) throw ConfigError(key, "must be >= 2");
    if (c.x_max > 0xFFFFFFFFull) throw ConfigError(key, "must be below 2^32");
  } else if (key == "sweep.threads") {
    c.threads = positive(parse_key_number<unsigned>(key, value));
  } else if (key == "sweep.crossover") {
    c.crossover = parse_key_number<std::uint64_t>(key, value);
  } else if (key == "sweep.cache") {
    if (value.empty()) throw ConfigError(key, "empty path");
    c.cache_path = value;
  } else if (key == "experiment.t") {
    c.t_list.clear();
    for (const auto& s : detail::split(value, ',')) {
      const auto t = parse_key_number<std::int64_t>(key, s);
      if (t == 0) throw ConfigError(key, "t = 0 is excluded; t must lie in t ∈ ℤ∖{0}");
      c.t_list.push_back(t);
    }
  } else if (key == "experiment.m") {
    c.m_list.clear();
    for (const auto& s : detail::split(value, ',')) c.m_list.push_back(positive(parse_key_number<std::uint64_t>(key, s)));
  } else if (key == "experiment.intervals") {
    c.intervals.clear();
    c.theorem4_window = false;
    for (const auto& s : detail::split(value, ';')) {
      if (s == "theorem4-window") c.theorem4_window = true;
      else c.intervals.push_back(detail::parse_interval(key, s));
    }
  } else if (key == "experiment.m_A") {
    c.m_A = positive(parse_key_number<std::uint64_t>(key, value));
  } else if (key == "experiment.cutoff") {
    c.cutoff_L = parse_key_number<std::uint64_t>(key, value);
    if (c.cutoff_L < 2) throw ConfigError(key, "must be >= 2");
  } else if (key == "experiment.C1" || key == "experiment.C2") {
    const double v = parse_key_number<double>(key, value);
    if (!(v > 0.0)) throw ConfigError(key, "must be > 0");
    (key == "experiment.C1" ? c.C1 : c.C2) = v;
  } else if (key == "experiment.grid") {
    c.grid = positive(parse_key_number<std::size_t>(key, value));
  } else if (key == "mc.draws") {
    c.mc_draws = positive(parse_key_number<std::size_t>(key, value));
  } else if (key == "mc.bins") {
    c.mc_bins = parse_key_number<int>(key, value);
    if (c.mc_bins < 2) throw ConfigError(key, "must be >= 2");
  } else if (key == "run.seed") {
    c.seed = parse_key_number<std::uint64_t>(key, value);
  } else if (key == "run.out") {
    c.out_path = value;
  } else if (key == "run.format") {
    try {
      c.format = parse_report_format(value);
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  }
}

/// Cross-key checks that no single setting can decide.
inline void validate(const RunConfig& c) {
  if (c.t_list.empty()) throw ConfigError("experiment.t", "empty list");
  if (c.m_list.empty()) throw ConfigError("experiment.m", "empty list");
  if (c.intervals.empty() && !c.theorem4_window) throw ConfigError("experiment.intervals", "empty list");
  if (c.curve1 == c.curve2) throw ConfigError("curves.curve2", "identical to curve1");
}

/// Parse INI text into (section.key -> value), rejecting unknown keys.
inline std::map<std::string, std::string> read_ini_settings(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw FormatError(e.line(), "config: " + e.message());
  }
  std::map<std::string, std::string> out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "top-level keys must be inside a [section]");
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      if (!config_keys().contains(full)) throw ConfigError(full, "unknown key");
      out[full] = node.get_value<std::string>();
    }
  }
  return out;
}

/// Defaults, then file settings, then overrides.
inline RunConfig parse_config(std::istream& is, const std::map<std::string, std::string>& overrides = {}) {
  RunConfig c;
  auto settings = read_ini_settings(is);
  for (const auto& [k, v] : overrides) settings[k] = v;
  for (const auto& [k, v] : settings) apply_setting(c, k, v);
  validate(c);
  return c;
}

inline RunConfig parse_config_file(const std::string& path, const std::map<std::string, std::string>& overrides = {}) {
  std::ifstream is(path);
  if (!is) throw ResourceError("cannot open config file " + path);
  try {
    return parse_config(is, overrides);
  } catch (const FormatError& e) {
    throw Error(ErrorKind::validation, path + ": " + e.what());
  }
}

inline RunConfig config_from_overrides(const std::map<std::string, std::string>& overrides) {
  std::istringstream empty;
  return parse_config(empty, overrides);
}

}  // namespace cstlab
