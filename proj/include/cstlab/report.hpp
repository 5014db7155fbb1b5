#pragma once

// ExperimentReport serialization: a JSON array of report objects, or CSV with
// one row per report and dotted field names as the header.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cstlab/errors.hpp"
#include "cstlab/lt_harness.hpp"

namespace cstlab {

enum class ReportFormat { csv, json };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw DomainError("unknown format '" + std::string(s) + "' (expected csv or json)");
}

inline nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["query"] = {{"x", r.query.x},
                {"t", r.query.t},
                {"m", r.query.m},
                {"interval", {r.query.interval.lo, r.query.interval.hi}},
                {"interval_open", r.query.interval.open}};
  j["raw_count"] = r.raw_count;
  j["pi_x"] = r.pi_x;
  j["empirical_ratio"] = r.empirical_ratio;
  j["prediction"] = r.prediction;
  j["error_value"] = r.error_value;
  j["main_term_eq5"] = r.main_term_eq5;
  j["regime"] = {{"delta_window", r.regime.delta_window},
                 {"m_lower", r.regime.m_lower},
                 {"m_upper", r.regime.m_upper}};
  j["F"] = {{"value", r.F.value}, {"tail_bound", r.F.tail_bound}};
  j["notes"] = r.notes;
  return j;
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
  try {
    ExperimentReport r;
    const auto& q = j.at("query");
    r.query.x = q.at("x").get<double>();
    r.query.t = q.at("t").get<std::int64_t>();
    r.query.m = q.at("m").get<std::uint64_t>();
    r.query.interval.lo = q.at("interval").at(0).get<double>();
    r.query.interval.hi = q.at("interval").at(1).get<double>();
    r.query.interval.open = q.value("interval_open", false);
    r.raw_count = j.at("raw_count").get<std::uint64_t>();
    r.pi_x = j.at("pi_x").get<std::uint64_t>();
    r.empirical_ratio = j.at("empirical_ratio").get<double>();
    r.prediction = j.at("prediction").get<double>();
    r.error_value = j.at("error_value").get<double>();
    r.main_term_eq5 = j.at("main_term_eq5").get<double>();
    r.regime.delta_window = j.at("regime").at("delta_window").get<bool>();
    r.regime.m_lower = j.at("regime").at("m_lower").get<bool>();
    r.regime.m_upper = j.at("regime").at("m_upper").get<bool>();
    r.F.value = j.at("F").at("value").get<double>();
    r.F.tail_bound = j.at("F").at("tail_bound").get<double>();
    r.notes = j.value("notes", std::string{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed report JSON: ") + e.what());
  }
}

inline constexpr std::string_view kReportCsvHeader =
    "query.x,query.t,query.m,query.interval.lo,query.interval.hi,query.interval_open,raw_count,pi_x,"
    "empirical_ratio,prediction,error_value,main_term_eq5,regime.delta_window,regime.m_lower,regime.m_upper,"
    "F.value,F.tail_bound,notes";

namespace detail {

/// Shortest decimal that round-trips.
inline std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::vector<std::string> csv_split(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw FormatError(lineno, "unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

template <class T>
T parse_number(const std::string& s, std::size_t lineno) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError(lineno, "malformed number '" + s + "'");
  }
  return v;
}

inline bool parse_bool(const std::string& s, std::size_t lineno) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw FormatError(lineno, "malformed boolean '" + s + "'");
}

}  // namespace detail

inline void report_emit(std::ostream& os, const std::vector<ExperimentReport>& reports, ReportFormat format) {
  if (format == ReportFormat::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    os << arr.dump(2) << '\n';
  } else {
    using detail::fmt_double;
    auto b = [](bool v) { return v ? "true" : "false"; };
    os << kReportCsvHeader << '\n';
    for (const auto& r : reports) {
      os << fmt_double(r.query.x) << ',' << r.query.t << ',' << r.query.m << ',' << fmt_double(r.query.interval.lo)
         << ',' << fmt_double(r.query.interval.hi) << ',' << b(r.query.interval.open) << ',' << r.raw_count << ','
         << r.pi_x << ',' << fmt_double(r.empirical_ratio) << ',' << fmt_double(r.prediction) << ','
         << fmt_double(r.error_value) << ',' << fmt_double(r.main_term_eq5) << ',' << b(r.regime.delta_window) << ','
         << b(r.regime.m_lower) << ',' << b(r.regime.m_upper) << ',' << fmt_double(r.F.value) << ','
         << fmt_double(r.F.tail_bound) << ',' << detail::csv_quote(r.notes) << '\n';
    }
  }
  if (!os) throw Error(ErrorKind::resource, "report_emit: stream failure");
}

inline void report_emit(const std::string& path, const std::vector<ExperimentReport>& reports, ReportFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::resource, "report_emit: cannot open " + path);
  report_emit(os, reports, format);
}

inline std::vector<ExperimentReport> report_parse(std::istream& is, ReportFormat format) {
  std::vector<ExperimentReport> out;
  if (format == ReportFormat::json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("malformed report JSON: ") + e.what());
    }
    if (!doc.is_array()) throw DomainError("report JSON must be an array");
    for (const auto& j : doc) out.push_back(report_from_json(j));
    return out;
  }
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line) || line != kReportCsvHeader) throw FormatError(1, "missing report CSV header");
  ++lineno;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::csv_split(line, lineno);
    if (f.size() != 18) throw FormatError(lineno, "expected 18 fields");
    using detail::parse_bool;
    using detail::parse_number;
    ExperimentReport r;
    r.query.x = parse_number<double>(f[0], lineno);
    r.query.t = parse_number<std::int64_t>(f[1], lineno);
    r.query.m = parse_number<std::uint64_t>(f[2], lineno);
    r.query.interval.lo = parse_number<double>(f[3], lineno);
    r.query.interval.hi = parse_number<double>(f[4], lineno);
    r.query.interval.open = parse_bool(f[5], lineno);
    r.raw_count = parse_number<std::uint64_t>(f[6], lineno);
    r.pi_x = parse_number<std::uint64_t>(f[7], lineno);
    r.empirical_ratio = parse_number<double>(f[8], lineno);
    r.prediction = parse_number<double>(f[9], lineno);
    r.error_value = parse_number<double>(f[10], lineno);
    r.main_term_eq5 = parse_number<double>(f[11], lineno);
    r.regime.delta_window = parse_bool(f[12], lineno);
    r.regime.m_lower = parse_bool(f[13], lineno);
    r.regime.m_upper = parse_bool(f[14], lineno);
    r.F.value = parse_number<double>(f[15], lineno);
    r.F.tail_bound = parse_number<double>(f[16], lineno);
    r.notes = f[17];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cstlab
