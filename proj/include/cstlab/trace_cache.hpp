#pragma once

// Trace cache: CSV "p,ap1,ap2,a1p" with optional leading '#' comment lines.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cstlab/curve.hpp"
#include "cstlab/errors.hpp"

namespace cstlab {

inline constexpr std::string_view kTraceCacheHeader = "p,ap1,ap2,a1p";

/// Contents of a cache file: the comment lines (without '#') and the records.
struct TraceCache {
  std::vector<std::string> comments;
  std::vector<TraceRecord> records;

  /// Value of a "# key=value" comment, if present.
  std::optional<std::string> meta(std::string_view key) const {
    for (const auto& c : comments) {
      std::string_view s = c;
      while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      if (s.size() > key.size() && s.substr(0, key.size()) == key && s[key.size()] == '=') {
        return std::string(s.substr(key.size() + 1));
      }
    }
    return std::nullopt;
  }
};

inline void cache_write(std::ostream& os, std::span<const TraceRecord> records,
                        std::span<const std::string> comments = {}) {
  for (const auto& c : comments) os << '#' << c << '\n';
  os << kTraceCacheHeader << '\n';
  for (const auto& r : records) os << r.p << ',' << r.ap1 << ',' << r.ap2 << ',' << r.a1p << '\n';
  if (!os) throw Error(ErrorKind::resource, "cache_write: stream failure");
}

inline void cache_write(const std::string& path, std::span<const TraceRecord> records,
                        std::span<const std::string> comments = {}) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::resource, "cannot open " + path + " for writing");
  cache_write(os, records, comments);
}

namespace detail {

inline std::int64_t parse_int_field(std::string_view s, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError(line, "malformed integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

/// Parse and validate a cache; every record must satisfy the Hasse bounds,
/// additivity, and strictly ascending p.
inline TraceCache cache_read(std::istream& is) {
  TraceCache out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::int64_t last_p = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!header) {
      if (!line.empty() && line[0] == '#') {
        out.comments.push_back(line.substr(1));
        continue;
      }
      if (line != kTraceCacheHeader) throw FormatError(lineno, "expected header '" + std::string(kTraceCacheHeader) + "'");
      header = true;
      continue;
    }
    std::string_view rest = line;
    std::int64_t f[4];
    for (int i = 0; i < 4; ++i) {
      const auto comma = rest.find(',');
      if ((i < 3) != (comma != std::string_view::npos)) throw FormatError(lineno, "expected 4 comma-separated fields");
      f[i] = detail::parse_int_field(rest.substr(0, comma), lineno);
      if (i < 3) rest.remove_prefix(comma + 1);
    }
    const TraceRecord r{f[0], f[1], f[2], f[3]};
    if (r.a1p != r.ap1 + r.ap2) throw FormatError(lineno, "a1p != ap1 + ap2");
    if (!satisfies_invariants(r)) throw FormatError(lineno, "Hasse bound violated at p = " + std::to_string(r.p));
    if (r.p <= last_p) throw FormatError(lineno, "p not strictly ascending");
    last_p = r.p;
    out.records.push_back(r);
  }
  if (!header) throw FormatError(lineno + 1, "missing header '" + std::string(kTraceCacheHeader) + "'");
  return out;
}

inline TraceCache cache_read(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::resource, "cannot open " + path);
  return cache_read(is);
}

}  // namespace cstlab
