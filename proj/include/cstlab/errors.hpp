#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cstlab {

/// Error categories; the numeric values double as CLI exit codes.
enum class ErrorKind : int {
  validation = 1,
  resource = 2,
  accuracy = 3,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::resource: return "resource";
    case ErrorKind::accuracy: return "accuracy";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ErrorKind::resource, what) {}
};

class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(ErrorKind::accuracy, what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class BadReductionError : public Error {
 public:
  explicit BadReductionError(std::uint64_t p)
      : Error(ErrorKind::validation, "bad reduction at p = " + std::to_string(p)), p_(p) {}
  std::uint64_t prime() const noexcept { return p_; }

 private:
  std::uint64_t p_;
};

/// BSGS could not pin down a unique group order.
class AmbiguityError : public Error {
 public:
  AmbiguityError(std::uint64_t p, const std::string& what)
      : Error(ErrorKind::accuracy, what), p_(p) {}
  std::uint64_t prime() const noexcept { return p_; }

 private:
  std::uint64_t p_;
};

/// Rejection of a point on the parabola y = s^2/4 + 2 where rho diverges.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

/// Malformed input file; carries the 1-based line number.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error(ErrorKind::validation, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cstlab
