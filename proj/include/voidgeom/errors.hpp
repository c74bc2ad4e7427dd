#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace voidgeom {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sample carries no spread information (all values equal, zero variance).
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample statistics that cannot arise from valid positive data.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient of variation outside what the diameter law can attain.
class OutOfRangeError : public std::out_of_range {
 public:
  OutOfRangeError(const std::string& what, double lowest, double highest)
      : std::out_of_range(what), lowest_(lowest), highest_(highest) {}

  double lowest() const noexcept { return lowest_; }
  double highest() const noexcept { return highest_; }

 private:
  double lowest_;
  double highest_;
};

/// Iterative solver exhausted its budget.
class NoConvergenceError : public std::runtime_error {
 public:
  NoConvergenceError(const std::string& what, double upper_bound)
      : std::runtime_error(what), upper_bound_(upper_bound) {}

  /// Length of the chart-coordinate straight line between the endpoints;
  /// an upper bound on the geodesic distance.
  double upper_bound() const noexcept { return upper_bound_; }

 private:
  double upper_bound_;
};

/// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}

  /// 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace voidgeom
