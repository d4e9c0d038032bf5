#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace meshcoop {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that violates a documented invariant. `offenders` lists each broken
// item so callers can report all of them at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> offenders);
  ValidationError(const std::string& what, std::vector<std::string> offenders);

  const std::vector<std::string>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Enumeration guard exceeded (2^M coalitions, Bell(M) partitions).
class SizeError : public Error {
 public:
  using Error::Error;
};

// The simplex engine could not certify a solution within tolerance.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

// A strict-demand coalition program has no feasible routing.
class InfeasibleDemandError : public Error {
 public:
  InfeasibleDemandError(const std::string& what, std::vector<std::string> sessions)
      : Error(what), sessions_(std::move(sessions)) {}

  const std::vector<std::string>& sessions() const noexcept { return sessions_; }

 private:
  std::vector<std::string> sessions_;
};

// Malformed network document. `path` names the offending field
// (e.g. "nodes[3].x"); `line` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string path, std::size_t line)
      : Error(what), path_(std::move(path)), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

}  // namespace meshcoop
