#pragma once

#include <stdexcept>
#include <string>

namespace mbcp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition of a mathematical operation violated (divergent series,
// invalid chain parameters, degenerate discriminant, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Support length or enumeration size beyond a configured limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Invalid flags or identifiers.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; the message carries the offending line number.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, long line)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace mbcp
