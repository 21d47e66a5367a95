#pragma once

#include <stdexcept>
#include <string>

namespace fjq {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Index out of range, malformed arguments, unsupported combinations.
class DomainError : public Error {
  public:
    using Error::Error;
};

// rho >= 1 (or lambda >= mu) passed to an analytic formula.
class InstabilityError : public Error {
  public:
    using Error::Error;
};

// A formula that does not apply to the given queue (e.g. staging bound for
// non-exponential service).
class InapplicableError : public Error {
  public:
    using Error::Error;
};

class MalformedCacheError : public Error {
  public:
    MalformedCacheError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

  private:
    int line_;
};

}  // namespace fjq
