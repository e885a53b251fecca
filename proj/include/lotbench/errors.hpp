#ifndef LOTBENCH_ERRORS_HPP
#define LOTBENCH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lotbench {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed expression text (bad token, unbalanced parens, trailing junk).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Token-valid input that violates the fine-grained type system of the
// concept grammar (e.g. an equality against a fraction term).
class TypeError : public Error {
 public:
  explicit TypeError(const std::string& what) : Error(what) {}
};

// Enumeration would exceed the configured class size cap.
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error(what) {}
};

// A sample was requested that the class cannot provide.
class InsufficientConcepts : public Error {
 public:
  explicit InsufficientConcepts(const std::string& what) : Error(what) {}
};

// No unseen example of the requested polarity remains for a question.
class PoolExhausted : public Error {
 public:
  explicit PoolExhausted(const std::string& what) : Error(what) {}
};

// Two vectors of different dimensionality were compared.
class LengthMismatch : public Error {
 public:
  explicit LengthMismatch(const std::string& what) : Error(what) {}
};

// Cross-class dedup invoked with classes out of complexity order.
class OrderViolation : public Error {
 public:
  explicit OrderViolation(const std::string& what) : Error(what) {}
};

// Statistics requested on inputs with no variance (or too few points).
class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error(what) {}
};

// An aggregate was requested over zero evaluated records.
class NoData : public Error {
 public:
  explicit NoData(const std::string& what) : Error(what) {}
};

// Remote endpoint failed after all retries.
class EndpointError : public Error {
 public:
  explicit EndpointError(const std::string& what) : Error(what) {}
};

// Remote endpoint rejected our credentials (HTTP 401/403).
class AuthError : public Error {
 public:
  explicit AuthError(const std::string& what) : Error(what) {}
};

// Invalid or missing run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Artifact read/write failure.
class IOError : public Error {
 public:
  explicit IOError(const std::string& what) : Error(what) {}
};

}  // namespace lotbench

#endif  // LOTBENCH_ERRORS_HPP
