#pragma once

#include <stdexcept>
#include <string>

namespace logictree {

// Root of every error the library throws. The CLI maps TransportError to exit
// code 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Premises with no satisfying assignment. Generated paragraphs must never hit
// this; seeing it means the generator produced a contradiction.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class RuleApplicationError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TransportError : public Error {
 public:
  enum class Kind { kConnection, kTimeout, kStatus, kMalformed, kContract };

  TransportError(Kind kind, const std::string& what, int status = 0,
                 int attempts = 1)
      : Error(what), kind_(kind), status_(status), attempts_(attempts) {}

  Kind kind() const noexcept { return kind_; }
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  Kind kind_;
  int status_;
  int attempts_;
};

// A scorer answered, but the answer breaks the scoring contract (positive
// log-probs, tokens that do not rebuild the continuation). Never retried.
class ContractViolation : public TransportError {
 public:
  explicit ContractViolation(const std::string& what, int attempts = 1)
      : TransportError(Kind::kContract, what, 0, attempts) {}
};

}  // namespace logictree
