#ifndef WICKSELL_ERRORS_HPP_
#define WICKSELL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace wicksell {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Model construction or model capability problems (e.g. no inverse cdf).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

class NumericDomainError : public Error {
 public:
  using Error::Error;
};

// Raised when V_G is evaluated exactly at an atom, where the Abel kernel
// (z - x)^{-1/2} is infinite.
class SingularityError : public Error {
 public:
  explicit SingularityError(double atom);
  double atom() const { return atom_; }

 private:
  double atom_;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(double achieved, double requested);
  double achieved_tolerance() const { return achieved_; }
  double requested_tolerance() const { return requested_; }

 private:
  double achieved_;
  double requested_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Normality diagnostics on degenerate samples.
class DiagnosticError : public Error {
 public:
  using Error::Error;
};

}  // namespace wicksell

#endif  // WICKSELL_ERRORS_HPP_
