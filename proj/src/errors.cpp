#include "wicksell/errors.hpp"

#include <sstream>

namespace wicksell {
namespace {

std::string describe(const char* prefix, double value) {
  std::ostringstream os;
  os.precision(17);
  os << prefix << value;
  return os.str();
}

}  // namespace

SingularityError::SingularityError(double atom)
    : Error(describe("Abel kernel is singular: query point equals atom ", atom)),
      atom_(atom) {}

QuadratureFailure::QuadratureFailure(double achieved, double requested)
    : Error(describe("quadrature did not converge, achieved error estimate ",
                     achieved) +
            describe(" > requested ", requested)),
      achieved_(achieved),
      requested_(requested) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace wicksell
