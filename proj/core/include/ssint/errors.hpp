#pragma once

#include <stdexcept>
#include <string>

namespace ssint {

class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

private:
  std::string kind_;
};

#define SSINT_ERROR(Name)                                                  \
  class Name : public Error {                                              \
  public:                                                                  \
    explicit Name(const std::string& what) : Error(#Name, what) {}         \
  };

SSINT_ERROR(ZeroPrecision)
SSINT_ERROR(DivisionByZero)
SSINT_ERROR(NonConvergent)
SSINT_ERROR(InvalidParameter)
SSINT_ERROR(NotGenericallyOrdinary)
SSINT_ERROR(ThresholdExceedsTruncation)
SSINT_ERROR(NotFound)
SSINT_ERROR(BadDiscriminant)
SSINT_ERROR(UnsupportedValuation)
SSINT_ERROR(NotPositiveDefinite)
SSINT_ERROR(ChainNotNested)
SSINT_ERROR(ShapeMismatch)
SSINT_ERROR(ParseError)

#undef SSINT_ERROR

} // namespace ssint
