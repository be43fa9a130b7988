#pragma once

#include <stdexcept>
#include <string>

namespace akh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AKH_DECLARE_ERROR(Name)                 \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  };

AKH_DECLARE_ERROR(DegreeRangeError)
AKH_DECLARE_ERROR(DimensionError)
AKH_DECLARE_ERROR(FrameError)
AKH_DECLARE_ERROR(ArgumentError)
AKH_DECLARE_ERROR(DecompositionError)
AKH_DECLARE_ERROR(ParseError)
AKH_DECLARE_ERROR(CompositionError)
AKH_DECLARE_ERROR(InconsistentModelError)
AKH_DECLARE_ERROR(PreconditionError)
AKH_DECLARE_ERROR(DomainError)
AKH_DECLARE_ERROR(RecipeError)
AKH_DECLARE_ERROR(InconsistentRhsError)

#undef AKH_DECLARE_ERROR

/// A model or grid failed one of its invariants; invariant() names it.
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& message)
      : Error("validation failed [" + invariant + "]: " + message), invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

}  // namespace akh
