#pragma once

#include <stdexcept>
#include <string>

namespace rsmm {

// Base for every error raised by the library. `kind()` is a stable tag used
// by the CLI when naming the failing stage.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept = 0;
};

#define RSMM_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(what) {}            \
    const char* kind() const noexcept override { return #Name; }       \
  };

RSMM_DEFINE_ERROR(DivisionByZero)
RSMM_DEFINE_ERROR(NotPrime)
RSMM_DEFINE_ERROR(ShapeError)
RSMM_DEFINE_ERROR(SingularMatrix)
RSMM_DEFINE_ERROR(QTooSmall)
RSMM_DEFINE_ERROR(DivisibilityError)
RSMM_DEFINE_ERROR(RangeError)
RSMM_DEFINE_ERROR(RandomnessUnderflow)
RSMM_DEFINE_ERROR(NotEnoughResponses)
RSMM_DEFINE_ERROR(InstanceTooLarge)
RSMM_DEFINE_ERROR(FormatError)
RSMM_DEFINE_ERROR(ConfigError)

#undef RSMM_DEFINE_ERROR

}  // namespace rsmm
