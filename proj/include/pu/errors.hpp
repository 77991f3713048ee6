#pragma once

#include <stdexcept>
#include <string>

namespace pu {

// Base of every domain error raised by the library. The CLI maps these to
// exit status 1; UsageError maps to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PU_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what) : Error(what) {}     \
  }

PU_DEFINE_ERROR(InvalidInput);
PU_DEFINE_ERROR(SingularMatrix);
PU_DEFINE_ERROR(ParameterDomainError);
PU_DEFINE_ERROR(RecursionBreakdown);
PU_DEFINE_ERROR(DegenerateCombination);
PU_DEFINE_ERROR(DecompositionUndefined);
PU_DEFINE_ERROR(InvalidRegime);
PU_DEFINE_ERROR(ConstructionError);
PU_DEFINE_ERROR(ComplexBranch);
PU_DEFINE_ERROR(NonInvertibleTransform);
PU_DEFINE_ERROR(SingularStructure);
PU_DEFINE_ERROR(DegenerateLegendre);
PU_DEFINE_ERROR(DivergenceError);
PU_DEFINE_ERROR(InconclusiveTest);
PU_DEFINE_ERROR(UsageError);

#undef PU_DEFINE_ERROR

}  // namespace pu
