#pragma once

#include <stdexcept>
#include <string>

namespace homdiv {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HOMDIV_DEFINE_ERROR(Name)        \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

HOMDIV_DEFINE_ERROR(ParseError);
HOMDIV_DEFINE_ERROR(InvalidTable);
HOMDIV_DEFINE_ERROR(IndexOutOfRange);
HOMDIV_DEFINE_ERROR(ForeignSubgroup);
HOMDIV_DEFINE_ERROR(OrderBoundExceeded);
HOMDIV_DEFINE_ERROR(NotIndexable);
HOMDIV_DEFINE_ERROR(ImpossibleFixedImage);
HOMDIV_DEFINE_ERROR(NotCentralizing);
HOMDIV_DEFINE_ERROR(RelatorViolation);
HOMDIV_DEFINE_ERROR(MixedPresentations);
HOMDIV_DEFINE_ERROR(CardinalityBoundExceeded);
HOMDIV_DEFINE_ERROR(NonInvertibleBase);
HOMDIV_DEFINE_ERROR(HypothesisViolated);
HOMDIV_DEFINE_ERROR(ArithmeticOverflow);

#undef HOMDIV_DEFINE_ERROR

}  // namespace homdiv
