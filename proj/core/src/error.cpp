#include "aamr/error.hpp"

namespace aamr {

DimensionMismatch::DimensionMismatch(std::string_view context, Index expected,
                                     Index actual)
    : InvalidInput(std::string(context) + ": dimension mismatch (expected " +
                   std::to_string(expected) + ", got " +
                   std::to_string(actual) + ")") {}

void require_dimension(std::string_view context, Index expected,
                       Index actual) {
  if (expected != actual) throw DimensionMismatch(context, expected, actual);
}

void require_finite(std::string_view context, const Vector& x) {
  if (!x.allFinite()) {
    throw InvalidInput(std::string(context) + ": non-finite coordinate");
  }
}

}  // namespace aamr
