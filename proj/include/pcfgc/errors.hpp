#pragma once

#include <stdexcept>

namespace pcfgc {

// Base class for all toolkit errors so callers can catch one type at the CLI
// boundary and still discriminate in tests.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// grammar expansion
struct ChoiceUnderflow : Error { using Error::Error; };
struct ChoiceOutOfRange : Error { using Error::Error; };
struct EmptyDerivation : Error { using Error::Error; };
struct UnknownRule : Error { using Error::Error; };

// fibonacci text generation / choice extraction
struct RatioOutOfRange : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct IllegalLetter : Error { using Error::Error; };

// pair replacement
struct RuleMissing : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };

// entropy coding and the container format
struct SymbolOutOfRange : Error { using Error::Error; };
struct TruncatedStream : Error { using Error::Error; };
struct MalformedBytes : Error { using Error::Error; };
struct UnsupportedShape : Error { using Error::Error; };
struct MethodMismatch : Error { using Error::Error; };

}  // namespace pcfgc
