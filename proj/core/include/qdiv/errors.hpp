#pragma once

#include <stdexcept>
#include <string>

namespace qdiv {

// Base class for all qdiv exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitianError : Error { using Error::Error; };
struct NegativeSpectrumError : Error { using Error::Error; };
struct DimMismatchError : Error { using Error::Error; };
struct NotProjectionError : Error { using Error::Error; };
struct BadAlphaError : Error { using Error::Error; };
struct NotPositiveDefiniteError : Error { using Error::Error; };
struct SupportViolationError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };
struct InvalidPovmError : Error { using Error::Error; };
struct BadUError : Error { using Error::Error; };
struct BadKappaError : Error { using Error::Error; };
struct BadIndexError : Error { using Error::Error; };
struct InfiniteError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// Carries the best objective value seen before the iteration budget ran out.
struct NotConvergedError : Error {
  NotConvergedError(const std::string& what, double best) : Error(what), best_value(best) {}
  double best_value;
};

}  // namespace qdiv
