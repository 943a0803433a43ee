#pragma once

#include <stdexcept>
#include <string>

namespace dbrk {

/// Failure categories surfaced by the library. Numerical *quality* data
/// (error estimates, subdivision counts) travels in result structs; an
/// exception means a contract was violated or a computation cannot produce
/// a meaningful value at all.
enum class errc {
  domain,                  // argument outside the documented range
  parameter_pole,          // a (c)_p factor vanished before series termination
  no_convergence,          // series divergent for the requested parameters
  unmatched,               // gamma-ratio arguments admit no integer-difference pairing
  undefined,               // gamma pole in the numerator with finite denominator
  internal,                // invariant the implementation must maintain failed
  singular_point,          // evaluation exactly at a singular-factor location
  quadrature_failure,      // integral estimate did not reach the requested tolerance
  max_subdivisions,        // adaptive refinement hit its subdivision cap
  singularity_unresolved,  // refinement toward a boundary singularity stalled
  cancellation,            // precision budget insufficient for the cancellation level
  negative_norm,           // a squared norm evaluated significantly below zero
  large_imaginary,         // an analytically real quantity had a large imaginary part
  not_converging,          // radial extrapolation iterates diverge
  exact_unsupported,       // exact arithmetic requested for a non-exact function
  precision_unsupported,   // extended precision requested where only double is wired
  parse,                   // malformed configuration input
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::domain: return "DOMAIN";
    case errc::parameter_pole: return "PARAMETER_POLE";
    case errc::no_convergence: return "NO_CONVERGENCE";
    case errc::unmatched: return "UNMATCHED";
    case errc::undefined: return "UNDEFINED";
    case errc::internal: return "INTERNAL_ERROR";
    case errc::singular_point: return "SINGULAR_POINT";
    case errc::quadrature_failure: return "QUADRATURE_FAILURE";
    case errc::max_subdivisions: return "MAX_SUBDIVISIONS";
    case errc::singularity_unresolved: return "SINGULARITY_UNRESOLVED";
    case errc::cancellation: return "CANCELLATION";
    case errc::negative_norm: return "NEGATIVE_NORM";
    case errc::large_imaginary: return "LARGE_IMAGINARY";
    case errc::not_converging: return "NOT_CONVERGING";
    case errc::exact_unsupported: return "EXACT_UNSUPPORTED";
    case errc::precision_unsupported: return "PRECISION_UNSUPPORTED";
    case errc::parse: return "PARSE";
  }
  return "UNKNOWN";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace dbrk
