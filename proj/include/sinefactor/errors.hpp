#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>

namespace sinefactor {

class HExpansion;

// Base of every library error. All failure modes carry a stable name so the
// CLI can render them as structured JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct EmptySum : Error {
  explicit EmptySum(const std::string& what = "exponential sum has no terms")
      : Error("EmptySum", what) {}
};

struct BasisMismatch : Error {
  explicit BasisMismatch(const std::string& what) : Error("BasisMismatch", what) {}
};

// Thrown by evaluate() when the result leaves the double range. The value is
// recoverable as exp(log_magnitude) * exp(i*phase).
struct OverflowSignal : Error {
  OverflowSignal(double log_magnitude_, double phase_)
      : Error("OverflowSignal", "evaluation overflows floating range"),
        log_magnitude(log_magnitude_),
        phase(phase_) {}
  double log_magnitude;
  double phase;
};

struct BadCutoff : Error {
  explicit BadCutoff(const std::string& what) : Error("BadCutoff", what) {}
};

struct OverflowAbort : Error {
  OverflowAbort(double gamma_, double magnitude_)
      : Error("OverflowAbort",
              "h-recursion coefficient overflow at gamma = " + std::to_string(gamma_)),
        gamma(gamma_),
        magnitude(magnitude_) {}
  double gamma;
  double magnitude;
};

struct BadFactor : Error {
  explicit BadFactor(const std::string& what) : Error("BadFactor", what) {}
};

struct CutoffExceeded : Error {
  explicit CutoffExceeded(const std::string& what) : Error("CutoffExceeded", what) {}
};

struct CutoffMismatch : Error {
  explicit CutoffMismatch(const std::string& what) : Error("CutoffMismatch", what) {}
};

struct ContourNearZero : Error {
  ContourNearZero(const std::string& edge_, double min_abs_, double max_abs_)
      : Error("ContourNearZero", "contour passes too close to a zero on edge " + edge_),
        edge(edge_),
        min_abs(min_abs_),
        max_abs(max_abs_) {}
  std::string edge;
  double min_abs;
  double max_abs;
};

struct QuadratureFailure : Error {
  explicit QuadratureFailure(const std::string& what) : Error("QuadratureFailure", what) {}
};

struct UnresolvedCluster : Error {
  UnresolvedCluster(double x_lo_, double x_hi_, const std::string& what)
      : Error("UnresolvedCluster", what), x_lo(x_lo_), x_hi(x_hi_) {}
  double x_lo;
  double x_hi;
};

struct RequiresCertification : Error {
  explicit RequiresCertification(const std::string& what = "zero set is not certified")
      : Error("RequiresCertification", what) {}
};

// Carries the unpeeled residual so callers can report its mass.
struct NotASineProduct : Error {
  NotASineProduct(std::string reason_, double residual_mass_,
                  std::shared_ptr<const HExpansion> residual_)
      : Error("NotASineProduct", reason_),
        reason(std::move(reason_)),
        residual_mass(residual_mass_),
        residual(std::move(residual_)) {}
  std::string reason;
  double residual_mass;
  std::shared_ptr<const HExpansion> residual;
};

struct InconsistentPrefactor : Error {
  explicit InconsistentPrefactor(double a_imag_)
      : Error("InconsistentPrefactor",
              "recovered exponent is not real (Im a = " + std::to_string(a_imag_) + ")"),
        a_imag(a_imag_) {}
  double a_imag;
};

struct InsufficientSamples : Error {
  explicit InsufficientSamples(const std::string& what) : Error("InsufficientSamples", what) {}
};

struct NoProgressionStructure : Error {
  explicit NoProgressionStructure(const std::string& what)
      : Error("NoProgressionStructure", what) {}
};

struct NotRealRooted : Error {
  explicit NotRealRooted(const std::string& what) : Error("NotRealRooted", what) {}
};

struct SyntaxError : Error {
  SyntaxError(const std::string& what, size_t position_)
      : Error("SyntaxError", what + " (at position " + std::to_string(position_) + ")"),
        position(position_) {}
  size_t position;
};

struct ArithmeticOverflow : Error {
  explicit ArithmeticOverflow(const std::string& what) : Error("ArithmeticOverflow", what) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& what) : Error("InvalidInput", what) {}
};

}  // namespace sinefactor
