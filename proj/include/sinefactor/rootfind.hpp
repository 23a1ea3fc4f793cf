#pragma once

#include <vector>

#include "sinefactor/expsum.hpp"

namespace sinefactor {

struct Rect {
  double x_lo, x_hi, y_lo, y_hi;
};

struct QuadOptions {
  double winding_tol = 1e-6;     // absolute tolerance on the winding number
  double probe_floor_rel = 1e-12;  // contour rejected if min |Q| < floor * max |Q|
  int max_refine = 3;            // tolerance tightenings before QuadratureFailure
  int max_depth = 48;            // adaptive bisection depth per edge
  int eta_retries = 5;           // +-10% perturbations of the contour height
};

// (1/2pi i) * contour integral of Q'/Q over the rectangle boundary, rounded to
// the nearest integer. Throws ContourNearZero / QuadratureFailure.
int count_zeros_rect(const ExpSum& Q, const Rect& rect, const QuadOptions& opts = {});

struct Zero {
  double location;
  int multiplicity;
};

// Real zeros of an exponential sum on a window, with multiplicities and the
// certification data tying them to an argument-principle count.
class ZeroSet {
 public:
  ZeroSet(double x_lo, double x_hi, double eta, std::vector<Zero> zeros, bool certified);

  // For oracle data (exactly generated progressions etc.); marked certified.
  static ZeroSet synthetic(double x_lo, double x_hi, std::vector<Zero> zeros);

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double eta() const { return eta_; }
  bool certified() const { return certified_; }
  const std::vector<Zero>& zeros() const { return zeros_; }
  int total_multiplicity() const;
  int max_unit_strip_count() const;

  ZeroSet restricted(double lo, double hi) const;  // keeps certification

 private:
  double x_lo_, x_hi_, eta_;
  std::vector<Zero> zeros_;
  bool certified_;
};

struct LocateOptions {
  double cluster_width = 1e-3;
  double newton_residual_rel = 1e-13;
  double offaxis_im_tol = 1e-6;
  QuadOptions quad;
};

ZeroSet locate_real_zeros(const ExpSum& Q, double x_lo, double x_hi, double eta,
                          const LocateOptions& opts = {});

struct CertifyReport {
  bool certified;
  int rect_count;       // argument-principle count over window x [-eta, eta]
  int real_count;       // sum of located multiplicities
  int unit_strip_max;   // max zero count over unit-length sub-windows
  double eta_used;
  ZeroSet zeros;
};

CertifyReport certify_real_rooted(const ExpSum& Q, double x_lo, double x_hi, double eta,
                                  const LocateOptions& opts = {});

// An abscissa near `target` (within +-radius) where |Q| stays large along the
// vertical segment of half-height eta; used to place contour edges.
double pick_contour_abscissa(const ExpSum& Q, double target, double radius, double eta);

}  // namespace sinefactor
