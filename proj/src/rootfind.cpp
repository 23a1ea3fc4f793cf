#include "sinefactor/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <queue>
#include <unordered_map>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

struct GLRule {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

// Gauss-Legendre nodes by Newton iteration on P_n; computed once per order.
GLRule make_gl(int n) {
  GLRule r;
  r.x.resize(n);
  r.w.resize(n);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return r;
}

const GLRule& gl12() {
  static const GLRule r = make_gl(12);
  return r;
}
const GLRule& gl24() {
  static const GLRule r = make_gl(24);
  return r;
}

// Q'(z)/Q(z) from two scaled evaluations; the scale factors cancel.
Complex logderiv_at(const ExpSum& Q, const ExpSum& Qp, Complex z) {
  ScaledComplex n = Qp.evaluate_scaled(z);
  ScaledComplex d = Q.evaluate_scaled(z);
  if (std::abs(d.mantissa) < 1e-300)
    throw QuadratureFailure("integrand pole on the contour (quadrature node hit a zero)");
  return (n.mantissa / d.mantissa) * std::exp(n.log_scale - d.log_scale);
}

// Adaptive integral of Q'/Q along the straight edge z0 -> z1 with an absolute
// tolerance. Globally adaptive: the segment with the largest error estimate
// (12/24-point Gauss pair) is split until the summed estimate meets the
// budget, so a negligible stubborn segment cannot stall the refinement.
Complex integrate_edge(const ExpSum& Q, const ExpSum& Qp, Complex z0, Complex z1, double abs_tol,
                       int max_depth) {
  Complex dz = z1 - z0;
  struct Seg {
    double err;
    double t0, t1;
    int depth;
    Complex integral;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  auto evaluate = [&](double t0, double t1, int depth) {
    double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    Complex coarse(0.0, 0.0), fine(0.0, 0.0);
    const GLRule &r12 = gl12(), &r24 = gl24();
    for (size_t i = 0; i < r12.x.size(); ++i)
      coarse += r12.w[i] * logderiv_at(Q, Qp, z0 + (mid + half * r12.x[i]) * dz);
    for (size_t i = 0; i < r24.x.size(); ++i)
      fine += r24.w[i] * logderiv_at(Q, Qp, z0 + (mid + half * r24.x[i]) * dz);
    coarse *= half * dz;
    fine *= half * dz;
    return Seg{std::abs(fine - coarse), t0, t1, depth, fine};
  };

  std::priority_queue<Seg> queue;
  queue.push(evaluate(0.0, 1.0, 0));
  double err_sum = queue.top().err;
  int segments = 1;
  while (err_sum > abs_tol && segments < 20000) {
    Seg worst = queue.top();
    if (worst.depth >= max_depth || worst.t1 - worst.t0 < 1e-14) break;
    queue.pop();
    double tm = 0.5 * (worst.t0 + worst.t1);
    Seg a = evaluate(worst.t0, tm, worst.depth + 1);
    Seg b = evaluate(tm, worst.t1, worst.depth + 1);
    err_sum += a.err + b.err - worst.err;
    queue.push(std::move(a));
    queue.push(std::move(b));
    ++segments;
  }
  if (err_sum > 1e3 * abs_tol)
    throw QuadratureFailure("edge quadrature stalled with error estimate " +
                            std::to_string(err_sum));
  Complex total(0.0, 0.0);
  while (!queue.empty()) {
    total += queue.top().integral;
    queue.pop();
  }
  return total;
}

struct ProbeResult {
  double min_log, max_log, min_pos;
};

// min/max of the normalized magnitude log(|Q| / sum_w |q_w e^{2 pi i w z}|)
// along an edge: coarse pass plus two refinement rounds around the running
// minimum. Normalizing by the local term-magnitude scale makes the floor test
// meaningful on contours whose raw |Q| swings over many orders of magnitude.
ProbeResult probe_edge(const ExpSum& Q, Complex z0, Complex z1) {
  Complex dz = z1 - z0;
  double len = std::abs(dz);
  int n = len > 10.0 ? 129 : 33;
  ProbeResult r{1e300, -1e300, 0.0};
  auto sample = [&](double t) {
    Complex z = z0 + t * dz;
    double la = Q.evaluate_scaled(z).log_abs() - Q.log_abs_sum(z);
    if (la < r.min_log) {
      r.min_log = la;
      r.min_pos = t;
    }
    r.max_log = std::max(r.max_log, la);
  };
  for (int i = 0; i <= n; ++i) sample(static_cast<double>(i) / n);
  double radius = 1.0 / n;
  for (int round = 0; round < 2; ++round) {
    double c = r.min_pos;
    radius /= 4.0;
    for (int j = -3; j <= 3; ++j) {
      double t = c + j * radius;
      if (t >= 0.0 && t <= 1.0 && j != 0) sample(t);
    }
  }
  return r;
}

int count_rect_once(const ExpSum& Q, const ExpSum& Qp, const Rect& rect, const QuadOptions& opts) {
  const Complex bl(rect.x_lo, rect.y_lo), br(rect.x_hi, rect.y_lo), tr(rect.x_hi, rect.y_hi),
      tl(rect.x_lo, rect.y_hi);
  const Complex corners[5] = {bl, br, tr, tl, bl};
  const char* names[4] = {"bottom", "right", "top", "left"};

  double min_log = 1e300, max_log = -1e300;
  int min_edge = 0;
  for (int e = 0; e < 4; ++e) {
    ProbeResult p = probe_edge(Q, corners[e], corners[e + 1]);
    if (p.min_log < min_log) {
      min_log = p.min_log;
      min_edge = e;
    }
    max_log = std::max(max_log, p.max_log);
  }
  if (min_log < max_log + std::log(opts.probe_floor_rel))
    throw ContourNearZero(names[min_edge], std::exp(std::max(min_log - max_log, -700.0)), 1.0);

  double tol = opts.winding_tol * kTwoPi;
  for (int attempt = 0;; ++attempt) {
    Complex total(0.0, 0.0);
    for (int e = 0; e < 4; ++e)
      total += integrate_edge(Q, Qp, corners[e], corners[e + 1], tol / 4.0, opts.max_depth);
    double winding = (total / Complex(0.0, kTwoPi)).real();
    double nearest = std::round(winding);
    if (std::abs(winding - nearest) < 0.25) return static_cast<int>(nearest);
    if (attempt >= opts.max_refine)
      throw QuadratureFailure("winding number " + std::to_string(winding) +
                              " did not settle near an integer");
    tol /= 10.0;
  }
}
}  // namespace

int count_zeros_rect(const ExpSum& Q, const Rect& rect, const QuadOptions& opts) {
  if (Q.empty()) throw EmptySum("zero count of the zero sum");
  if (rect.x_hi <= rect.x_lo || rect.y_hi <= rect.y_lo)
    throw InvalidInput("count_zeros_rect needs a nondegenerate rectangle");
  ExpSum Qp = Q.derivative();
  if (Qp.empty()) return 0;  // Q is a nonzero constant
  return count_rect_once(Q, Qp, rect, opts);
}

namespace {

// Symmetric strip count with the +-10% eta retry policy on ContourNearZero.
int count_strip_retry(const ExpSum& Q, const ExpSum& Qp, double x_lo, double x_hi, double& eta,
                      const QuadOptions& opts) {
  double factors[] = {1.0, 0.9, 1.1, 0.81, 1.21, 0.729};
  for (int k = 0; k <= opts.eta_retries; ++k) {
    double e = eta * factors[std::min(k, 5)];
    try {
      int n = count_rect_once(Q, Qp, Rect{x_lo, x_hi, -e, e}, opts);
      eta = e;
      return n;
    } catch (const ContourNearZero& err) {
      if (k == opts.eta_retries || std::string(err.edge) == "left" ||
          std::string(err.edge) == "right")
        throw;
    }
  }
  throw QuadratureFailure("unreachable");
}

// Vertical split line near x_target where the normalized |Q| stays
// comfortably above the contour floor; widens its search if every candidate
// sits near a zero.
double pick_split(const ExpSum& Q, double x_target, double radius, double eta) {
  double best_x = x_target, best_margin = -1e300;
  auto margin_at = [&](double x) {
    double lo = 1e300;
    for (int i = 0; i <= 24; ++i) {
      double y = -eta + 2.0 * eta * i / 24.0;
      Complex z(x, y);
      lo = std::min(lo, Q.evaluate_scaled(z).log_abs() - Q.log_abs_sum(z));
    }
    return lo;
  };
  for (int attempt = 0; attempt < 3; ++attempt) {
    double r = radius * std::pow(2.0, attempt);
    int cands = 15 + 10 * attempt;
    for (int j = 0; j < cands; ++j) {
      int k = (j + 1) / 2;
      double x = x_target + (j % 2 ? k : -k) * r / (cands / 2);
      double m = margin_at(x);
      if (m > best_margin) {
        best_margin = m;
        best_x = x;
      }
    }
    if (best_margin > std::log(1e-4)) break;
  }
  return best_x;
}

}  // namespace

double pick_contour_abscissa(const ExpSum& Q, double target, double radius, double eta) {
  return pick_split(Q, target, radius, eta);
}

namespace {

struct NewtonResult {
  bool converged = false;
  Complex z;
};

NewtonResult newton_polish(const ExpSum& Q, const ExpSum& Qp, Complex z0, int multiplicity,
                           double box_lo, double box_hi) {
  Complex z = z0;
  double last_step = 1e300;
  for (int it = 0; it < 80; ++it) {
    ScaledComplex fq = Q.evaluate_scaled(z);
    ScaledComplex fp = Qp.evaluate_scaled(z);
    if (std::abs(fp.mantissa) < 1e-300) return {};
    Complex step = static_cast<double>(multiplicity) * (fq.mantissa / fp.mantissa) *
                   std::exp(fq.log_scale - fp.log_scale);
    // damp: never jump past the box by more than its width
    double span = std::max(box_hi - box_lo, 1e-6);
    for (int d = 0; d < 8 && std::abs(step) > 4.0 * span; ++d) step *= 0.5;
    Complex zn = z - step;
    double sn = std::abs(step);
    if (sn <= 1e-13 * std::max(1.0, std::abs(z))) return {true, zn};
    // multiple zeros bottom out at the |Q| noise floor well above the step
    // tolerance; a stagnating small step is convergence, not failure
    if (it > 5 && sn < 1e-6 && sn > 0.6 * last_step) return {true, zn};
    last_step = sn;
    z = zn;
  }
  return {};
}
}  // namespace

ZeroSet::ZeroSet(double x_lo, double x_hi, double eta, std::vector<Zero> zeros, bool certified)
    : x_lo_(x_lo), x_hi_(x_hi), eta_(eta), zeros_(std::move(zeros)), certified_(certified) {
  if (x_hi_ <= x_lo_) throw InvalidInput("zero-set window is empty");
  if (eta_ <= 0.0) throw InvalidInput("zero-set contour height must be positive");
  for (size_t i = 0; i < zeros_.size(); ++i) {
    if (zeros_[i].multiplicity <= 0) throw InvalidInput("zero with non-positive multiplicity");
    if (zeros_[i].location < x_lo_ - 1e-9 || zeros_[i].location > x_hi_ + 1e-9)
      throw InvalidInput("zero outside its window");
    if (i > 0 && zeros_[i - 1].location >= zeros_[i].location)
      throw InvalidInput("zero locations must be strictly increasing");
  }
}

ZeroSet ZeroSet::synthetic(double x_lo, double x_hi, std::vector<Zero> zeros) {
  std::sort(zeros.begin(), zeros.end(),
            [](const Zero& a, const Zero& b) { return a.location < b.location; });
  return ZeroSet(x_lo, x_hi, 1.0, std::move(zeros), true);
}

int ZeroSet::total_multiplicity() const {
  int n = 0;
  for (const auto& z : zeros_) n += z.multiplicity;
  return n;
}

int ZeroSet::max_unit_strip_count() const {
  // closed windows [x, x+1]; the supremum is attained anchored at a zero
  int best = 0;
  size_t j = 0;
  int acc = 0;
  for (size_t i = 0; i < zeros_.size(); ++i) {
    while (j < zeros_.size() && zeros_[j].location <= zeros_[i].location + 1.0 + 1e-9)
      acc += zeros_[j++].multiplicity;
    best = std::max(best, acc);
    acc -= zeros_[i].multiplicity;
  }
  return best;
}

ZeroSet ZeroSet::restricted(double lo, double hi) const {
  std::vector<Zero> sub;
  for (const auto& z : zeros_)
    if (z.location >= lo && z.location <= hi) sub.push_back(z);
  return ZeroSet(lo, hi, eta_, std::move(sub), certified_);
}

ZeroSet locate_real_zeros(const ExpSum& Q, double x_lo, double x_hi, double eta,
                          const LocateOptions& opts) {
  if (Q.empty()) throw EmptySum("cannot locate zeros of the zero sum");
  if (x_hi <= x_lo) throw InvalidInput("window is empty");
  if (eta <= 0.0) throw InvalidInput("eta must be positive");
  ExpSum Qp = Q.derivative();
  if (Qp.empty()) return ZeroSet(x_lo, x_hi, eta, {}, true);  // constant, no zeros

  double eta_used = eta;
  const int total = count_strip_retry(Q, Qp, x_lo, x_hi, eta_used, opts.quad);
  std::vector<Zero> found;
  int offaxis = 0;
  bool clean = true;

  struct Box {
    double lo, hi;
    int count;
  };
  std::vector<Box> work;

  // initial partition into roughly unit-width chunks along probed split lines
  {
    double width = x_hi - x_lo;
    int chunks = std::max(1, static_cast<int>(std::ceil(width / 1.0)));
    std::vector<double> edges{x_lo};
    for (int i = 1; i < chunks; ++i) {
      double pos = pick_split(Q, x_lo + width * i / chunks, 0.3 * width / chunks, eta_used);
      if (pos > edges.back() + 1e-6) edges.push_back(pos);
    }
    edges.push_back(x_hi);
    int sum = 0;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      int c = count_rect_once(Q, Qp, Rect{edges[i], edges[i + 1], -eta_used, eta_used}, opts.quad);
      sum += c;
      if (c > 0) work.push_back({edges[i], edges[i + 1], c});
    }
    if (sum != total)
      throw UnresolvedCluster(x_lo, x_hi,
                              "chunk counts sum to " + std::to_string(sum) + ", expected " +
                                  std::to_string(total));
  }

  auto resolve_cluster = [&](const Box& b) {
    Complex center(0.5 * (b.lo + b.hi), 0.0);
    NewtonResult nr = newton_polish(Q, Qp, center, b.count, b.lo, b.hi);
    if (!nr.converged && b.count > 1) nr = newton_polish(Q, Qp, center, 1, b.lo, b.hi);
    if (nr.converged && std::abs(nr.z.imag()) > opts.offaxis_im_tol) {
      offaxis += b.count;
      return;
    }
    double x = nr.converged ? nr.z.real() : 0.5 * (b.lo + b.hi);
    if (x < b.lo - opts.cluster_width || x > b.hi + opts.cluster_width) x = 0.5 * (b.lo + b.hi);
    // distinguish a genuinely real cluster from a conjugate pair hugging the axis
    if (!nr.converged) {
      try {
        double w = std::max(2.0 * opts.cluster_width, 1e-4);
        int near_axis = count_rect_once(
            Q, Qp, Rect{b.lo - w, b.hi + w, -w, w}, opts.quad);
        if (near_axis < b.count) {
          offaxis += b.count - near_axis;
          if (near_axis == 0) return;
        }
      } catch (const Error&) {
        clean = false;  // could not separate; report the centroid below
      }
    }
    found.push_back(Zero{x, b.count});
  };

  while (!work.empty()) {
    Box b = work.back();
    work.pop_back();
    if (b.count == 0) continue;

    if (b.count == 1) {
      NewtonResult nr = newton_polish(Q, Qp, Complex(0.5 * (b.lo + b.hi), 0.0), 1, b.lo, b.hi);
      if (nr.converged && nr.z.real() >= b.lo - 1e-12 && nr.z.real() <= b.hi + 1e-12) {
        if (std::abs(nr.z.imag()) > opts.offaxis_im_tol) {
          ++offaxis;
          continue;
        }
        // accept only at genuinely small residual relative to the term sizes
        double lq = Q.evaluate_scaled(Complex(nr.z.real(), 0.0)).log_abs();
        double scale = Q.log_abs_sum(Complex(nr.z.real(), 0.0));
        if (lq <= scale + std::log(opts.newton_residual_rel) * 0.75) {
          found.push_back(Zero{nr.z.real(), 1});
          continue;
        }
      }
      // fall through to bisection when Newton failed or escaped the box
    }

    if (b.hi - b.lo < opts.cluster_width) {
      resolve_cluster(b);
      continue;
    }

    double split = pick_split(Q, 0.5 * (b.lo + b.hi), 0.2 * (b.hi - b.lo), eta_used);
    split = std::min(std::max(split, b.lo + 0.1 * (b.hi - b.lo)), b.hi - 0.1 * (b.hi - b.lo));
    int cl = count_rect_once(Q, Qp, Rect{b.lo, split, -eta_used, eta_used}, opts.quad);
    int cr = count_rect_once(Q, Qp, Rect{split, b.hi, -eta_used, eta_used}, opts.quad);
    if (cl + cr != b.count)
      throw UnresolvedCluster(b.lo, b.hi,
                              "child counts " + std::to_string(cl) + "+" + std::to_string(cr) +
                                  " do not reproduce parent count " + std::to_string(b.count));
    work.push_back({b.lo, split, cl});
    work.push_back({split, b.hi, cr});
  }

  std::sort(found.begin(), found.end(),
            [](const Zero& a, const Zero& b) { return a.location < b.location; });
  std::vector<Zero> merged;
  for (const auto& z : found) {
    if (!merged.empty() && z.location - merged.back().location < 1e-11)
      merged.back().multiplicity += z.multiplicity;
    else
      merged.push_back(z);
  }
  int located = 0;
  for (const auto& z : merged) located += z.multiplicity;
  bool certified = clean && offaxis == 0 && located == total;
  return ZeroSet(x_lo, x_hi, eta_used, std::move(merged), certified);
}

CertifyReport certify_real_rooted(const ExpSum& Q, double x_lo, double x_hi, double eta,
                                  const LocateOptions& opts) {
  ZeroSet zs = locate_real_zeros(Q, x_lo, x_hi, eta, opts);
  ExpSum Qp = Q.derivative();
  int rect_count = 0;
  if (!Qp.empty()) {
    double e = zs.eta();
    rect_count = count_strip_retry(Q, Qp, x_lo, x_hi, e, opts.quad);
  }
  CertifyReport rep{zs.certified() && rect_count == zs.total_multiplicity(),
                    rect_count,
                    zs.total_multiplicity(),
                    zs.max_unit_strip_count(),
                    zs.eta(),
                    std::move(zs)};
  return rep;
}

}  // namespace sinefactor
