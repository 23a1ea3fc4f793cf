#include "sinefactor/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "sinefactor/errors.hpp"

namespace sinefactor {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

HExpansion residual_expansion(const HExpansion& upper,
                              const std::map<FreqVector, std::pair<double, Complex>>& atoms,
                              double floor) {
  std::vector<HAtom> out;
  for (const auto& [vec, pr] : atoms)
    if (std::abs(pr.second) > floor) out.push_back(HAtom{vec, pr.first, pr.second});
  std::sort(out.begin(), out.end(),
            [](const HAtom& a, const HAtom& b) { return a.gamma_value < b.gamma_value; });
  return HExpansion(upper.basis(), HalfPlane::Upper, upper.h0(), std::move(out), upper.cutoff());
}

}  // namespace

PeelResult peel_sine_factors(const HExpansion& upper, double tol, int max_factors) {
  if (upper.halfplane() != HalfPlane::Upper)
    throw InvalidInput("peeling operates on the upper half-plane expansion");
  if (upper.atoms().empty())
    throw NotASineProduct("expansion has no atoms to peel", 0.0,
                          std::make_shared<HExpansion>(upper));

  std::map<FreqVector, std::pair<double, Complex>> work;  // gamma -> (value, h)
  for (const auto& a : upper.atoms()) work.emplace(a.gamma, std::make_pair(a.gamma_value, a.h));
  const double cutoff = upper.cutoff();

  std::vector<SineProductForm::Factor> factors;
  for (int round = 0; round < max_factors; ++round) {
    // smallest-frequency atom still above tol
    const FreqVector* g_vec = nullptr;
    double g_val = 0.0;
    Complex h(0.0, 0.0);
    double best = 1e300;
    for (const auto& [vec, pr] : work) {
      if (std::abs(pr.second) <= tol) continue;
      if (pr.first < best) {
        best = pr.first;
        g_vec = &vec;
        g_val = pr.first;
        h = pr.second;
      }
    }
    if (!g_vec) {
      auto residual = residual_expansion(upper, work, 0.0);
      return PeelResult{std::move(factors), std::move(residual)};
    }

    double alpha = kPi * g_val;
    double k_hat = std::abs(h) / (2.0 * alpha);
    int k = static_cast<int>(std::lround(k_hat));
    if (k < 1 || std::abs(k_hat - k) > tol) {
      auto res = residual_expansion(upper, work, 0.0);
      double mass = res.total_mass();
      throw NotASineProduct("leading atom mass " + std::to_string(std::abs(h)) +
                                " at gamma = " + std::to_string(g_val) +
                                " is not an integer multiple of 2*alpha (ratio " +
                                std::to_string(k_hat) + ")",
                            mass, std::make_shared<HExpansion>(std::move(res)));
    }
    Complex unit = h / Complex(0.0, -2.0 * k * alpha);
    double beta = 0.5 * std::arg(unit);
    if (beta < 0.0) beta += kPi;

    // subtract the whole k-fold cotangent series of (alpha, beta); colliding
    // atoms cancel exactly because the series lives on multiples of g_vec.
    // Multiples are walked in exact arithmetic so the last one agrees with the
    // cutoff decision the expansion itself made.
    FreqVector g_copy = *g_vec;
    const auto& basis = *upper.basis();
    Real step = basis.value_of(g_copy);
    Real cutoff_r = Real::from_double(cutoff, basis.precision());
    Real value_r = step;
    for (long long n = 1; value_r <= cutoff_r; ++n, value_r = value_r + step) {
      Complex series = Complex(0.0, -2.0 * k * alpha) * std::exp(Complex(0.0, 2.0 * beta * n));
      FreqVector vec = g_copy.scaled(Rational(n));
      auto it = work.find(vec);
      if (it == work.end())
        work.emplace(std::move(vec), std::make_pair(value_r.to_double(), -series));
      else {
        it->second.second -= series;
        if (it->second.second == Complex(0.0, 0.0)) work.erase(it);
      }
    }
    factors.push_back(SineProductForm::Factor{std::move(g_copy), alpha, beta, k});
  }

  auto res = residual_expansion(upper, work, 0.0);
  double mass = res.total_mass();
  if (mass > tol)
    throw NotASineProduct("residual mass " + std::to_string(mass) + " remains after " +
                              std::to_string(max_factors) + " factors",
                          mass, std::make_shared<HExpansion>(std::move(res)));
  return PeelResult{std::move(factors), std::move(res)};
}

std::pair<Complex, double> recover_scale(const ExpSum& Q, const HExpansion& upper,
                                         const std::vector<SineProductForm::Factor>& factors,
                                         double im_tol) {
  if (Q.empty()) throw EmptySum("recover_scale of the zero sum");
  double alpha_sum = 0.0;
  for (const auto& f : factors) alpha_sum += f.multiplicity * f.alpha;
  // h0 = i(a - sum k alpha)  =>  a = h0/i + sum k alpha
  Complex a_cx = upper.h0() / Complex(0.0, 1.0) + alpha_sum;
  if (std::abs(a_cx.imag()) > im_tol) throw InconsistentPrefactor(a_cx.imag());
  double a = a_cx.real();

  const Complex z0(0.0, 1.0);
  Complex denom = std::exp(Complex(0.0, 1.0) * (a * z0));
  for (const auto& f : factors) {
    Complex s = std::sin(f.alpha * z0 + f.beta);
    for (int k = 0; k < f.multiplicity; ++k) denom *= s;
  }
  Complex C = Q.evaluate(z0) / denom;
  return {C, a};
}

VerifyReport verify_form(const ExpSum& Q, const SineProductForm& form, int samples) {
  if (samples < 3) throw InvalidInput("verify_form needs at least 3 samples");
  double min_alpha = 1e300;
  for (const auto& f : form.factors) min_alpha = std::min(min_alpha, f.alpha);
  double span = form.factors.empty() ? 8.0 : std::max(8.0, 3.0 * kPi / min_alpha);

  auto dist_to_form_zero = [&](double x) {
    double d = 1e300;
    for (const auto& f : form.factors) {
      double frac = std::fmod(f.alpha * x + f.beta, kPi);
      if (frac < 0) frac += kPi;
      d = std::min(d, std::min(frac, kPi - frac) / f.alpha);
    }
    return d;
  };

  const double lines[3] = {-1.0, 0.0, 1.0};
  int per_line = samples / 3;
  int used = 0;
  double worst = 0.0;
  for (int li = 0; li < 3; ++li) {
    int n = per_line + (li == 1 ? samples - 3 * per_line : 0);
    for (int j = 0; j < n; ++j) {
      double x = -span + 2.0 * span * (j + 0.5) / n;
      if (lines[li] == 0.0 && dist_to_form_zero(x) < 0.1) continue;  // skipped sample
      Complex z(x, lines[li]);
      Complex fv = form.evaluate(z);
      if (std::abs(fv) < 1e-300) continue;
      Complex r = Q.evaluate(z) / fv;
      worst = std::max(worst, std::abs(r - 1.0));
      ++used;
    }
  }
  if (used < samples / 2)
    throw InsufficientSamples("only " + std::to_string(used) + " of " + std::to_string(samples) +
                              " verification samples were usable");
  return VerifyReport{worst, used, samples};
}

namespace {
struct LiveZero {
  double x;
  int avail;
};
}  // namespace

ProgressionSet decompose_zero_set(const ZeroSet& zeros, double gap_tol,
                                  const DecomposeOptions& opts) {
  if (!zeros.certified())
    throw RequiresCertification("progression decomposition needs a certified zero set");
  if (zeros.zeros().size() < 20)
    throw NoProgressionStructure("needs at least 20 zeros, got " +
                                 std::to_string(zeros.zeros().size()));

  std::vector<LiveZero> live;
  live.reserve(zeros.zeros().size());
  int total_mult = 0;
  for (const auto& z : zeros.zeros()) {
    live.push_back(LiveZero{z.location, z.multiplicity});
    total_mult += z.multiplicity;
  }
  const double span = zeros.x_hi() - zeros.x_lo();

  ProgressionSet out;
  for (int round = 0; round < opts.max_progressions; ++round) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < live.size(); ++i)
      if (live[i].avail > 0) idx.push_back(i);
    if (idx.empty()) break;

    // candidate periods from quantized near-neighbor gaps
    std::unordered_map<long long, std::pair<int, double>> hist;  // bucket -> (count, sum)
    for (size_t a = 0; a < idx.size(); ++a) {
      for (size_t b = a + 1; b < idx.size() && b - a <= static_cast<size_t>(opts.neighbor_horizon);
           ++b) {
        double gap = live[idx[b]].x - live[idx[a]].x;
        if (gap > span / 2.0) break;
        long long bucket = llround(gap / gap_tol);
        auto& cell = hist[bucket];
        cell.first += 1;
        cell.second += gap;
      }
    }
    std::vector<std::pair<long long, std::pair<int, double>>> cands(hist.begin(), hist.end());
    std::sort(cands.begin(), cands.end(),
              [](const auto& a, const auto& b) { return a.second.first > b.second.first; });

    // evaluate the leading candidates and keep the one explaining the most
    // zeros, so a refinement of a coarser progression wins over its cosets
    struct Best {
      double p, b;
      std::vector<std::pair<long long, size_t>> hits;
      std::vector<double> misses;
    };
    std::optional<Best> best_cand;
    int tried = 0;
    for (const auto& [bucket, cell] : cands) {
      if (++tried > 12) break;
      if (cell.first < 2) break;  // histogram exhausted: everything is unique
      double p0 = cell.second / cell.first;
      if (p0 < 10.0 * gap_tol) continue;
      double match_tol = gap_tol * std::max(1.0, p0);

      // largest circular cluster of phases x/p0 mod 1
      std::vector<std::pair<double, size_t>> phases;
      for (size_t i : idx) {
        double ph = std::fmod(live[i].x / p0, 1.0);
        if (ph < 0) ph += 1.0;
        phases.emplace_back(ph, i);
      }
      std::sort(phases.begin(), phases.end());
      double phase_tol = 2.0 * match_tol / p0;
      size_t m = phases.size();
      size_t best_start = 0, best_count = 0;
      for (size_t s = 0, e = 0; s < m; ++s) {
        if (e < s) e = s;
        while (e < s + m) {
          double pe = phases[e % m].first + (e >= m ? 1.0 : 0.0);
          if (pe - phases[s].first > phase_tol) break;
          ++e;
        }
        if (e - s > best_count) {
          best_count = e - s;
          best_start = s;
        }
      }
      if (best_count < static_cast<size_t>(opts.min_members)) continue;
      double cx = 0.0, cy = 0.0;
      for (size_t t = best_start; t < best_start + best_count; ++t) {
        double ph = phases[t % m].first;
        cx += std::cos(2.0 * M_PI * ph);
        cy += std::sin(2.0 * M_PI * ph);
      }
      double offset0 = std::atan2(cy, cx) / (2.0 * M_PI);
      if (offset0 < 0) offset0 += 1.0;
      double b0 = offset0 * p0;

      // match against slots b0 + n*p0 and refine (p, b) by least squares
      auto match_slots = [&](double p, double b, std::vector<std::pair<long long, size_t>>& hits,
                             std::vector<double>& misses) {
        hits.clear();
        misses.clear();
        long long n_lo = static_cast<long long>(std::ceil((zeros.x_lo() - b) / p - 1e-9));
        long long n_hi = static_cast<long long>(std::floor((zeros.x_hi() - b) / p + 1e-9));
        for (long long n = n_lo; n <= n_hi; ++n) {
          double target = b + n * p;
          // nearest live zero
          size_t best_i = SIZE_MAX;
          double best_d = match_tol;
          auto it = std::lower_bound(live.begin(), live.end(), target,
                                     [](const LiveZero& z, double t) { return z.x < t; });
          for (int dir = 0; dir < 2; ++dir) {
            auto jt = (dir == 0) ? it : (it == live.begin() ? live.end() : std::prev(it));
            if (jt == live.end()) continue;
            if (jt->avail <= 0) continue;
            double d = std::abs(jt->x - target);
            if (d <= best_d) {
              best_d = d;
              best_i = static_cast<size_t>(jt - live.begin());
            }
          }
          if (best_i != SIZE_MAX)
            hits.emplace_back(n, best_i);
          else
            misses.push_back(target);
        }
      };

      std::vector<std::pair<long long, size_t>> hits;
      std::vector<double> misses;
      match_slots(p0, b0, hits, misses);
      if (hits.size() < static_cast<size_t>(opts.min_members)) continue;

      for (int refine = 0; refine < 2; ++refine) {
        double sn = 0, sx = 0, snn = 0, snx = 0;
        for (const auto& [n, i] : hits) {
          sn += n;
          sx += live[i].x;
          snn += static_cast<double>(n) * n;
          snx += n * live[i].x;
        }
        double cnt = static_cast<double>(hits.size());
        double denom = cnt * snn - sn * sn;
        if (std::abs(denom) < 1e-30) break;
        double p_fit = (cnt * snx - sn * sx) / denom;
        double b_fit = (sx - p_fit * sn) / cnt;
        if (p_fit <= 0) break;
        match_slots(p_fit, b_fit, hits, misses);
        p0 = p_fit;
        b0 = b_fit;
      }
      if (hits.size() < static_cast<size_t>(opts.min_members)) continue;
      size_t slots = hits.size() + misses.size();
      if (misses.size() > std::max<size_t>(1, slots / 5)) continue;
      if (!best_cand || hits.size() > best_cand->hits.size())
        best_cand = Best{p0, b0, hits, misses};
    }
    if (!best_cand) break;

    int mult = INT32_MAX;
    for (const auto& [n, i] : best_cand->hits) mult = std::min(mult, live[i].avail);
    for (const auto& [n, i] : best_cand->hits) live[i].avail -= mult;
    double offset = std::fmod(best_cand->b, best_cand->p);
    if (offset < 0) offset += best_cand->p;
    out.progressions.push_back(Progression{best_cand->p, offset, mult});
    for (double miss : best_cand->misses)
      for (int c = 0; c < mult; ++c) out.exceptional_minus.push_back(miss);
  }

  int leftover = 0;
  for (const auto& z : live)
    for (int c = 0; c < z.avail; ++c) {
      out.exceptional_plus.push_back(z.x);
      ++leftover;
    }
  if (leftover > 0.2 * total_mult)
    throw NoProgressionStructure("leftover zeros (" + std::to_string(leftover) + " of " +
                                 std::to_string(total_mult) +
                                 ") exceed 20% and no period explains them");
  if (!opts.allow_exceptional &&
      (!out.exceptional_plus.empty() || !out.exceptional_minus.empty()))
    throw NoProgressionStructure(
        "decomposition left " + std::to_string(out.exceptional_plus.size()) + "+" +
        std::to_string(out.exceptional_minus.size()) +
        " exceptional points (pass allow_exceptional to accept them)");
  std::sort(out.progressions.begin(), out.progressions.end(),
            [](const Progression& a, const Progression& b) { return a.period < b.period; });
  return out;
}

ConsistencyReport consistency_check(const SineProductForm& form, const ProgressionSet& progs,
                                    double period_tol) {
  ConsistencyReport rep;
  std::vector<bool> used(progs.progressions.size(), false);
  for (size_t fi = 0; fi < form.factors.size(); ++fi) {
    const auto& f = form.factors[fi];
    double expected = kPi / f.alpha;
    bool matched = false;
    for (size_t pi = 0; pi < progs.progressions.size(); ++pi) {
      if (used[pi]) continue;
      const auto& p = progs.progressions[pi];
      if (std::abs(p.period - expected) < period_tol && p.multiplicity == f.multiplicity) {
        used[pi] = true;
        rep.matched.push_back({fi, pi, std::abs(p.period - expected)});
        matched = true;
        break;
      }
    }
    if (!matched) rep.unmatched_factors.push_back(fi);
  }
  for (size_t pi = 0; pi < used.size(); ++pi)
    if (!used[pi]) rep.unmatched_progressions.push_back(pi);
  return rep;
}

SineProductForm factorize(const ExpSum& Q, double cutoff, double tol) {
  HExpansion upper = h_expansion(Q, HalfPlane::Upper, cutoff);
  PeelResult peel = peel_sine_factors(upper, tol);
  auto [C, a] = recover_scale(Q, upper, peel.factors);
  SineProductForm form;
  form.basis = Q.basis();
  form.C = C;
  form.a = a;
  form.factors = std::move(peel.factors);
  form.canonicalize();
  return form;
}

}  // namespace sinefactor
