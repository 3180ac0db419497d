#pragma once

#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/quadrature.hpp"
#include "decaykit/spectral.hpp"

namespace decaykit {

// Second-order self-energy of the decay problem,
//
//   Sigma(z) = int_thr^inf dE'/(2 pi) Gamma(E') / (z - E'),
//
// evaluated (i) as the boundary pair Delta(E) - i Gamma(E)/2 on the upper lip
// of the cut, (ii) at arbitrary complex z on the first sheet, and (iii) on the
// second sheet via the closed-form continuation of Gamma:
//
//   Sigma_II(z) = Sigma_I(z) - i Gamma_c(z).
//
// The flat-cutoff family has the closed form (gamma/2 pi) Log(z/(z-Lambda));
// the power-law family is integrated adaptively with a two-term singularity
// subtraction near the cut. The phase-space density is not integrable, so its
// unsubtracted dispersion integral does not exist here (the relativistic
// module provides the once-subtracted version).

struct BoundaryValue {
  double delta = 0.0;  // level shift Delta(E)
  double gamma = 0.0;  // width Gamma(E)
};

namespace detail {

constexpr double kCutGuard = 1e-12;

inline void require_dispersive(const SpectralModel& model, const char* op) {
  if (std::holds_alternative<TwoBodyPhaseSpace>(model))
    throw NonIntegrable(std::string(op) +
                        ": phase-space density requires the subtracted "
                        "relativistic dispersion relation");
}

// First-sheet Sigma for the power-law family at complex z, off the cut.
// Near the cut (tiny |Im z| with Re z inside the support) a two-term Taylor
// subtraction of the density removes the near-singular structure; integration
// through the threshold uses the exponent-peeling substitution throughout.
inline complex_t sigma_powerlaw_first(const PowerLawExp& m, complex_t z) {
  const SpectralModel model = m;
  const double thr = 0.0;
  const double L = m.Lambda;
  const double x0 = z.real();
  const double ay = std::abs(z.imag());
  const double B = std::max(30.0 * L, x0 + 10.0 * L);
  const double gscale = gamma_of(model, std::clamp(x0, 0.5 * L, B));

  QuadOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-14 * (1.0 + gscale);
  opt.context = "sigma2(powerlaw)";

  auto integrand = [&](double E) -> complex_t {
    return gamma_of(model, E) / (z - E);
  };

  complex_t total{};
  const bool windowed =
      (x0 > thr + 0.05 * L) && (x0 < B) && (ay < 0.1 * (x0 - thr));
  if (windowed) {
    const double d = 0.45 * std::min(x0 - thr, 4.0 * L);
    const double a = x0 - d, b = x0 + d;
    if (a > thr) total += integrate_peeled(integrand, thr, a, m.eta, opt);
    const double g0 = gamma_of(model, x0);
    const double g1 = gamma_derivative(model, x0);
    auto smooth = [&](double E) -> complex_t {
      return (gamma_of(model, E) - g0 - g1 * (E - x0)) / (z - E);
    };
    total += integrate_segments(smooth, {a, x0, b}, opt);
    const complex_t I0 = std::log((z - a) / (z - b));
    const complex_t I1 = -(b - a) + (z - x0) * I0;
    total += g0 * I0 + g1 * I1;
    total += integrate(integrand, b, B, opt);
  } else {
    // Evaluation point below, just above, or far from the threshold: peel the
    // first shape-scale with the near-singular abscissa as a breakpoint.
    const double c1 = thr + L;
    total += integrate_peeled(integrand, thr, c1, m.eta, opt, {x0});
    std::vector<double> pts{c1, B};
    if (x0 > c1 * (1.0 + 1e-12) && x0 < B * (1.0 - 1e-12))
      pts.insert(pts.begin() + 1, x0);
    total += integrate_segments(integrand, std::move(pts), opt);
  }
  total += integrate_half_line(integrand, B, L, opt);
  return total / kTwoPi;
}

// Sheet-aware evaluation without the cut guard, for contour integrands that
// legitimately approach a branch point along a ray.
inline complex_t sigma2_complex_unguarded(const SpectralModel& model, complex_t z,
                                          Sheet sheet) {
  complex_t first;
  if (const auto* f = std::get_if<FlatCutoff>(&model)) {
    first = f->gamma / kTwoPi * std::log(z / (z - f->Lambda));
  } else if (const auto* p = std::get_if<PowerLawExp>(&model)) {
    first = sigma_powerlaw_first(*p, z);
  } else {
    throw NonIntegrable(
        "sigma2_complex: phase-space density requires the subtracted "
        "relativistic dispersion relation");
  }
  if (sheet == Sheet::first) return first;
  return first - iu() * gamma_continued(model, z);
}

}  // namespace detail

// Level shift Delta(E): principal value of the dispersion integral at real E,
// via subtraction of the singular part (the subtracted remainder is smooth and
// the principal-value moment is analytic).
inline double delta_pv(const SpectralModel& model, double E) {
  detail::require_dispersive(model, "delta_pv");
  const double thr = threshold(model);
  const double top = support_top(model);
  const double eta = threshold_exponent(model);
  const double L = energy_scale(model);
  const bool finite_support = std::isfinite(top);
  const double B = finite_support ? top : std::max(30.0 * L, E + 10.0 * L);

  QuadOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-14 * (1.0 + gamma_of(model, 0.5 * (thr + std::min(B, thr + L))));
  opt.context = "delta_pv";

  auto integrand = [&](double Ep) -> double { return gamma_of(model, Ep) / (E - Ep); };

  double total = 0.0;
  const bool inside = (E > thr) && (E < top);
  if (inside) {
    double d = 0.45 * std::min(E - thr, 4.0 * L);
    if (finite_support) d = std::min(d, 0.45 * (top - E));
    const double a = E - d, b = E + d;
    if (a > thr) total += integrate_peeled(integrand, thr, a, eta, opt);
    const double g0 = gamma_of(model, E);
    const double g1 = gamma_derivative(model, E);
    auto smooth = [&](double Ep) -> double {
      const double num = gamma_of(model, Ep) - g0 - g1 * (Ep - E);
      return (Ep == E) ? -0.0 : num / (E - Ep);
    };
    total += integrate_segments(smooth, {a, E, b}, opt);
    total += g0 * std::log((E - a) / (b - E));
    total += g1 * (-(b - a) + 0.0);  // PV of (E'-E)/(E-E') over the window
    if (b < B) total += integrate(integrand, b, B, opt);
  } else {
    const double peel_end = thr + std::min(finite_support ? top - thr : L,
                                           (E > thr) ? 0.5 * (E - thr) : L);
    total += integrate_peeled(integrand, thr, peel_end, eta, opt);
    if (peel_end < B) {
      std::vector<double> pts{peel_end, B};
      if (E > peel_end && E < B) pts.insert(pts.begin() + 1, E);
      total += integrate_segments(integrand, std::move(pts), opt);
    }
  }
  if (!finite_support) total += integrate_half_line(integrand, B, L, opt);
  return total / kTwoPi;
}

// Boundary value Sigma(E + i0+) = Delta(E) - (i/2) Gamma(E).
inline BoundaryValue sigma2_boundary(const SpectralModel& model, double E) {
  return BoundaryValue{delta_pv(model, E), gamma_of(model, E)};
}

inline complex_t to_complex(const BoundaryValue& b) {
  return complex_t(b.delta, -0.5 * b.gamma);
}

// Sheet-aware self-energy at complex z. Throws OnCut within 1e-12 of the cut;
// callers needing boundary values must use sigma2_boundary.
inline complex_t sigma2_complex(const SpectralModel& model, complex_t z,
                                Sheet sheet = Sheet::first) {
  detail::require_dispersive(model, "sigma2_complex");
  const double thr = threshold(model);
  const double top = support_top(model);
  if (std::abs(z.imag()) <= detail::kCutGuard && z.real() >= thr - detail::kCutGuard &&
      z.real() <= top + detail::kCutGuard)
    throw OnCut("sigma2_complex: z within guard band of the branch cut");
  return detail::sigma2_complex_unguarded(model, z, sheet);
}

// d Sigma / dz on the requested sheet. Closed form for the flat cutoff;
// Richardson-extrapolated central differences otherwise (the continuation
// term is differentiated analytically).
inline complex_t sigma2_derivative(const SpectralModel& model, complex_t z,
                                   Sheet sheet = Sheet::first) {
  detail::require_dispersive(model, "sigma2_derivative");
  complex_t dfirst;
  if (const auto* f = std::get_if<FlatCutoff>(&model)) {
    dfirst = f->gamma / kTwoPi * (1.0 / z - 1.0 / (z - f->Lambda));
  } else {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    auto s = [&](complex_t w) { return sigma2_complex(model, w, Sheet::first); };
    const complex_t d1 = (s(z + h) - s(z - h)) / (2.0 * h);
    const complex_t d2 = (s(z + 0.5 * h) - s(z - 0.5 * h)) / h;
    dfirst = (4.0 * d2 - d1) / 3.0;
  }
  if (sheet == Sheet::first) return dfirst;
  const auto* p = std::get_if<PowerLawExp>(&model);
  complex_t dgc{};
  if (p) {
    dgc = gamma_continued(model, z) * ((p->eta - 1.0) / z - 1.0 / p->Lambda);
  }  // flat: Gamma_c is constant
  return dfirst - iu() * dgc;
}

}  // namespace decaykit
