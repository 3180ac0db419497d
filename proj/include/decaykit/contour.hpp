#pragma once

#include <cmath>
#include <vector>

#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/quadrature.hpp"

namespace decaykit {

// Cache for damped ray integrals of the form
//
//   R(t) = int_0^inf e^{-i d r t} H(a + d r) dr,
//
// along a ray of unit direction d (Im d < 0) descending from a branch point
// a, so |e^{-i d r t}| = e^{-|Im d| r t}. H may carry an integrable algebraic
// factor r^(eta-1) at the origin; the cache stores Chebyshev panels of
// G(v) = H(r(v)) dr/dv in the peeled variable v = r^eta, which is smooth.
// Built once per ray, evaluated for many t at interpolant cost.
struct RayCache {
  double eta = 1.0;
  complex_t dir{0.0, -1.0};
  double v_max = 0.0;
  double r_lo = 0.0;     // left truncation of the radial variable
  double dropped = 0.0;  // bound on the modulus dropped at both ends
  std::vector<ChebPanel> panels;

  double r_of(double v) const { return eta == 1.0 ? v : std::pow(v, 1.0 / eta); }

  complex_t integral(double t) const {
    complex_t total{};
    const GaussRule& gr = gauss_legendre(15);
    const double damp = -dir.imag();          // decay rate per unit r t
    const double speed = std::abs(dir.real()) + damp;  // phase+decay advance
    for (const auto& p : panels) {
      const double ra = r_of(p.a);
      if (ra * t * damp > 46.0) break;  // panels sorted; the rest is dead
      double vb = p.b;
      if (t > 0.0) {
        const double r_cut = 48.0 / (t * damp);
        if (r_of(p.b) > r_cut) vb = std::pow(r_cut, eta);
      }
      if (vb <= p.a) continue;
      const double rb = r_of(vb);
      int nch = 1;
      if (t > 0.0)
        nch = std::max(1, static_cast<int>(std::ceil((rb - ra) * t * speed / 3.0)));
      nch = std::min(nch, 4096);
      double v0 = p.a;
      for (int c = 0; c < nch; ++c) {
        double v1 = vb;
        if (t > 0.0 && nch > 1 && c + 1 < nch) {
          const double r1 = ra + (rb - ra) * (c + 1.0) / nch;
          v1 = std::pow(r1, eta);
        }
        const double cm = 0.5 * (v0 + v1);
        const double hh = 0.5 * (v1 - v0);
        complex_t s{};
        for (int i = 0; i < 15; ++i) {
          const double v = cm + hh * gr.x[i];
          const double r = r_of(v);
          s += gr.w[i] * p.eval(v) * std::exp(-iu() * dir * (r * t));
        }
        total += s * hh;
        v0 = v1;
      }
    }
    return total;
  }
};

// Build a ray cache for H on (r_lo, r_hi), with r_hi grown until the
// remainder bound |H(r_hi)| r_hi falls below tol (H must decay at least like
// 1/r^2 there).
template <class H>
RayCache build_ray_cache(H&& h, double eta, complex_t dir, double r_scale, double tol) {
  RayCache rc;
  rc.eta = eta;
  rc.dir = dir;
  rc.r_lo = 0.0;  // panels reach the branch point; nodes stay interior
  double r_hi = 100.0 * r_scale;
  for (int k = 0; k < 60; ++k) {
    const double bound = std::abs(h(r_hi)) * r_hi;
    if (bound < 0.3 * tol) break;
    r_hi *= 3.0;
    if (r_hi > 1e14 * r_scale)
      throw QuadratureFailure("ray cache: integrand tail does not decay");
  }
  rc.dropped = std::abs(h(r_hi)) * r_hi;
  rc.v_max = std::pow(r_hi, eta);

  auto g = [&h, eta](double v) -> complex_t {
    const double r = std::pow(v, 1.0 / eta);
    const double drdv = (1.0 / eta) * std::pow(v, 1.0 / eta - 1.0);
    return h(r) * drdv;
  };
  // Geometric initial mesh resolves the many scales down to the branch point.
  std::vector<double> mesh;
  for (double r = 1e-12 * r_scale; r < r_hi; r *= 4.0) mesh.push_back(std::pow(r, eta));
  rc.panels = build_cheb_panels(g, 0.0, rc.v_max, tol / std::max(1.0, rc.v_max), 20,
                                3000, mesh, 1e-13, 0.05 * tol);
  return rc;
}

}  // namespace decaykit
