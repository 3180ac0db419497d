#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "decaykit/contour.hpp"
#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/evolution.hpp"
#include "decaykit/poles.hpp"
#include "decaykit/quadrature.hpp"

namespace decaykit {

// Renormalized one-loop theory of a heavy scalar (mass M) decaying into two
// light scalars (mass m) through a trilinear coupling lambda mu Phi phi^2.
// Everything is expressed through the finite subtracted self-energy
//
//   Sigma2(s) = kappa [ int_0^1 dxi log((m^2 - xi(1-xi) s)/m^2) - C ],
//   kappa = mu^2 / (2 (4 pi)^2),    C such that Re Sigma2(M^2) = 0,
//
// equivalently the once-subtracted dispersion relation over
// rho(s) = sqrt(1 - 4 m^2/s). The divergent loop is never computed.

struct RelParams {
  double M = 1.0;       // heavy mass
  double m = 0.25;      // light mass
  double mu = 1.0;      // coupling mass scale
  double lambda = 0.1;  // dimensionless coupling
  double p = 0.0;       // spatial momentum magnitude

  double E_p() const { return std::sqrt(p * p + M * M); }
};

inline void validate(const RelParams& q) {
  if (!(q.M > 0.0)) throw std::invalid_argument("relativistic: M must be > 0");
  if (!(q.m >= 0.0)) throw std::invalid_argument("relativistic: m must be >= 0");
  if (!(q.mu > 0.0)) throw std::invalid_argument("relativistic: mu must be > 0");
  if (!(q.lambda >= 0.0)) throw std::invalid_argument("relativistic: lambda must be >= 0");
  if (!(q.p >= 0.0)) throw std::invalid_argument("relativistic: p must be >= 0");
}

inline void require_open_channel(const RelParams& q, const char* op) {
  if (!(q.M > 2.0 * q.m))
    throw ClosedChannel(std::string(op) + ": M <= 2m, decay channel closed");
}

namespace detail {

inline double rel_kappa(const RelParams& q) { return q.mu * q.mu / (32.0 * kPi * kPi); }

inline void require_massive_pair(const RelParams& q, const char* op) {
  if (!(q.m > 0.0))
    throw std::invalid_argument(std::string(op) +
                                ": m = 0 makes the on-shell subtraction infrared "
                                "singular; use m > 0");
}

inline QuadOptions rel_quad_opts(const char* ctx) {
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-13;
  opt.context = ctx;
  return opt;
}

// Feynman-parameter roots of m^2 - xi(1-xi) x for real x; empty below 4 m^2.
inline std::vector<double> xi_breakpoints(double m2, double x) {
  std::vector<double> pts;
  if (x > 0.0 && x >= 4.0 * m2) {
    const double d = std::sqrt(std::max(0.0, 1.0 - 4.0 * m2 / x));
    pts.push_back(0.5 * (1.0 - d));
    pts.push_back(0.5 * (1.0 + d));
  } else if (x > 0.0) {
    pts.push_back(0.5);  // closest approach of the log argument to zero
  }
  return pts;
}

// Strictly increasing mesh from endpoints plus interior breakpoints; interior
// points too close to each other or to an end are dropped.
inline std::vector<double> mesh_with_breaks(double a, double b,
                                            const std::vector<double>& breaks) {
  const double gap = 1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
  std::vector<double> interior;
  for (double x : breaks)
    if (x > a + gap && x < b - gap) interior.push_back(x);
  std::sort(interior.begin(), interior.end());
  std::vector<double> out{a};
  for (double x : interior)
    if (x - out.back() > gap) out.push_back(x);
  out.push_back(b);
  return out;
}

// Subtraction constant C = int_0^1 log|(m^2 - xi(1-xi) M^2)/m^2| dxi,
// cached per (m, M).
inline double rel_subtraction_constant(double m, double M) {
  static std::mutex mtx;
  static std::map<std::pair<double, double>, double> cache;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find({m, M});
    if (it != cache.end()) return it->second;
  }
  const double m2 = m * m, M2 = M * M;
  std::vector<double> pts = mesh_with_breaks(0.0, 1.0, xi_breakpoints(m2, M2));
  auto f = [m2, M2](double xi) {
    const double a = std::abs(m2 - xi * (1.0 - xi) * M2) / m2;
    return (a > 0.0) ? std::log(a) : -700.0;
  };
  const double val = integrate_segments(f, pts, rel_quad_opts("rel subtraction"));
  std::lock_guard<std::mutex> lock(mtx);
  cache[{m, M}] = val;
  return val;
}

}  // namespace detail

// C for the given parameters (defines the mass renormalization point).
inline double subtraction_constant(const RelParams& q) {
  detail::require_massive_pair(q, "subtraction_constant");
  return detail::rel_subtraction_constant(q.m, q.M);
}

// On-shell decay width function Gamma(s) = mu^2/(32 pi M) sqrt(1 - 4m^2/s).
inline double gamma_rel(const RelParams& q, double s) {
  validate(q);
  const double thr = 4.0 * q.m * q.m;
  if (s < thr) throw BelowThreshold("gamma_rel: s below the two-body threshold");
  return q.mu * q.mu / (32.0 * kPi * q.M) * std::sqrt(1.0 - thr / s);
}

// Closed-form (Feynman-parameter) evaluation of the subtracted self-energy at
// complex s, on either sheet. The second sheet subtracts the full cut
// discontinuity continued off the axis:
// Sigma_II(s) = Sigma_I(s) - 2 pi i kappa sqrt(1 - 4 m^2/s).
inline complex_t sigma2_rel_closed(const RelParams& q, complex_t s,
                                   Sheet sheet = Sheet::first) {
  validate(q);
  detail::require_massive_pair(q, "sigma2_rel_closed");
  const double m2 = q.m * q.m;
  const double thr = 4.0 * m2;
  if (std::abs(s.imag()) <= 1e-12 && s.real() >= thr - 1e-12)
    throw OnCut("sigma2_rel_closed: s within guard band of the cut");

  std::vector<double> pts =
      detail::mesh_with_breaks(0.0, 1.0, detail::xi_breakpoints(m2, s.real()));
  auto f = [m2, s](double xi) -> complex_t {
    return std::log((m2 - xi * (1.0 - xi) * s) / m2);
  };
  const complex_t integral =
      integrate_segments(f, pts, detail::rel_quad_opts("rel sigma2 closed"));
  const double kappa = detail::rel_kappa(q);
  complex_t first = kappa * (integral - detail::rel_subtraction_constant(q.m, q.M));
  if (sheet == Sheet::first) return first;
  return first - kTwoPi * iu() * kappa * std::sqrt(1.0 - thr / s);
}

// Boundary value on the upper lip of the cut: real part by quadrature of the
// log modulus, imaginary part -pi kappa rho(x) above threshold.
inline complex_t sigma2_rel_boundary(const RelParams& q, double x) {
  validate(q);
  detail::require_massive_pair(q, "sigma2_rel_boundary");
  const double m2 = q.m * q.m;
  const double thr = 4.0 * m2;
  std::vector<double> pts = detail::mesh_with_breaks(0.0, 1.0, detail::xi_breakpoints(m2, x));
  auto f = [m2, x](double xi) {
    const double a = std::abs(m2 - xi * (1.0 - xi) * x) / m2;
    return (a > 0.0) ? std::log(a) : -700.0;
  };
  const double re_int = integrate_segments(f, pts, detail::rel_quad_opts("rel boundary"));
  const double kappa = detail::rel_kappa(q);
  const double re = kappa * (re_int - detail::rel_subtraction_constant(q.m, q.M));
  const double im = (x > thr) ? -kPi * kappa * std::sqrt(1.0 - thr / x) : 0.0;
  return complex_t(re, im);
}

// Once-subtracted dispersion representation, the independent cross-check of
// the closed form:
// Sigma2(s) = kappa [ s int_{4m^2}^inf ds' rho(s')/(s'(s-s')) - C ].
inline complex_t sigma2_rel_dispersion(const RelParams& q, complex_t s) {
  validate(q);
  detail::require_massive_pair(q, "sigma2_rel_dispersion");
  const double m2 = q.m * q.m;
  const double thr = 4.0 * m2;
  if (std::abs(s.imag()) <= 1e-12 && s.real() >= thr - 1e-12)
    throw OnCut("sigma2_rel_dispersion: s within guard band of the cut");
  const double S = 1e6 * std::max(q.M * q.M, thr);

  // s' = 4 m^2 + u^2 removes the square-root edge at threshold:
  // rho(s') ds' / (s'(s-s')) = 2 u^2 du / ((4m^2+u^2)^{3/2} (s - 4m^2 - u^2)).
  auto g = [m2, s](double u) -> complex_t {
    const double u2 = u * u;
    const double sp = 4.0 * m2 + u2;
    return 2.0 * u2 / (std::pow(sp, 1.5) * (s - sp));
  };
  const double u_top = std::sqrt(S - thr);
  std::vector<double> ubreaks;
  if (s.real() > thr && s.real() < S) ubreaks.push_back(std::sqrt(s.real() - thr));
  std::vector<double> pts = detail::mesh_with_breaks(0.0, u_top, ubreaks);
  QuadOptions opt = detail::rel_quad_opts("rel dispersion");
  opt.abs_tol = 1e-15;
  const complex_t core = integrate_segments(g, pts, opt);
  // rho ~ 1 beyond S; the subtracted tail is s * log(1 - s/S)/s -> -s/S at 0.
  const complex_t s_tail =
      (std::abs(s) > 1e-8 * S) ? std::log(1.0 - s / S) : -s / S;
  const double kappa = detail::rel_kappa(q);
  return kappa * (s * core + s_tail - detail::rel_subtraction_constant(q.m, q.M));
}

// d Sigma_II / ds: Richardson differences for the Feynman-parameter part plus
// the analytic derivative of the continuation term.
inline complex_t sigma2_rel_derivative(const RelParams& q, complex_t s,
                                       Sheet sheet = Sheet::second) {
  const double h = 1e-6 * std::max(1.0, std::abs(s));
  auto f = [&](complex_t z) { return sigma2_rel_closed(q, z, Sheet::first); };
  const complex_t d1 = (f(s + h) - f(s - h)) / (2.0 * h);
  const complex_t d2 = (f(s + 0.5 * h) - f(s - 0.5 * h)) / h;
  complex_t d = (4.0 * d2 - d1) / 3.0;
  if (sheet == Sheet::second) {
    const double thr = 4.0 * q.m * q.m;
    const complex_t rho = std::sqrt(1.0 - thr / s);
    d -= kTwoPi * iu() * detail::rel_kappa(q) * (thr / (s * s)) / (2.0 * rho);
  }
  return d;
}

// Second-sheet propagator pole s_pole = M^2 + lambda^2 Sigma_II(s_pole),
// seeded by the golden-rule value M^2 - i lambda^2 M Gamma(M^2). The residue
// is the field-strength factor Z = 1/(1 - lambda^2 Sigma_II'(s_pole)).
inline PoleResult find_pole_rel(double mu, double m, double M, double lambda) {
  RelParams q{M, m, mu, lambda, 0.0};
  validate(q);
  require_open_channel(q, "find_pole_rel");
  detail::require_massive_pair(q, "find_pole_rel");
  if (!(lambda > 0.0)) throw std::invalid_argument("find_pole_rel: lambda must be > 0");
  const double l2 = lambda * lambda;
  const double M2 = M * M;
  const complex_t seed(M2, -l2 * M * gamma_rel(q, M2));
  auto den = [&](complex_t s) {
    return s - M2 - l2 * sigma2_rel_closed(q, s, Sheet::second);
  };
  auto dden = [&](complex_t s) {
    return complex_t(1.0, 0.0) - l2 * sigma2_rel_derivative(q, s, Sheet::second);
  };
  PoleResult res = detail::polish_root(den, dden, seed, "find_pole_rel");
  if (res.location.imag() >= 0.0)
    throw WrongSheet("find_pole_rel: converged with Im >= 0 (no decay)");
  if (!(res.location.real() > 4.0 * m * m))
    throw WrongSheet("find_pole_rel: pole drifted below threshold");
  res.residue = residue_from_derivative(dden(res.location));
  return res;
}

inline PoleResult find_pole_rel(const RelParams& q) {
  return find_pole_rel(q.mu, q.m, q.M, q.lambda);
}

// ---------------------------------------------------------------------------
// Correlation-function time evolution
// ---------------------------------------------------------------------------

namespace detail {

// Shifted-energy denominator of the two-point function: the full energy is
// E_p + E, and s(E) = M^2 + E (2 E_p + E).
struct RelKernel {
  RelParams q;
  double Ep = 0.0, l2 = 0.0;

  complex_t s_of(complex_t E) const { return q.M * q.M + E * (2.0 * Ep + E); }
  complex_t D0(complex_t E) const { return E * (2.0 * Ep + E); }
  complex_t D(complex_t E, Sheet sheet) const {
    return D0(E) - l2 * sigma2_rel_closed(q, s_of(E), sheet);
  }
  // Correction integrand for the line method.
  complex_t g(complex_t E) const {
    const complex_t s = l2 * sigma2_rel_closed(q, s_of(E), Sheet::first);
    const complex_t d0 = D0(E);
    return s / (d0 * (d0 - s));
  }
};

}  // namespace detail

// Two-point correlation amplitude by direct contour integration. The Feynman
// contour passes above the positive-frequency structure (x > -E_p) and below
// the negative-frequency one (x < -E_p); both map to the upper lip of the
// self-energy cut. The free part contributes exactly e^{-i E_p t} / (2 E_p).
inline AmplitudeSeries correlation_amplitude_line(const RelParams& q,
                                                  const TimeGrid& grid) {
  validate(q);
  validate(grid);
  AmplitudeSeries out;
  out.grid = grid;
  out.method = Method::line;
  out.amplitude.resize(grid.nodes.size());
  const double Ep = q.E_p();
  if (q.lambda == 0.0) {
    for (std::size_t i = 0; i < grid.nodes.size(); ++i)
      out.amplitude[i] = std::exp(complex_t(0.0, -Ep * grid.nodes[i])) / (2.0 * Ep);
    out.finalize_probability();
    return out;
  }
  require_open_channel(q, "correlation_amplitude");
  detail::require_massive_pair(q, "correlation_amplitude");

  detail::RelKernel K{q, Ep, q.lambda * q.lambda};
  // The integrand has no singularity above the Feynman contour, so the
  // height only trades e^{eps t} growth (which amplifies the fixed absolute
  // panel error) against distance from the cut lips (evaluation cost).
  double eps = 0.01 * q.M;
  const double t_max = grid.nodes.back();
  if (t_max > 0.0) eps = std::min(eps, 10.0 / t_max);

  const double eplus = -Ep + std::sqrt(q.p * q.p + 4.0 * q.m * q.m);
  const double eminus = -Ep - std::sqrt(q.p * q.p + 4.0 * q.m * q.m);
  const double X = 30.0 * std::max({q.M, Ep, 1.0});

  auto gr = [&](double x) { return K.g(complex_t(x, eps)); };
  auto gl = [&](double x) { return K.g(complex_t(x, -eps)); };

  auto fan = [X](std::vector<double>& mesh, double x0, double scale, double lo,
                 double hi) {
    for (double d = scale; d < 2.0 * X; d *= 2.0) {
      if (x0 - d > lo) mesh.push_back(x0 - d);
      if (x0 + d < hi) mesh.push_back(x0 + d);
    }
    if (x0 > lo && x0 < hi) mesh.push_back(x0);
  };
  std::vector<double> mesh_r, mesh_l;
  fan(mesh_r, 0.0, eps, -Ep, X);
  fan(mesh_r, eplus, std::max(eps, 0.05 * q.m * q.m / Ep), -Ep, X);
  fan(mesh_l, -2.0 * Ep, eps, -X, -Ep);
  fan(mesh_l, eminus, std::max(eps, 0.05 * q.m * q.m / Ep), -X, -Ep);

  auto panels_r = build_osc_panels(gr, -Ep, X, 1e-13, 24, 6000, std::move(mesh_r));
  auto panels_l = build_osc_panels(gl, -X, -Ep, 1e-13, 24, 6000, std::move(mesh_l));

  const GaussRule& g15 = gauss_legendre(15);
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double t = grid.nodes[i];
    complex_t corr = iu() / kTwoPi *
                     (std::exp(eps * t) * osc_integral(panels_r, t) +
                      std::exp(-eps * t) * osc_integral(panels_l, t));
    // Vertical jog at x = -E_p connecting the two lips.
    complex_t jog{};
    for (int k = 0; k < 15; ++k) {
      const double y = eps * g15.x[k];
      jog += g15.w[k] * K.g(complex_t(-Ep, y)) * std::exp(y * t);
    }
    corr += -(1.0 / kTwoPi) * std::exp(complex_t(0.0, Ep * t)) * jog * eps;
    out.amplitude[i] =
        std::exp(complex_t(0.0, -Ep * t)) * (1.0 / (2.0 * Ep) + corr);
  }
  out.finalize_probability();
  return out;
}

// Pole + single-hairpin decomposition of the correlation amplitude. The only
// branch point in the shifted energy is e+ = sqrt(p^2 + 4 m^2) - E_p; the
// negative-frequency continuum deforms onto the same ray.
struct RelDecomposition {
  RelParams q;
  double Ep = 0.0;
  PoleResult s_pole;
  complex_t E_star{};
  complex_t residue_E{};
  double edge = 0.0;
  RayCache ray;

  complex_t inner_pole(double t) const {
    return residue_E * std::exp(-iu() * E_star * t);
  }
  complex_t inner_cut(double t) const {
    return -(iu() * ray.dir) * std::exp(complex_t(0.0, -edge * t)) *
           ray.integral(t) / kTwoPi;
  }
  // Full amplitude including the carrier phase.
  complex_t amplitude(double t) const {
    return std::exp(complex_t(0.0, -Ep * t)) * (inner_pole(t) + inner_cut(t));
  }
};

inline RelDecomposition decompose_correlation(const RelParams& q) {
  validate(q);
  require_open_channel(q, "decompose_correlation");
  detail::require_massive_pair(q, "decompose_correlation");
  if (!(q.lambda > 0.0))
    throw std::invalid_argument("decompose_correlation: lambda must be > 0");

  RelDecomposition dec;
  dec.q = q;
  dec.Ep = q.E_p();
  dec.s_pole = find_pole_rel(q);
  const double M2 = q.M * q.M;
  const double Ep = dec.Ep;
  dec.E_star = -Ep + std::sqrt(complex_t(Ep * Ep, 0.0) + dec.s_pole.location - M2);
  dec.residue_E = dec.s_pole.residue / (2.0 * Ep + 2.0 * dec.E_star);
  dec.edge = -Ep + std::sqrt(q.p * q.p + 4.0 * q.m * q.m);

  detail::RelKernel K{q, Ep, q.lambda * q.lambda};
  const double kappa = detail::rel_kappa(q);
  const double thr = 4.0 * q.m * q.m;
  const double edge = dec.edge;
  const complex_t down(0.0, -1.0);
  // Self-energy argument clamped just off the branch point: Sigma is finite
  // there (square-root approach), so the clamp is exact to ~1e-10 while the
  // square-root prefactor keeps the true radius.
  const double sguard = 4e-12 * std::max(1.0, q.M * q.M);
  auto h = [K, kappa, thr, edge, down, sguard](double r) -> complex_t {
    const complex_t E = edge + down * r;
    const complex_t s = K.s_of(E);
    complex_t s_sig = s;
    if (std::abs(s_sig.imag()) < sguard) s_sig = complex_t(s_sig.real(), -sguard);
    const complex_t rho = std::sqrt(1.0 - thr / s);
    const complex_t disc = kTwoPi * iu() * kappa * K.l2 * rho;
    const complex_t D1 = K.D0(E) - K.l2 * sigma2_rel_closed(K.q, s_sig, Sheet::first);
    const complex_t D2 = D1 + disc;
    return disc / (D1 * D2);
  };
  dec.ray =
      build_ray_cache(h, 1.5, down, std::max(q.M, 1.0), 2e-9 * (1.0 / (2.0 * Ep)));
  return dec;
}

// Correlation amplitude; uses the decomposition (robust at long times) and
// falls back to the line contour if the pole search fails.
inline AmplitudeSeries correlation_amplitude(const RelParams& q, const TimeGrid& grid) {
  validate(grid);
  if (q.lambda == 0.0) return correlation_amplitude_line(q, grid);
  RelDecomposition dec;
  try {
    dec = decompose_correlation(q);
  } catch (const NoConvergence&) {
    return correlation_amplitude_line(q, grid);
  }
  AmplitudeSeries out;
  out.grid = grid;
  out.method = Method::decomposed;
  const std::size_t n = grid.nodes.size();
  out.amplitude.resize(n);
  out.pole_part.emplace(n);
  out.cut_part.emplace(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.nodes[i];
    const complex_t carrier = std::exp(complex_t(0.0, -dec.Ep * t));
    const complex_t pp = carrier * dec.inner_pole(t);
    const complex_t cp = carrier * dec.inner_cut(t);
    (*out.pole_part)[i] = pp;
    (*out.cut_part)[i] = cp;
    out.amplitude[i] = pp + cp;
  }
  out.finalize_probability();
  return out;
}

// ---------------------------------------------------------------------------
// Van Hove limit and lifetimes
// ---------------------------------------------------------------------------

// Closed-form limit of the rescaled correlation amplitude:
// A(t_tilde) = (1/2 E_p) exp(-(M/E_p) (Gamma/2) t_tilde).
inline AmplitudeSeries vanhove_limit_rel(const RelParams& q,
                                         const TimeGrid& t_tilde_grid) {
  validate(q);
  require_open_channel(q, "vanhove_limit_rel");
  validate(t_tilde_grid);
  const double Ep = q.E_p();
  const double rate = q.M / Ep * gamma_rel(q, q.M * q.M);
  AmplitudeSeries out;
  out.grid = t_tilde_grid;
  out.method = Method::closed_form;
  out.amplitude.resize(t_tilde_grid.nodes.size());
  for (std::size_t i = 0; i < t_tilde_grid.nodes.size(); ++i)
    out.amplitude[i] =
        std::exp(-0.5 * rate * t_tilde_grid.nodes[i]) / (2.0 * Ep);
  out.finalize_probability();
  return out;
}

// Physical (unrescaled) lifetime with the relativistic dilation factor:
// tau_p = (E_p / M) / (lambda^2 Gamma(M^2)).
inline double lifetime_dilated(const RelParams& q) {
  validate(q);
  require_open_channel(q, "lifetime_dilated");
  if (!(q.lambda > 0.0))
    throw std::invalid_argument("lifetime_dilated: lambda must be > 0");
  return q.E_p() / q.M / (q.lambda * q.lambda * gamma_rel(q, q.M * q.M));
}

inline TimeGrid default_correlation_grid(const RelParams& q, int n = 400) {
  const double tp = lifetime_dilated(q);
  return log_grid(1e-3 * tp, 10.0 * tp, n);
}

}  // namespace decaykit
