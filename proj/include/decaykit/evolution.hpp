#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "decaykit/contour.hpp"
#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/poles.hpp"
#include "decaykit/quadrature.hpp"
#include "decaykit/selfenergy.hpp"
#include "decaykit/spectral.hpp"

namespace decaykit {

// ---------------------------------------------------------------------------
// Time grids and amplitude series
// ---------------------------------------------------------------------------

enum class Spacing { linear, logarithmic, mixed };

struct TimeGrid {
  std::vector<double> nodes;
  Spacing spacing = Spacing::linear;
};

inline void validate(const TimeGrid& g) {
  if (g.nodes.empty()) throw std::invalid_argument("time grid: empty");
  if (g.nodes.front() < 0.0) throw std::invalid_argument("time grid: negative time");
  for (std::size_t i = 1; i < g.nodes.size(); ++i)
    if (!(g.nodes[i] > g.nodes[i - 1]))
      throw std::invalid_argument("time grid: nodes must increase strictly");
}

inline TimeGrid linear_grid(double t0, double t1, int n) {
  if (n < 2 || !(t1 > t0)) throw std::invalid_argument("linear_grid: bad arguments");
  TimeGrid g;
  g.spacing = Spacing::linear;
  g.nodes.resize(n);
  for (int i = 0; i < n; ++i) g.nodes[i] = t0 + (t1 - t0) * i / (n - 1.0);
  return g;
}

inline TimeGrid log_grid(double t0, double t1, int n) {
  if (n < 2 || !(t0 > 0.0) || !(t1 > t0))
    throw std::invalid_argument("log_grid: bad arguments");
  TimeGrid g;
  g.spacing = Spacing::logarithmic;
  g.nodes.resize(n);
  const double l0 = std::log(t0), l1 = std::log(t1);
  for (int i = 0; i < n; ++i) g.nodes[i] = std::exp(l0 + (l1 - l0) * i / (n - 1.0));
  return g;
}

// t = 0 followed by log-spaced nodes: the natural grid for multi-scale decay.
inline TimeGrid mixed_grid(double t_min, double t_max, int n) {
  TimeGrid g = log_grid(t_min, t_max, n - 1);
  g.nodes.insert(g.nodes.begin(), 0.0);
  g.spacing = Spacing::mixed;
  return g;
}

enum class Method { line, decomposed, oracle, closed_form };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::line: return "line";
    case Method::decomposed: return "decomposed";
    case Method::oracle: return "oracle";
    default: return "closed_form";
  }
}

struct AmplitudeSeries {
  TimeGrid grid;
  std::vector<complex_t> amplitude;
  std::vector<double> probability;
  std::optional<std::vector<complex_t>> pole_part;
  std::optional<std::vector<complex_t>> cut_part;
  Method method = Method::line;
  std::vector<std::string> notes;

  void finalize_probability() {
    probability.resize(amplitude.size());
    for (std::size_t i = 0; i < amplitude.size(); ++i)
      probability[i] = std::norm(amplitude[i]);
  }
};

// ---------------------------------------------------------------------------
// Characteristic timescales
// ---------------------------------------------------------------------------

// Zeno time: curvature timescale of P(t) at the origin,
// tau_Z = (1/lambda) [int dE/(2 pi) Gamma(E)]^(-1/2).
inline double zeno_time(const SpectralModel& model, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("zeno_time: lambda must be > 0");
  return 1.0 / (lambda * std::sqrt(total_weight(model)));
}

// Golden-rule lifetime tau_E = 1 / (lambda^2 Gamma(E_a)).
inline double lifetime(const SpectralModel& model, double E_a, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lifetime: lambda must be > 0");
  const double g = gamma_of(model, E_a);
  if (!(g > 0.0)) throw ClosedChannel("lifetime: Gamma(E_a) = 0, channel closed");
  return 1.0 / (lambda * lambda * g);
}

// 600 log nodes between deep Zeno region and late power-law era.
inline TimeGrid default_survival_grid(const SpectralModel& model, double E_a,
                                      double lambda) {
  const double tz = zeno_time(model, lambda);
  const double te = lifetime(model, E_a, lambda);
  return log_grid(1e-4 * tz, 30.0 * te, 600);
}

// ---------------------------------------------------------------------------
// Line-contour method
// ---------------------------------------------------------------------------

namespace detail {

// Straight-line Fourier inversion of the resolvent. The free 1/E part is
// handled analytically (it contributes exactly 1 for t >= 0); the remainder
//
//   g(E) = lambda^2 Sigma(E + E_a) / (E D(E)),   D(E) = E - lambda^2 Sigma(E+E_a)
//
// is panelized once on the line Im E = eps and integrated against e^{-iEt}
// with Legendre/spherical-Bessel moments per node.
struct LineEvaluator {
  double eps = 0.0;
  std::vector<OscPanel> panels;
  double truncation_bound = 0.0;

  complex_t amplitude(double t) const {
    const complex_t corr = osc_integral(panels, t);
    return 1.0 + iu() / kTwoPi * std::exp(eps * t) * corr;
  }
};

inline LineEvaluator build_line_evaluator(const SpectralModel& model, double E_a,
                                          double lambda, double t_max) {
  const double l2 = lambda * lambda;
  const double gEa = gamma_of(model, E_a);
  const double L = energy_scale(model);
  double eps = (gEa > 0.0) ? std::min(0.1 * l2 * gEa, 0.01) : 1e-3 * std::min(1.0, L);
  if (t_max > 0.0) eps = std::min(eps, 10.0 / t_max);

  // Window from the |g| ~ 4 lambda^2 W / |x|^3 far-field bound.
  double W;
  try {
    W = total_weight(model);
  } catch (const NonIntegrable&) {
    W = gEa * L / kTwoPi + 1.0;
  }
  const double a1 = threshold(model) - E_a;
  const double a2 = std::isfinite(support_top(model)) ? support_top(model) - E_a
                                                      : 30.0 * L - E_a;
  double X = lambda * std::sqrt(W) * 11300.0;
  X = std::max({X, std::abs(a1) + 5.0 * L, std::abs(a2) + 5.0 * L, 10.0 * L});

  LineEvaluator ev;
  ev.eps = eps;
  ev.truncation_bound = 2.0 * l2 * W / (kPi * X * X);
  if (ev.truncation_bound > 1e-8)
    throw AliasWarning("survival_line: window truncates spectral weight above 1e-8");

  auto g = [&, l2, E_a](double x) -> complex_t {
    const complex_t E(x, eps);
    const complex_t s = sigma2_complex(model, E + E_a, Sheet::first);
    const complex_t D = E - l2 * s;
    return l2 * s / (E * D);
  };

  // Initial mesh: geometric fans around the structural points of g.
  struct Feature {
    double x, scale;
  };
  std::vector<Feature> feats{{0.0, std::max(eps, 1e-3 * L)},
                             {l2 * delta_pv(model, E_a), std::max(eps, l2 * std::max(gEa, 0.1))},
                             {a1, std::max(0.05 * L, eps)}};
  if (std::isfinite(support_top(model)))
    feats.push_back({support_top(model) - E_a, std::max(0.05 * L, eps)});
  std::vector<double> mesh;
  for (const auto& f : feats) {
    for (double d = f.scale; d < 2.0 * X; d *= 2.0) {
      if (f.x - d > -X) mesh.push_back(f.x - d);
      if (f.x + d < X) mesh.push_back(f.x + d);
    }
    if (f.x > -X && f.x < X) mesh.push_back(f.x);
  }
  ev.panels = build_osc_panels(g, -X, X, 1e-11, 24, 4000, std::move(mesh));
  return ev;
}

}  // namespace detail

// Survival amplitude by direct integration along a horizontal contour just
// above the real axis. Absolute per-node target ~1e-6.
inline AmplitudeSeries survival_line(const SpectralModel& model, double E_a,
                                     double lambda, const TimeGrid& grid) {
  validate(model);
  validate(grid);
  AmplitudeSeries out;
  out.grid = grid;
  out.method = Method::line;
  out.amplitude.resize(grid.nodes.size());
  if (lambda == 0.0) {
    std::fill(out.amplitude.begin(), out.amplitude.end(), complex_t(1.0, 0.0));
    out.finalize_probability();
    return out;
  }
  auto ev = detail::build_line_evaluator(model, E_a, lambda, grid.nodes.back());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    out.amplitude[i] = ev.amplitude(grid.nodes[i]);
  out.finalize_probability();
  return out;
}

// ---------------------------------------------------------------------------
// Pole + branch-cut decomposition
// ---------------------------------------------------------------------------

// Deformation of the inversion contour around the branch cut: one residue
// term from the second-sheet pole plus one damped vertical-ray integral per
// cut edge. Built once; amplitudes at any t >= 0 are then cheap.
struct SurvivalDecomposition {
  PoleResult pole;
  struct Ray {
    double edge = 0.0;   // branch point in the shifted energy variable
    double sign = 1.0;   // +1 left edge of a cut interval, -1 right edge
    RayCache cache;
  };
  std::vector<Ray> rays;

  // Discrete state below the continuum. Densities with a divergent
  // below-threshold level shift (threshold exponent < 1) bind one for any
  // coupling; its weight is O(lambda^4) and it does not decay.
  struct BoundState {
    double energy = 0.0;   // shifted energy, real, below the lower edge
    double weight = 0.0;   // residue of the resolvent (0 < weight < 1)
  };
  std::vector<BoundState> bound;

  complex_t pole_part(double t) const {
    return pole.residue * std::exp(-iu() * pole.location * t);
  }
  complex_t bound_part(double t) const {
    complex_t s{};
    for (const auto& b : bound)
      s += b.weight * std::exp(complex_t(0.0, -b.energy * t));
    return s;
  }
  complex_t cut_part(double t) const {
    complex_t s{};
    for (const auto& r : rays)
      s += r.sign * (iu() * r.cache.dir) * std::exp(complex_t(0.0, -r.edge * t)) *
           r.cache.integral(t);
    return -s / kTwoPi;
  }
  complex_t amplitude(double t) const {
    return pole_part(t) + cut_part(t) + bound_part(t);
  }
};

inline SurvivalDecomposition decompose_survival(const SpectralModel& model,
                                                double E_a, double lambda) {
  validate(model);
  SurvivalDecomposition dec;
  dec.pole = find_pole_nonrel(model, E_a, lambda);
  const double l2 = lambda * lambda;
  const double L = energy_scale(model);

  auto make_ray = [&](double edge, double sign, double eta_ray, complex_t dir) {
    auto h = [&, edge, dir, l2](double r) -> complex_t {
      const complex_t E = edge + dir * r;
      const complex_t w = E + E_a;
      const complex_t s1 = detail::sigma2_complex_unguarded(model, w, Sheet::first);
      const complex_t gc = gamma_continued(model, w);
      const complex_t D1 = E - l2 * s1;
      const complex_t D2 = D1 + iu() * l2 * gc;
      return iu() * l2 * gc / (D1 * D2);
    };
    SurvivalDecomposition::Ray ray;
    ray.edge = edge;
    ray.sign = sign;
    ray.cache = build_ray_cache(h, eta_ray, dir, std::max(L, std::abs(edge)), 2e-9);
    dec.rays.push_back(std::move(ray));
  };

  const double eta = threshold_exponent(model);
  // The threshold ray of the exponential family is slanted to -pi/4: along a
  // vertical ray the continued density e^{-w/Lambda} merely oscillates, while
  // Re w > 0 makes it decay and keeps the cache finite. The flat cutoff has a
  // constant continuation and takes the maximally damped vertical rays.
  const bool finite_top = std::isfinite(support_top(model));
  const complex_t down(0.0, -1.0);
  const complex_t slant = std::polar(1.0, -0.25 * kPi);
  make_ray(threshold(model) - E_a, +1.0, eta, finite_top ? down : slant);
  if (finite_top) make_ray(support_top(model) - E_a, -1.0, 1.0, down);
  // Families with unbounded support: the would-be far hairpin carries weight
  // ~ Gamma(E) at E ~ 40 Lambda, which is below 1e-16 of scale for the
  // exponential family and is dropped.

  // Bound state below the continuum edge. For eta < 1 the level shift
  // diverges at the lower edge and binds a state at distance
  // ~ (lambda^2 pi g^2 / E_a)^(1/(1-eta)); for eta >= 1 the logarithmic or
  // finite shift puts any root exponentially close to the edge, below double
  // resolution and with negligible weight, and the scan reports none.
  {
    const double a1 = threshold(model) - E_a;
    auto den_below = [&](double u) {
      // E = a1 - u, i.e. spectral variable w = threshold - u.
      const complex_t w(threshold(model) - u, 0.0);
      return (a1 - u) - l2 * sigma2_complex(model, w, Sheet::first).real();
    };
    const double u0 = 1e-10 * L;
    if (den_below(u0) > 0.0) {
      double hi = 1e-3 * L;
      while (den_below(hi) > 0.0) hi *= 4.0;
      double lo = u0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        (den_below(mid) > 0.0 ? lo : hi) = mid;
      }
      const double u_b = 0.5 * (lo + hi);
      // Richardson differences with a step inside the below-threshold region
      // (a fixed step would cross the edge when the binding is shallow).
      const double h = 0.05 * u_b;
      const double d1 = (den_below(u_b + h) - den_below(u_b - h)) / (2.0 * h);
      const double d2 = (den_below(u_b + 0.5 * h) - den_below(u_b - 0.5 * h)) / h;
      const double dD = -(4.0 * d2 - d1) / 3.0;  // d/dE = -d/du
      SurvivalDecomposition::BoundState b;
      b.energy = a1 - u_b;
      b.weight = 1.0 / dD;
      if (b.weight > 1e-15) dec.bound.push_back(b);
    }
  }
  return dec;
}

inline AmplitudeSeries survival_decomposed(const SpectralModel& model, double E_a,
                                           double lambda, const TimeGrid& grid) {
  validate(grid);
  SurvivalDecomposition dec = decompose_survival(model, E_a, lambda);
  AmplitudeSeries out;
  out.grid = grid;
  out.method = Method::decomposed;
  const std::size_t n = grid.nodes.size();
  out.amplitude.resize(n);
  out.pole_part.emplace(n);
  out.cut_part.emplace(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.nodes[i];
    const complex_t pp = dec.pole_part(t);
    // The non-resonant remainder (cut plus any bound state) is reported in
    // the cut column; the pole column stays a pure exponential.
    const complex_t cp = dec.cut_part(t) + dec.bound_part(t);
    (*out.pole_part)[i] = pp;
    (*out.cut_part)[i] = cp;
    out.amplitude[i] = pp + cp;
  }
  if (!dec.bound.empty())
    out.notes.push_back("bound state below threshold included in cut column");
  out.finalize_probability();
  return out;
}

// ---------------------------------------------------------------------------
// Exact-diagonalization oracle
// ---------------------------------------------------------------------------

// Discretizes the continuum on Gauss-Legendre nodes (mapped through the
// threshold-exponent substitution so the couplings are smooth), then solves
// the arrowhead eigenproblem through its secular equation. Exactly unitary by
// construction.
inline AmplitudeSeries survival_oracle(const SpectralModel& model, double E_a,
                                       double lambda, int N, const TimeGrid& grid) {
  validate(model);
  validate(grid);
  if (std::holds_alternative<TwoBodyPhaseSpace>(model))
    throw UnsupportedModel("survival_oracle: phase-space family has unbounded support");
  if (N < 64) throw std::invalid_argument("survival_oracle: need N >= 64 modes");
  if (lambda == 0.0) {
    AmplitudeSeries free;
    free.grid = grid;
    free.method = Method::oracle;
    free.amplitude.assign(grid.nodes.size(), complex_t(1.0, 0.0));
    free.finalize_probability();
    return free;
  }

  const double eta = threshold_exponent(model);
  double E_max;
  if (const auto* f = std::get_if<FlatCutoff>(&model))
    E_max = f->Lambda;
  else
    E_max = 10.0 * std::get<PowerLawExp>(model).Lambda;

  // Mode energies and squared couplings lambda^2 v_k^2,
  // v_k^2 = Gamma(E_k) w_k / (2 pi).
  const GaussRule& gr = gauss_legendre(N);
  std::vector<double> Ek(N), v2(N);
  for (int k = 0; k < N; ++k) {
    const double u = 0.5 * (gr.x[k] + 1.0);  // (0,1)
    const double wu = 0.5 * gr.w[k];
    const double e = E_max * std::pow(u, 1.0 / eta);
    const double jac = E_max * std::pow(u, 1.0 / eta - 1.0) / eta;
    Ek[k] = e;
    v2[k] = gamma_of(model, e) * wu * jac / kTwoPi;
  }

  const double l2 = lambda * lambda;
  double sumv2 = 0.0;
  for (double v : v2) sumv2 += v;

  auto fsec = [&](double x) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) s += v2[k] / (x - Ek[k]);
    return x - E_a - l2 * s;
  };
  auto fsec_deriv = [&](double x) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
      const double d = x - Ek[k];
      s += v2[k] / (d * d);
    }
    return 1.0 + l2 * s;
  };

  // One eigenvalue strictly between consecutive mode energies, plus one below
  // and one above the band (f is increasing on every bracket).
  std::vector<double> eig(N + 1);
  double lo_edge = std::min(E_a, Ek.front()) - lambda * std::sqrt(sumv2) - 1e-3;
  while (fsec(lo_edge) >= 0.0) lo_edge -= std::max(1.0, std::abs(lo_edge));
  double hi_edge = std::max(E_a, Ek.back()) + lambda * std::sqrt(sumv2) + 1e-3;
  while (fsec(hi_edge) <= 0.0) hi_edge += std::max(1.0, std::abs(hi_edge));

  for (int j = 0; j <= N; ++j) {
    double lo = (j == 0) ? lo_edge : Ek[j - 1];
    double hi = (j == N) ? hi_edge : Ek[j];
    // Safeguarded Newton from the midpoint; bisection keeps the bracket.
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double fx = fsec(x);
      if (fx < 0.0)
        lo = x;
      else
        hi = x;
      double xn = x - fx / fsec_deriv(x);
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (std::abs(xn - x) <= 8.0 * std::numeric_limits<double>::epsilon() *
                                  (std::abs(x) + 1e-300)) {
        x = xn;
        break;
      }
      x = xn;
    }
    eig[j] = x;
  }

  // Overlap weights |<a|v_j>|^2 from the arrowhead eigenvector structure.
  std::vector<double> wj(N + 1);
  double wsum = 0.0;
  for (int j = 0; j <= N; ++j) {
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
      const double d = eig[j] - Ek[k];
      s += v2[k] / (d * d);
    }
    wj[j] = 1.0 / (1.0 + l2 * s);
    wsum += wj[j];
  }
  for (double& w : wj) w /= wsum;  // completeness, exact by construction

  AmplitudeSeries out;
  out.grid = grid;
  out.method = Method::oracle;
  out.amplitude.resize(grid.nodes.size());
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double t = grid.nodes[i];
    double re = 0.0, im = 0.0;
    for (int j = 0; j <= N; ++j) {
      const double ph = -(eig[j] - E_a) * t;
      re += wj[j] * std::cos(ph);
      im += wj[j] * std::sin(ph);
    }
    out.amplitude[i] = complex_t(re, im);
  }
  out.finalize_probability();
  return out;
}

// ---------------------------------------------------------------------------
// Feature extraction
// ---------------------------------------------------------------------------

struct FeatureReport {
  double tau_z_fitted = 0.0;
  double linear_quadratic_ratio = 0.0;  // |a1 T| / |a2 T^2| on the Zeno window
  double decay_rate_fitted = 0.0;
  double normalization_fitted = 0.0;
  double tail_exponent = 0.0;
  double crossover_time = 0.0;
};

namespace detail {

inline std::pair<std::vector<double>, std::vector<double>> window_points(
    const AmplitudeSeries& s, double t_lo, double t_hi) {
  std::vector<double> t, p;
  for (std::size_t i = 0; i < s.grid.nodes.size(); ++i) {
    const double ti = s.grid.nodes[i];
    if (ti >= t_lo && ti <= t_hi) {
      t.push_back(ti);
      p.push_back(s.probability[i]);
    }
  }
  return {t, p};
}

}  // namespace detail

// Fits the short-time quadratic onset, the golden-rule exponential window,
// the long-time power tail, and the exponential/power crossover.
inline FeatureReport fit_features(const AmplitudeSeries& series,
                                  const SpectralModel& model, double E_a,
                                  double lambda) {
  FeatureReport rep;
  const double tz = zeno_time(model, lambda);
  const double te = lifetime(model, E_a, lambda);

  // Quadratic window t <= 0.01 tau_Z. A quartic basis keeps the t^4 term of
  // P(t) out of the fitted curvature.
  {
    auto [t, p] = detail::window_points(series, 0.0, 0.01 * tz);
    if (t.size() < 6)
      throw InsufficientRange("fit_features: grid too sparse below 0.01 tau_Z");
    auto c = polyfit(t, p, 4);
    if (!(c[2] < 0.0))
      throw InsufficientRange("fit_features: no concave quadratic at origin");
    rep.tau_z_fitted = 1.0 / std::sqrt(-c[2]);
    const double T = t.back();
    rep.linear_quadratic_ratio = std::abs(c[1] * T) / std::abs(c[2] * T * T);
  }

  // Exponential window [2, 5] tau_E.
  double lnN, rate;
  {
    auto [t, p] = detail::window_points(series, 2.0 * te, 5.0 * te);
    if (t.size() < 5)
      throw InsufficientRange("fit_features: grid too sparse in [2,5] tau_E");
    std::vector<double> lp(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      lp[i] = std::log(std::max(p[i], 1e-300));
    auto f = linear_fit(t, lp);
    rate = -f.slope;
    lnN = f.intercept;
    rep.decay_rate_fitted = rate;
    rep.normalization_fitted = std::exp(lnN);
  }

  // Power tail over the last decade of the grid.
  double lnC, beta;
  {
    const double tmax = series.grid.nodes.back();
    if (tmax < 20.0 * te)
      throw InsufficientRange("fit_features: grid must extend to ~20 tau_E");
    auto [t, p] = detail::window_points(series, 0.1 * tmax, tmax);
    if (t.size() < 5)
      throw InsufficientRange("fit_features: grid too sparse in the last decade");
    std::vector<double> lt(t.size()), lp(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      lt[i] = std::log(t[i]);
      lp[i] = std::log(std::max(p[i], 1e-300));
    }
    auto f = linear_fit(lt, lp);
    beta = f.slope;
    lnC = f.intercept;
    rep.tail_exponent = beta;
  }

  // Last intersection of the fitted exponential with the fitted power law:
  // u(t) = rate t + beta ln t - (lnN - lnC) = 0. u has a single minimum at
  // t* = -beta/rate; the late crossing is the root right of t* when the
  // exponential still dominates there, else left of it.
  {
    const double rhs = lnN - lnC;
    auto u = [&](double t) { return rate * t + beta * std::log(t) - rhs; };
    const double tstar = std::max(-beta / rate, 1e-12);
    double lo, hi;
    if (u(tstar) <= 0.0) {
      lo = tstar;
      hi = std::max(2.0 * tstar, 10.0 * te);
      while (u(hi) <= 0.0 && hi < 1e12 * te) hi *= 2.0;
    } else {
      hi = tstar;
      lo = tstar;
      while (u(lo) >= 0.0 && lo > 1e-12 * te) lo *= 0.5;
    }
    // Bisection on [lo, hi] with u(lo) <= 0 <= u(hi) or the reverse.
    double flo = u(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = u(mid);
      if ((fm <= 0.0) == (flo <= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    rep.crossover_time = 0.5 * (lo + hi);
  }
  return rep;
}

}  // namespace decaykit
