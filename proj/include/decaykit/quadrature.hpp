#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <type_traits>
#include <vector>

#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"

namespace decaykit {

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes and weights on [-1, 1]
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, polished by Newton on P_n.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

}  // namespace detail

// Cached Gauss-Legendre rule of order n. Thread safe.
inline const GaussRule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod 15(7) integration, globally adaptive
// ---------------------------------------------------------------------------

struct QuadOptions {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  int max_panels = 6000;
  const char* context = "integral";
};

namespace detail {

// QUADPACK dqk15 constants.
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993945, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694};

template <class T>
double vnorm(const T& v) {
  if constexpr (std::is_same_v<T, complex_t>) {
    return std::abs(v);
  } else {
    return std::abs(static_cast<double>(v));
  }
}

template <class F, class T>
void gk15(F& f, double a, double b, T& integral, double& error) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T resk = kWgk[7] * f(c);
  T resg = kWg[3] * f(c);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    T f1 = f(c - dx);
    T f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  integral = resk * h;
  error = vnorm<T>((resk - resg) * h);
}

}  // namespace detail

// Integrate f over the union of segments defined by consecutive entries of
// pts (strictly increasing). Globally adaptive: the segment with the largest
// error estimate is bisected until the summed error meets the tolerance.
template <class F>
auto integrate_segments(F&& f, std::vector<double> pts, const QuadOptions& opt = {})
    -> std::invoke_result_t<F&, double> {
  using T = std::invoke_result_t<F&, double>;
  struct Seg {
    double a, b;
    T val;
    double err;
  };
  if (pts.size() < 2) throw QuadratureFailure("integrate: need at least one segment");
  std::vector<Seg> segs;
  segs.reserve(64);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i] < pts[i + 1]))
      throw QuadratureFailure("integrate: segment boundaries must increase");
    Seg s{pts[i], pts[i + 1], T{}, 0.0};
    detail::gk15(f, s.a, s.b, s.val, s.err);
    segs.push_back(s);
  }
  auto total = [&segs]() {
    T v{};
    double e = 0.0;
    for (const auto& s : segs) {
      v += s.val;
      e += s.err;
    }
    return std::pair<T, double>(v, e);
  };
  for (;;) {
    auto [v, e] = total();
    if (!std::isfinite(detail::vnorm<T>(v)))
      throw QuadratureFailure(std::string("integrate: non-finite value in ") + opt.context);
    const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::vnorm<T>(v));
    if (e <= tol) return v;
    if (static_cast<int>(segs.size()) >= opt.max_panels)
      throw QuadratureFailure(std::string("integrate: panel budget exhausted in ") +
                              opt.context + " (error " + std::to_string(e) + ")");
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].err > segs[worst].err) worst = i;
    Seg s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    if (!(s.a < mid && mid < s.b)) {
      // Interval at floating-point resolution; freeze its estimate.
      segs[worst].err = 0.0;
      continue;
    }
    Seg l{s.a, mid, T{}, 0.0}, r{mid, s.b, T{}, 0.0};
    detail::gk15(f, l.a, l.b, l.val, l.err);
    detail::gk15(f, r.a, r.b, r.val, r.err);
    segs[worst] = l;
    segs.push_back(r);
  }
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  return integrate_segments(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

// Integrate f over (a, infinity) with the rational map x = a + s*u/(1-u).
// Suitable for integrands decaying at least algebraically (order > 1).
template <class F>
auto integrate_half_line(F&& f, double a, double scale, const QuadOptions& opt = {}) {
  auto g = [&f, a, scale](double u) {
    const double um = 1.0 - u;
    const double x = a + scale * u / um;
    return f(x) * (scale / (um * um));
  };
  return integrate_segments(g, std::vector<double>{0.0, 0.5, 0.875, 0.984375, 1.0}, opt);
}

// Integrate f over (thr, b) where f carries an integrable algebraic
// singularity f ~ (x-thr)^(eta-1) at the left endpoint. Substituting
// u = (x-thr)^eta renders the integrand smooth. Interior breakpoints are
// given in the original variable.
template <class F>
auto integrate_peeled(F&& f, double thr, double b, double eta, const QuadOptions& opt = {},
                      const std::vector<double>& breaks = {}) {
  const double U = std::pow(b - thr, eta);
  std::vector<double> pts{0.0};
  for (double x : breaks)
    if (x > thr && x < b) {
      const double u = std::pow(x - thr, eta);
      if (u > 1e-306 && U - u > 1e-306 * U) pts.push_back(u);
    }
  pts.push_back(U);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (eta == 1.0) {
    for (double& u : pts) u += thr;
    return integrate_segments(std::forward<F>(f), std::move(pts), opt);
  }
  const double inv = 1.0 / eta;
  auto g = [&f, thr, inv, eta](double u) {
    const double d = std::pow(u, inv);
    return f(thr + d) * (std::pow(u, inv - 1.0) / eta);
  };
  return integrate_segments(g, std::move(pts), opt);
}

// ---------------------------------------------------------------------------
// Chebyshev panel cache: piecewise polynomial model of a smooth function,
// built once and evaluated many times (used for branch-cut ray integrands).
// ---------------------------------------------------------------------------

struct ChebPanel {
  double a = 0.0, b = 0.0;
  std::vector<complex_t> coef;  // Chebyshev coefficients c_0..c_K

  complex_t eval(double x) const {
    const double u = (2.0 * x - a - b) / (b - a);
    // Clenshaw recurrence.
    complex_t b1{}, b2{};
    for (std::size_t k = coef.size(); k-- > 1;) {
      complex_t tmp = 2.0 * u * b1 - b2 + coef[k];
      b2 = b1;
      b1 = tmp;
    }
    return u * b1 - b2 + coef[0];
  }
};

namespace detail {

// Chebyshev fit through first-kind (interior) nodes: the panel may touch a
// point where f itself cannot be evaluated, e.g. a branch point.
template <class F>
ChebPanel cheb_fit(F& f, double a, double b, int K) {
  ChebPanel p;
  p.a = a;
  p.b = b;
  const int M = K + 1;
  std::vector<complex_t> fv(M);
  for (int j = 0; j < M; ++j) {
    const double u = std::cos(kPi * (j + 0.5) / M);
    fv[j] = f(0.5 * (a + b) + 0.5 * (b - a) * u);
  }
  p.coef.assign(K + 1, complex_t{});
  for (int n = 0; n <= K; ++n) {
    complex_t s{};
    for (int j = 0; j < M; ++j) s += fv[j] * std::cos(kPi * n * (j + 0.5) / M);
    p.coef[n] = s * (2.0 / M);
  }
  p.coef[0] *= 0.5;
  return p;
}

inline double cheb_tail(const ChebPanel& p) {
  const std::size_t K = p.coef.size() - 1;
  return std::abs(p.coef[K]) + std::abs(p.coef[K - 1]);
}

}  // namespace detail

// Adaptive piecewise-Chebyshev fit of f on [a, b]. Initial breakpoints may be
// supplied; refinement bisects panels whose trailing coefficients exceed
// tol_abs.
template <class F>
std::vector<ChebPanel> build_cheb_panels(F&& f, double a, double b, double tol_abs,
                                         int K = 20, int max_panels = 3000,
                                         std::vector<double> init = {},
                                         double rel_floor = 1e-13,
                                         double tol_contrib = 0.0) {
  init.push_back(a);
  init.push_back(b);
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  init.erase(std::remove_if(init.begin(), init.end(),
                            [a, b](double x) { return x < a || x > b; }),
             init.end());
  std::vector<std::pair<double, double>> work;
  for (std::size_t i = 0; i + 1 < init.size(); ++i) work.push_back({init[i], init[i + 1]});
  std::vector<ChebPanel> done;
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    ChebPanel p = detail::cheb_fit(f, lo, hi, K);
    const double mid = 0.5 * (lo + hi);
    const double accept =
        tol_abs + rel_floor * (std::abs(p.coef[0]) + std::abs(p.coef[1]));
    const double tail = detail::cheb_tail(p);
    const bool small_contribution = tol_contrib > 0.0 && tail * (hi - lo) <= tol_contrib;
    if (tail > accept && !small_contribution && lo < mid && mid < hi &&
        static_cast<int>(done.size() + work.size()) < max_panels) {
      work.push_back({lo, mid});
      work.push_back({mid, hi});
    } else {
      done.push_back(std::move(p));
    }
  }
  std::sort(done.begin(), done.end(),
            [](const ChebPanel& x, const ChebPanel& y) { return x.a < y.a; });
  return done;
}

// ---------------------------------------------------------------------------
// Oscillatory panels: Legendre expansion per panel plus spherical-Bessel
// moments. Computes Fourier-type integrals of a fixed smooth function against
// exp(-i x t) for arbitrary t >= 0 at O(K) cost per panel.
// ---------------------------------------------------------------------------

// Spherical Bessel functions j_0..j_nmax at real x >= 0.
inline void sph_bessel_j(int nmax, double x, double* out) {
  if (x < 1e-8) {
    // Short series; beyond the first few orders everything underflows.
    double fact = 1.0;  // (2n+1)!!
    double xn = 1.0;
    for (int n = 0; n <= nmax; ++n) {
      if (n > 0) {
        fact *= (2.0 * n + 1.0);
        xn *= x;
      }
      out[n] = (xn / fact) * (1.0 - x * x / (2.0 * (2.0 * n + 3.0)));
    }
    return;
  }
  if (x > nmax + 12.0) {
    // Upward recurrence, stable for n << x.
    double jm = std::sin(x) / x;
    double jc = (std::sin(x) / x - std::cos(x)) / x;
    out[0] = jm;
    if (nmax >= 1) out[1] = jc;
    for (int n = 1; n < nmax; ++n) {
      double jn = (2.0 * n + 1.0) / x * jc - jm;
      jm = jc;
      jc = jn;
      out[n + 1] = jn;
    }
    return;
  }
  // Miller downward recurrence.
  const int N = nmax + 24 + static_cast<int>(x);
  double jp = 0.0, jc = 1e-280;
  std::vector<double> buf(nmax + 1, 0.0);
  for (int n = N; n >= 1; --n) {
    double jm = (2.0 * n + 1.0) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (n - 1 <= nmax) buf[n - 1] = jc;
    if (std::abs(jc) > 1e250) {
      jp *= 1e-250;
      jc *= 1e-250;
      for (auto& v : buf) v *= 1e-250;
    }
  }
  const double j0 = std::sin(x) / x;
  const double j1 = (std::sin(x) / x - std::cos(x)) / x;
  double scale;
  if (std::abs(j0) > std::abs(j1) * 0.1)
    scale = j0 / buf[0];
  else
    scale = j1 / buf[1];
  for (int n = 0; n <= nmax; ++n) out[n] = buf[n] * scale;
}

struct OscPanel {
  double center = 0.0, half = 0.0;
  std::vector<complex_t> cl;  // Legendre coefficients of the smooth factor
};

namespace detail {

template <class F>
OscPanel legendre_fit(F& f, double a, double b, int K) {
  OscPanel p;
  p.center = 0.5 * (a + b);
  p.half = 0.5 * (b - a);
  const int M = K + 8;
  const GaussRule& gr = gauss_legendre(M);
  std::vector<complex_t> fv(M);
  for (int i = 0; i < M; ++i) fv[i] = f(p.center + p.half * gr.x[i]);
  p.cl.assign(K + 1, complex_t{});
  for (int i = 0; i < M; ++i) {
    // P_n recurrence at gr.x[i].
    double p0 = 1.0, p1 = gr.x[i];
    p.cl[0] += gr.w[i] * fv[i] * p0;
    if (K >= 1) p.cl[1] += gr.w[i] * fv[i] * p1;
    for (int n = 1; n < K; ++n) {
      double p2 = ((2.0 * n + 1.0) * gr.x[i] * p1 - n * p0) / (n + 1.0);
      p.cl[n + 1] += gr.w[i] * fv[i] * p2;
      p0 = p1;
      p1 = p2;
    }
  }
  for (int n = 0; n <= K; ++n) p.cl[n] *= 0.5 * (2.0 * n + 1.0);
  return p;
}

inline double legendre_tail(const OscPanel& p) {
  const std::size_t K = p.cl.size() - 1;
  return std::abs(p.cl[K]) + std::abs(p.cl[K - 1]);
}

}  // namespace detail

// Adaptive piecewise-Legendre model of a smooth complex function on [a, b].
// tol_abs bounds the contribution of the dropped Legendre tail per unit
// length, so the total integral error is roughly tol_abs * (b - a).
template <class F>
std::vector<OscPanel> build_osc_panels(F&& f, double a, double b, double tol_abs,
                                       int K = 24, int max_panels = 4000,
                                       std::vector<double> init = {},
                                       double rel_floor = 1e-13) {
  init.push_back(a);
  init.push_back(b);
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  init.erase(std::remove_if(init.begin(), init.end(),
                            [a, b](double x) { return x < a || x > b; }),
             init.end());
  std::vector<std::pair<double, double>> work;
  for (std::size_t i = 0; i + 1 < init.size(); ++i) work.push_back({init[i], init[i + 1]});
  std::vector<OscPanel> done;
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    OscPanel p = detail::legendre_fit(f, lo, hi, K);
    const double mid = 0.5 * (lo + hi);
    const double accept =
        tol_abs + rel_floor * (std::abs(p.cl[0]) + std::abs(p.cl[1]));
    if (detail::legendre_tail(p) > accept && lo < mid && mid < hi &&
        static_cast<int>(done.size() + work.size()) < max_panels) {
      work.push_back({lo, mid});
      work.push_back({mid, hi});
    } else {
      done.push_back(std::move(p));
    }
  }
  return done;
}

// Integral over all panels of f(x) exp(-i x t), using
// int_{-1}^{1} P_n(u) exp(-i w u) du = 2 (-i)^n j_n(w).
inline complex_t osc_integral(const std::vector<OscPanel>& panels, double t) {
  complex_t total{};
  std::vector<double> jn;
  for (const auto& p : panels) {
    const int K = static_cast<int>(p.cl.size()) - 1;
    jn.resize(K + 1);
    sph_bessel_j(K, std::abs(t) * p.half, jn.data());
    complex_t s{};
    complex_t ipow(1.0, 0.0);  // (-i)^n
    for (int n = 0; n <= K; ++n) {
      s += p.cl[n] * (2.0 * jn[n]) * ipow;
      ipow *= complex_t(0.0, -1.0);
    }
    total += p.half * std::exp(complex_t(0.0, -p.center * t)) * s;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Small dense least squares / linear fits
// ---------------------------------------------------------------------------

// Solve A x = b in place by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const std::size_t n = A.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    if (A[k][k] == 0.0) throw Error("solve_dense: singular system");
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= m * A[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

// Least-squares polynomial fit of degree deg; returns coefficients c_0..c_deg
// in the original variable. Internally rescales x to [-1, 1] for conditioning.
inline std::vector<double> polyfit(const std::vector<double>& x,
                                   const std::vector<double>& y, int deg) {
  if (x.size() != y.size() || static_cast<int>(x.size()) < deg + 1)
    throw InsufficientRange("polyfit: not enough points");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double c0 = 0.5 * (*mn + *mx);
  const double s0 = std::max(0.5 * (*mx - *mn), 1e-300);
  const int n = deg + 1;
  std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  std::vector<double> pw(n);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - c0) / s0;
    pw[0] = 1.0;
    for (int k = 1; k < n; ++k) pw[k] = pw[k - 1] * u;
    for (int a = 0; a < n; ++a) {
      rhs[a] += pw[a] * y[i];
      for (int b = 0; b < n; ++b) G[a][b] += pw[a] * pw[b];
    }
  }
  std::vector<double> cu = solve_dense(std::move(G), std::move(rhs));
  // Convert from u = (x - c0)/s0 back to x via binomial expansion.
  std::vector<double> c(n, 0.0);
  for (int k = 0; k < n; ++k) {
    // cu[k] * ((x - c0)/s0)^k
    std::vector<double> term(k + 1, 0.0);
    term[0] = 1.0;
    for (int j = 0; j < k; ++j) {
      for (int m = j + 1; m > 0; --m) term[m] = term[m] * (-c0) + term[m - 1];
      term[0] *= -c0;
    }
    const double sc = cu[k] / std::pow(s0, k);
    for (int m = 0; m <= k; ++m) c[m] += sc * term[m];
  }
  return c;
}

struct LinFit {
  double intercept = 0.0;
  double slope = 0.0;
  double correlation = 0.0;
};

inline LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientRange("linear_fit: not enough points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  LinFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.correlation = (vy > 0.0) ? cxy / std::sqrt(vx * vy) : 1.0;
  return f;
}

}  // namespace decaykit
