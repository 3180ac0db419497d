#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/selfenergy.hpp"
#include "decaykit/spectral.hpp"

namespace decaykit {

// Decay pole of the resummed propagator on the second Riemann sheet.
struct PoleResult {
  complex_t location{};   // pole position (shifted energy / invariant mass sq.)
  complex_t residue{};    // 1 / D'(location)
  int iterations = 0;
  double final_residual = 0.0;
};

namespace detail {

constexpr double kPoleRelTol = 1e-12;
constexpr int kNewtonSteps = 25;
constexpr int kTotalSteps = 50;

// Newton iteration with secant fallback. den and dden evaluate the
// denominator and its derivative; the derivative may be approximate (the
// residual criterion is on den itself).
template <class Den, class DDen>
PoleResult polish_root(Den&& den, DDen&& dden, complex_t seed, const char* what) {
  PoleResult res;
  complex_t z = seed;
  complex_t f = den(z);
  int it = 0;
  auto tol = [](complex_t loc) { return kPoleRelTol * std::max(1.0, std::abs(loc)); };
  complex_t z_prev = z, f_prev = f;
  bool have_prev = false;
  while (it < kTotalSteps) {
    if (std::abs(f) <= tol(z)) break;
    complex_t step;
    if (it < kNewtonSteps) {
      const complex_t d = dden(z);
      if (std::abs(d) < 1e-300) throw NoConvergence(std::string(what) + ": flat denominator");
      step = f / d;
    } else {
      if (!have_prev || std::abs(f - f_prev) < 1e-300)
        throw NoConvergence(std::string(what) + ": secant stalled");
      step = f * (z - z_prev) / (f - f_prev);
    }
    z_prev = z;
    f_prev = f;
    have_prev = true;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NoConvergence(std::string(what) + ": iteration diverged");
    f = den(z);
    ++it;
  }
  res.location = z;
  res.iterations = it;
  res.final_residual = std::abs(f);
  if (res.final_residual > tol(z))
    throw NoConvergence(std::string(what) + ": residual " +
                        std::to_string(res.final_residual) + " above tolerance");
  return res;
}

}  // namespace detail

// Residue of 1/den at a simple zero: 1 / den'(location), the derivative taken
// by Richardson-extrapolated central differences with step
// 1e-6 * max(1, |location|).
template <class Den>
complex_t residue_at(Den&& den, complex_t location) {
  const double h = 1e-6 * std::max(1.0, std::abs(location));
  const complex_t d1 = (den(location + h) - den(location - h)) / (2.0 * h);
  const complex_t d2 = (den(location + 0.5 * h) - den(location - 0.5 * h)) / h;
  const complex_t d = (4.0 * d2 - d1) / 3.0;
  if (std::abs(d) < 1e-10)
    throw DegeneratePole("residue_at: denominator derivative vanishes");
  return 1.0 / d;
}

inline complex_t residue_from_derivative(complex_t derivative) {
  if (std::abs(derivative) < 1e-10)
    throw DegeneratePole("residue: denominator derivative vanishes");
  return 1.0 / derivative;
}

// Pole of the survival-amplitude integrand in the shifted energy variable:
// solves E = lambda^2 Sigma_II(E + E_a) by Newton from the golden-rule seed
// E_0 = lambda^2 (Delta(E_a) - i Gamma(E_a)/2).
//
// The solution must decay (Im < 0) and sit below the continuum (its real part
// shifted by E_a inside the support); anything else throws WrongSheet.
inline PoleResult find_pole_nonrel(const SpectralModel& model, double E_a,
                                   double lambda) {
  validate(model);
  if (!(lambda > 0.0)) throw std::invalid_argument("find_pole_nonrel: lambda must be > 0");
  const double l2 = lambda * lambda;
  const complex_t seed = l2 * complex_t(delta_pv(model, E_a),
                                        -0.5 * gamma_of(model, E_a));
  auto den = [&](complex_t E) {
    return E - l2 * sigma2_complex(model, E + E_a, Sheet::second);
  };
  auto dden = [&](complex_t E) {
    return complex_t(1.0, 0.0) - l2 * sigma2_derivative(model, E + E_a, Sheet::second);
  };
  PoleResult res = detail::polish_root(den, dden, seed, "find_pole_nonrel");
  if (res.location.imag() >= 0.0)
    throw WrongSheet("find_pole_nonrel: converged with Im >= 0 (no decay)");
  const double w = res.location.real() + E_a;
  if (!(gamma_of(model, w) > 0.0))
    throw WrongSheet("find_pole_nonrel: pole not below the continuum support");
  res.residue = residue_from_derivative(dden(res.location));
  return res;
}

}  // namespace decaykit
