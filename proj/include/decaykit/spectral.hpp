#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"

namespace decaykit {

// Spectral-density families Gamma(E). Natural units hbar = c = 1; all
// energies and times are raw numbers.
//
//   flat-cutoff          Gamma(E) = gamma on (0, Lambda), zero elsewhere
//   power-law-exp        Gamma(E) = 2 pi g2 (E/Lambda)^(eta-1) exp(-E/Lambda)
//   two-body-phase-space Gamma(s) = mu^2/(32 pi M) sqrt(1 - 4 m^2/s), s >= 4 m^2
//
// For the relativistic family the spectral variable is the invariant mass
// squared s and the threshold exponent is defined in x = s - 4 m^2.

struct FlatCutoff {
  double gamma = 1.0;
  double Lambda = 1.0;
};

struct PowerLawExp {
  double g2 = 1.0;
  double eta = 1.0;
  double Lambda = 1.0;
};

struct TwoBodyPhaseSpace {
  double mu = 1.0;
  double m = 0.25;
  double M = 1.0;
};

using SpectralModel = std::variant<FlatCutoff, PowerLawExp, TwoBodyPhaseSpace>;

inline void validate(const SpectralModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FlatCutoff>) {
          if (!(m.gamma > 0.0)) throw std::invalid_argument("flat: gamma must be > 0");
          if (!(m.Lambda > 0.0)) throw std::invalid_argument("flat: Lambda must be > 0");
        } else if constexpr (std::is_same_v<T, PowerLawExp>) {
          if (!(m.g2 >= 0.0)) throw std::invalid_argument("powerlaw: g2 must be >= 0");
          if (!(m.eta > 0.0)) throw std::invalid_argument("powerlaw: eta must be > 0");
          if (!(m.Lambda > 0.0)) throw std::invalid_argument("powerlaw: Lambda must be > 0");
        } else {
          if (!(m.mu > 0.0)) throw std::invalid_argument("phasespace: mu must be > 0");
          if (!(m.m >= 0.0)) throw std::invalid_argument("phasespace: m must be >= 0");
          if (!(m.M > 2.0 * m.m))
            throw std::invalid_argument("phasespace: M must exceed 2m");
        }
      },
      model);
}

inline std::string model_name(const SpectralModel& model) {
  if (std::holds_alternative<FlatCutoff>(model)) return "flat";
  if (std::holds_alternative<PowerLawExp>(model)) return "powerlaw";
  return "phasespace";
}

// Lower edge of the continuum in the spectral variable.
inline double threshold(const SpectralModel& model) {
  if (const auto* p = std::get_if<TwoBodyPhaseSpace>(&model)) return 4.0 * p->m * p->m;
  return 0.0;
}

// Upper edge of the support (finite only for the flat cutoff).
inline double support_top(const SpectralModel& model) {
  if (const auto* p = std::get_if<FlatCutoff>(&model)) return p->Lambda;
  return std::numeric_limits<double>::infinity();
}

// Characteristic energy scale of the spectral shape.
inline double energy_scale(const SpectralModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FlatCutoff>) return m.Lambda;
        else if constexpr (std::is_same_v<T, PowerLawExp>) return m.Lambda;
        else return m.M * m.M;
      },
      model);
}

// Gamma(E): total function of real E, exactly zero at and below threshold.
inline double gamma_of(const SpectralModel& model, double E) {
  return std::visit(
      [E](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FlatCutoff>) {
          return (E > 0.0 && E < m.Lambda) ? m.gamma : 0.0;
        } else if constexpr (std::is_same_v<T, PowerLawExp>) {
          if (E <= 0.0) return 0.0;
          return kTwoPi * m.g2 * std::pow(E / m.Lambda, m.eta - 1.0) *
                 std::exp(-E / m.Lambda);
        } else {
          const double thr = 4.0 * m.m * m.m;
          if (E <= thr) return 0.0;
          return m.mu * m.mu / (32.0 * kPi * m.M) * std::sqrt(1.0 - thr / E);
        }
      },
      model);
}

// dGamma/dE at interior points of the support (used by the principal-value
// subtraction). Not defined across the flat-cutoff edges.
inline double gamma_derivative(const SpectralModel& model, double E) {
  return std::visit(
      [E, &model](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FlatCutoff>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, PowerLawExp>) {
          if (E <= 0.0) return 0.0;
          return gamma_of(model, E) * ((m.eta - 1.0) / E - 1.0 / m.Lambda);
        } else {
          const double thr = 4.0 * m.m * m.m;
          if (E <= thr) return 0.0;
          const double rho = std::sqrt(1.0 - thr / E);
          return m.mu * m.mu / (32.0 * kPi * m.M) * thr / (2.0 * E * E * rho);
        }
      },
      model);
}

// Closed-form analytic continuation Gamma_c(z) used for second-sheet
// evaluation. Branches: principal power/sqrt, fixed so that Gamma_c is
// positive on the support approached from above.
inline complex_t gamma_continued(const SpectralModel& model, complex_t z) {
  return std::visit(
      [z](const auto& m) -> complex_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FlatCutoff>) {
          return complex_t(m.gamma, 0.0);
        } else if constexpr (std::is_same_v<T, PowerLawExp>) {
          return kTwoPi * m.g2 * std::exp((m.eta - 1.0) * std::log(z / m.Lambda)) *
                 std::exp(-z / m.Lambda);
        } else {
          const double thr = 4.0 * m.m * m.m;
          return m.mu * m.mu / (32.0 * kPi * m.M) * std::sqrt(1.0 - thr / z);
        }
      },
      model);
}

// Near-threshold exponent eta: Gamma ~ (E - threshold)^(eta - 1).
inline double threshold_exponent(const SpectralModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FlatCutoff>) return 1.0;
        else if constexpr (std::is_same_v<T, PowerLawExp>) return m.eta;
        else return 1.5;
      },
      model);
}

// Integral of Gamma over (0, inf) with measure dE/(2 pi). Closed form for the
// integrable families; the phase-space density does not decay and has no
// finite weight (so no Zeno time exists for it).
inline double total_weight(const SpectralModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FlatCutoff>) {
          return m.gamma * m.Lambda / kTwoPi;
        } else if constexpr (std::is_same_v<T, PowerLawExp>) {
          return m.g2 * m.Lambda * std::tgamma(m.eta);
        } else {
          throw NonIntegrable(
              "total_weight: two-body phase space density is not integrable");
        }
      },
      model);
}

}  // namespace decaykit
