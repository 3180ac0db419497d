#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "decaykit/core.hpp"
#include "decaykit/errors.hpp"
#include "decaykit/evolution.hpp"
#include "decaykit/quadrature.hpp"
#include "decaykit/selfenergy.hpp"
#include "decaykit/spectral.hpp"

namespace decaykit {

// ---------------------------------------------------------------------------
// lambda^2 t rescaling and the closed-form limit amplitude
// ---------------------------------------------------------------------------

// Survival amplitude at physical times t = t_tilde / lambda^2, recorded
// against the rescaled time. Pure re-indexing of the unscaled dynamics.
inline AmplitudeSeries rescaled_survival(const SpectralModel& model, double E_a,
                                         double lambda, const TimeGrid& t_tilde_grid) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("rescaled_survival: lambda must be > 0");
  validate(t_tilde_grid);
  TimeGrid phys = t_tilde_grid;
  const double l2 = lambda * lambda;
  for (double& t : phys.nodes) t /= l2;
  AmplitudeSeries s;
  try {
    s = survival_decomposed(model, E_a, lambda, phys);
  } catch (const NoConvergence&) {
    s = survival_line(model, E_a, lambda, phys);
  } catch (const WrongSheet&) {
    s = survival_line(model, E_a, lambda, phys);
  }
  s.grid = t_tilde_grid;
  return s;
}

// Van Hove limit of the rescaled amplitude: a pure exponential with the
// golden-rule rate and second-order level shift,
// A(t_tilde) = exp(-[i Delta(E_a) + Gamma(E_a)/2] t_tilde).
inline AmplitudeSeries limit_amplitude(const SpectralModel& model, double E_a,
                                       const TimeGrid& t_tilde_grid) {
  validate(model);
  validate(t_tilde_grid);
  const double g = gamma_of(model, E_a);
  if (!(g > 0.0)) throw ClosedChannel("limit_amplitude: Gamma(E_a) = 0");
  const double d = delta_pv(model, E_a);
  AmplitudeSeries out;
  out.grid = t_tilde_grid;
  out.method = Method::closed_form;
  out.amplitude.resize(t_tilde_grid.nodes.size());
  for (std::size_t i = 0; i < t_tilde_grid.nodes.size(); ++i) {
    const double t = t_tilde_grid.nodes[i];
    out.amplitude[i] = std::exp(complex_t(-0.5 * g * t, -d * t));
  }
  out.finalize_probability();
  return out;
}

// ---------------------------------------------------------------------------
// Convergence scan
// ---------------------------------------------------------------------------

struct VanHoveScan {
  std::vector<double> lambdas;
  TimeGrid t_tilde_grid;                      // deviation-norm grid
  std::vector<std::vector<double>> deviation; // per lambda, per node
  std::vector<double> deviation_max;          // per lambda

  // Per-lambda diagnostics feeding the scaling fits.
  std::vector<double> zeno_width;             // fitted rescaled Zeno time
  std::vector<double> oscillation_amplitude;  // residual about the exponential
  std::vector<double> crossover_time;         // rescaled exp/power crossover

  struct Scalings {
    double zeno_width_exponent = 0.0;
    double oscillation_exponent = 0.0;
    double crossover_slope = 0.0;        // vs log(1/lambda)
    double crossover_correlation = 0.0;
  } fitted;
};

// Scans the survival probability toward the Van Hove limit across a
// decreasing list of couplings, recording the deviation from the limiting
// exponential on the given rescaled grid plus the Zeno-width, oscillation and
// crossover scalings seen in the survival probability.
inline VanHoveScan convergence_scan(const SpectralModel& model, double E_a,
                                    const std::vector<double>& lambdas,
                                    const TimeGrid& t_tilde_grid) {
  validate(model);
  validate(t_tilde_grid);
  if (lambdas.size() < 3)
    throw std::invalid_argument("convergence_scan: need at least 3 couplings");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i + 1]))
      throw std::invalid_argument("convergence_scan: couplings must decrease strictly");

  const double g = gamma_of(model, E_a);
  if (!(g > 0.0)) throw ClosedChannel("convergence_scan: Gamma(E_a) = 0");
  const double eta = threshold_exponent(model);

  VanHoveScan scan;
  scan.lambdas = lambdas;
  scan.t_tilde_grid = t_tilde_grid;
  const AmplitudeSeries limit = limit_amplitude(model, E_a, t_tilde_grid);

  for (double lam : lambdas) {
    const double l2 = lam * lam;
    SurvivalDecomposition dec = decompose_survival(model, E_a, lam);
    auto p_of = [&](double t_tilde) {
      return std::norm(dec.amplitude(t_tilde / l2));
    };

    // Deviation from the limiting exponential on the supplied grid.
    std::vector<double> dev(t_tilde_grid.nodes.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < t_tilde_grid.nodes.size(); ++i) {
      dev[i] = std::abs(p_of(t_tilde_grid.nodes[i]) - limit.probability[i]);
      dmax = std::max(dmax, dev[i]);
    }
    scan.deviation.push_back(std::move(dev));
    scan.deviation_max.push_back(dmax);

    // Rescaled Zeno width: quartic-window curvature fit on t <= 0.01 tau_Z.
    const double tz = zeno_time(model, lam);
    {
      std::vector<double> t, p;
      for (int i = 0; i < 48; ++i) {
        const double ti = 0.01 * tz * (i + 1) / 48.0;
        t.push_back(ti);
        p.push_back(std::norm(dec.amplitude(ti)));
      }
      auto c = polyfit(t, p, 4);
      if (!(c[2] < 0.0)) throw NoConvergence("convergence_scan: Zeno fit failed");
      scan.zeno_width.push_back(l2 / std::sqrt(-c[2]));
    }

    // Oscillation amplitude about the fitted exponential on [1,3] tau_E
    // (rescaled [1,3]/Gamma). Sampled finely enough to catch the peaks.
    {
      const double te = 1.0 / g;  // rescaled lifetime
      const double period = kTwoPi * l2 / std::max(E_a - threshold(model), 0.1);
      int nn = static_cast<int>(std::ceil(2.0 * te / period * 8.0));
      nn = std::clamp(nn, 400, 6000);
      std::vector<double> t(nn), p(nn), lp(nn);
      for (int i = 0; i < nn; ++i) {
        t[i] = te + 2.0 * te * i / (nn - 1.0);
        p[i] = p_of(t[i]);
        lp[i] = std::log(std::max(p[i], 1e-300));
      }
      auto f = linear_fit(t, lp);
      double osc = 0.0;
      for (int i = 0; i < nn; ++i)
        osc = std::max(osc, std::abs(p[i] - std::exp(f.intercept + f.slope * t[i])));
      scan.oscillation_amplitude.push_back(osc);
    }

    // Exponential/power crossover from the feature fit on a wide grid.
    {
      const double te_phys = lifetime(model, E_a, lam);
      const double t_top = (40.0 + 10.0 * (1.0 + eta) * std::log(1.0 / lam)) * te_phys;
      TimeGrid wide = log_grid(1e-4 * zeno_time(model, lam), t_top, 700);
      AmplitudeSeries s;
      s.grid = wide;
      s.method = Method::decomposed;
      s.amplitude.resize(wide.nodes.size());
      for (std::size_t i = 0; i < wide.nodes.size(); ++i)
        s.amplitude[i] = dec.amplitude(wide.nodes[i]);
      s.finalize_probability();
      FeatureReport rep = fit_features(s, model, E_a, lam);
      scan.crossover_time.push_back(l2 * rep.crossover_time);
    }
  }

  // Scaling fits across the coupling list.
  {
    std::vector<double> ll(lambdas.size()), lz(lambdas.size()), lo(lambdas.size()),
        linv(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      ll[i] = std::log(lambdas[i]);
      lz[i] = std::log(scan.zeno_width[i]);
      lo[i] = std::log(std::max(scan.oscillation_amplitude[i], 1e-300));
      linv[i] = std::log(1.0 / lambdas[i]);
    }
    scan.fitted.zeno_width_exponent = linear_fit(ll, lz).slope;
    scan.fitted.oscillation_exponent = linear_fit(ll, lo).slope;
    auto cf = linear_fit(linv, scan.crossover_time);
    scan.fitted.crossover_slope = cf.slope;
    scan.fitted.crossover_correlation = cf.correlation;
  }
  return scan;
}

// Default rescaled window for the deviation norm: [0.1, 5] / Gamma(E_a).
inline TimeGrid default_deviation_grid(const SpectralModel& model, double E_a,
                                       int n = 201) {
  const double g = gamma_of(model, E_a);
  if (!(g > 0.0)) throw ClosedChannel("default_deviation_grid: Gamma(E_a) = 0");
  return linear_grid(0.1 / g, 5.0 / g, n);
}

}  // namespace decaykit
