#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "decaykit/quadrature.hpp"
#include "decaykit/spectral.hpp"

using namespace decaykit;

namespace {

// Deterministic LCG for property-style sampling.
struct Lcg {
  std::uint64_t s;
  explicit Lcg(std::uint64_t seed) : s(seed) {}
  double uniform(double a, double b) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return a + (b - a) * ((s >> 11) * 0x1.0p-53);
  }
};

double numeric_weight(const SpectralModel& model) {
  QuadOptions opt;
  opt.rel_tol = 1e-11;
  const double thr = threshold(model);
  const double top = support_top(model);
  const double L = energy_scale(model);
  auto f = [&](double E) { return gamma_of(model, E); };
  if (std::isfinite(top))
    return integrate_peeled(f, thr, top, threshold_exponent(model), opt) / kTwoPi;
  double w = integrate_peeled(f, thr, thr + L, threshold_exponent(model), opt);
  w += integrate(f, thr + L, thr + 30.0 * L, opt);
  w += integrate_half_line(f, thr + 30.0 * L, L, opt);
  return w / kTwoPi;
}

}  // namespace

TEST_CASE("flat cutoff density") {
  SpectralModel m = FlatCutoff{1.0, 10.0};
  REQUIRE(gamma_of(m, 5.0) == 1.0);
  REQUIRE(gamma_of(m, -1.0) == 0.0);
  REQUIRE(gamma_of(m, 10.0) == 0.0);
  REQUIRE(threshold_exponent(m) == 1.0);
  REQUIRE(total_weight(m) == Catch::Approx(10.0 / kTwoPi).epsilon(1e-15));
}

TEST_CASE("power-law density with exponential falloff") {
  SpectralModel m = PowerLawExp{1.0, 0.5, 1.0};
  // Gamma(Lambda) = 2 pi g^2 e^{-1}
  REQUIRE(gamma_of(m, 1.0) == Catch::Approx(kTwoPi * std::exp(-1.0)).epsilon(1e-15));
  REQUIRE(gamma_of(m, 0.0) == 0.0);
  REQUIRE(threshold_exponent(m) == 0.5);
  SpectralModel unit = PowerLawExp{1.0, 1.0, 1.0};
  REQUIRE(total_weight(unit) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-body phase space density") {
  SpectralModel m = TwoBodyPhaseSpace{1.0, 0.25, 1.0};
  REQUIRE(gamma_of(m, 0.25) == 0.0);  // at threshold s = 4 m^2
  REQUIRE(gamma_of(m, 1.0) ==
          Catch::Approx(std::sqrt(0.75) / (32.0 * kPi)).epsilon(1e-14));
  REQUIRE(threshold_exponent(m) == 1.5);
  REQUIRE(gamma_of(m, 1e12) == Catch::Approx(1.0 / (32.0 * kPi)).epsilon(1e-10));
  REQUIRE_THROWS_AS(total_weight(m), NonIntegrable);
}

TEST_CASE("density is nonnegative and vanishes below threshold") {
  Lcg rng(12345);
  std::vector<SpectralModel> models{FlatCutoff{0.7, 4.0}, PowerLawExp{2.0, 0.5, 1.3},
                                    PowerLawExp{1.0, 2.0, 0.8},
                                    TwoBodyPhaseSpace{1.0, 0.25, 1.0}};
  for (const auto& m : models) {
    for (int i = 0; i < 200; ++i) {
      const double E = rng.uniform(-5.0, 50.0);
      const double g = gamma_of(m, E);
      REQUIRE(g >= 0.0);
      if (E <= threshold(m)) REQUIRE(g == 0.0);
    }
  }
}

TEST_CASE("quadrature of the density reproduces the closed-form weight") {
  std::vector<SpectralModel> models{FlatCutoff{1.0, 10.0}, PowerLawExp{1.0, 0.5, 1.0},
                                    PowerLawExp{0.5, 1.7, 2.0}};
  for (const auto& m : models) {
    const double w = total_weight(m);
    REQUIRE(numeric_weight(m) == Catch::Approx(w).epsilon(1e-8));
  }
}

TEST_CASE("log-log slope near threshold matches the exponent") {
  std::vector<SpectralModel> models{FlatCutoff{1.0, 10.0}, PowerLawExp{1.0, 0.5, 1.0},
                                    PowerLawExp{1.0, 2.0, 1.0}};
  for (const auto& m : models) {
    const double thr = threshold(m);
    const double g1 = gamma_of(m, thr + 1e-4);
    const double g2 = gamma_of(m, thr + 1e-6);
    const double slope = (std::log(g1) - std::log(g2)) / (std::log(1e-4) - std::log(1e-6));
    REQUIRE(slope == Catch::Approx(threshold_exponent(m) - 1.0).margin(1e-2));
  }
  // Relativistic family: slope in the branch-point variable x = s - 4 m^2.
  SpectralModel ps = TwoBodyPhaseSpace{1.0, 0.25, 1.0};
  const double thr = threshold(ps);
  const double g1 = gamma_of(ps, thr + 1e-4);
  const double g2 = gamma_of(ps, thr + 1e-6);
  const double slope = (std::log(g1) - std::log(g2)) / (std::log(1e-4) - std::log(1e-6));
  REQUIRE(slope == Catch::Approx(0.5).margin(1e-2));
}

TEST_CASE("model validation rejects bad parameters") {
  REQUIRE_THROWS_AS(validate(SpectralModel{FlatCutoff{-1.0, 1.0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(validate(SpectralModel{PowerLawExp{1.0, 0.0, 1.0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(validate(SpectralModel{TwoBodyPhaseSpace{1.0, 0.6, 1.0}}),
                    std::invalid_argument);
}
