#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "decaykit/evolution.hpp"

using namespace decaykit;

namespace {

const SpectralModel kFlat = FlatCutoff{1.0, 10.0};
const SpectralModel kPower = PowerLawExp{1.0, 0.5, 1.0};

struct Lcg {
  std::uint64_t s;
  explicit Lcg(std::uint64_t seed) : s(seed) {}
  double uniform(double a, double b) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    return a + (b - a) * ((s >> 11) * 0x1.0p-53);
  }
};

double max_diff(const AmplitudeSeries& a, const AmplitudeSeries& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.amplitude.size(); ++i)
    d = std::max(d, std::abs(a.amplitude[i] - b.amplitude[i]));
  return d;
}

}  // namespace

TEST_CASE("time grids validate") {
  REQUIRE_THROWS_AS(log_grid(0.0, 1.0, 10), std::invalid_argument);
  REQUIRE_THROWS_AS(linear_grid(1.0, 1.0, 10), std::invalid_argument);
  TimeGrid g = mixed_grid(1e-3, 10.0, 12);
  REQUIRE(g.nodes.front() == 0.0);
  REQUIRE(g.nodes.size() == 12);
  REQUIRE_NOTHROW(validate(g));
}

TEST_CASE("timescales") {
  // tau_Z = (1/lambda) [integral Gamma/(2 pi)]^{-1/2}
  REQUIRE(zeno_time(kFlat, 1.0) == Catch::Approx(std::sqrt(kTwoPi / 10.0)).epsilon(1e-12));
  REQUIRE(zeno_time(kFlat, 0.5) == Catch::Approx(2.0 * zeno_time(kFlat, 1.0)).epsilon(1e-14));
  SpectralModel unit = PowerLawExp{1.0, 1.0, 1.0};
  REQUIRE(zeno_time(unit, 1.0) == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE_THROWS_AS(zeno_time(SpectralModel{TwoBodyPhaseSpace{1.0, 0.25, 1.0}}, 0.1),
                    NonIntegrable);

  REQUIRE(lifetime(kFlat, 1.0, 0.1) == Catch::Approx(100.0).epsilon(1e-14));
  REQUIRE(lifetime(kFlat, 1.0, 0.05) == Catch::Approx(400.0).epsilon(1e-14));
  REQUIRE_THROWS_AS(lifetime(kFlat, -1.0, 0.1), ClosedChannel);
}

TEST_CASE("free evolution is exactly trivial") {
  TimeGrid g = mixed_grid(0.1, 50.0, 20);
  AmplitudeSeries line = survival_line(kFlat, 1.0, 0.0, g);
  for (const auto& a : line.amplitude) REQUIRE(a == complex_t(1.0, 0.0));
  AmplitudeSeries orc = survival_oracle(kFlat, 1.0, 0.0, 128, g);
  for (const auto& a : orc.amplitude)
    REQUIRE(std::abs(a - complex_t(1.0, 0.0)) < 1e-13);
}

TEST_CASE("oracle is exactly unitary and normalized at t = 0") {
  TimeGrid g = mixed_grid(1e-2, 2000.0, 40);
  AmplitudeSeries orc = survival_oracle(kFlat, 1.0, 0.1, 256, g);
  REQUIRE(orc.amplitude.front().real() == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(orc.amplitude.front().imag() == Catch::Approx(0.0).margin(1e-14));
  for (double p : orc.probability) REQUIRE(p <= 1.0 + 1e-12);
  // probability column is the squared amplitude, exactly
  for (std::size_t i = 0; i < orc.amplitude.size(); ++i)
    REQUIRE(orc.probability[i] == std::norm(orc.amplitude[i]));
}

TEST_CASE("oracle rejects unsupported inputs") {
  TimeGrid g = linear_grid(0.0, 1.0, 5);
  REQUIRE_THROWS_AS(
      survival_oracle(SpectralModel{TwoBodyPhaseSpace{1.0, 0.25, 1.0}}, 1.0, 0.1, 256, g),
      UnsupportedModel);
  REQUIRE_THROWS_AS(survival_oracle(kFlat, 1.0, 0.1, 32, g), std::invalid_argument);
}

TEST_CASE("oracle self-convergence in the mode count") {
  // With the spectral window [0, Lambda] discretized on N Gauss nodes the
  // level spacing aliases the dynamics beyond t ~ 4N/Lambda; N = 4096 and
  // 8192 are both converged over ten lifetimes at lambda = 0.1 and agree far
  // below the cross-method tolerance. (N = 2048 sits below that threshold at
  // the end of this window and is not converged there.)
  const double te = lifetime(kFlat, 1.0, 0.1);
  TimeGrid g = mixed_grid(1e-3 * te, 10.0 * te, 60);
  AmplitudeSeries a = survival_oracle(kFlat, 1.0, 0.1, 4096, g);
  AmplitudeSeries b = survival_oracle(kFlat, 1.0, 0.1, 8192, g);
  REQUIRE(max_diff(a, b) < 1e-7);
}

TEST_CASE("line amplitude is normalized at t = 0") {
  TimeGrid g = mixed_grid(1e-2, 100.0, 10);
  AmplitudeSeries line = survival_line(kFlat, 1.0, 0.1, g);
  REQUIRE(std::abs(line.amplitude.front() - complex_t(1.0, 0.0)) < 1e-6);
}

TEST_CASE("pole part is a pure exponential of the pole data") {
  const double te = lifetime(kFlat, 1.0, 0.1);
  TimeGrid g = linear_grid(te, 3.0 * te, 3);
  AmplitudeSeries dec = survival_decomposed(kFlat, 1.0, 0.1, g);
  REQUIRE(dec.pole_part.has_value());
  PoleResult p = find_pole_nonrel(kFlat, 1.0, 0.1);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const complex_t expect = p.residue * std::exp(-iu() * p.location * g.nodes[i]);
    REQUIRE(std::abs((*dec.pole_part)[i] - expect) < 1e-12);
  }
  // |pole|^2 after three lifetimes: |Z|^2 e^{-3} up to the lambda^4 rate shift
  const double p3 = std::norm((*dec.pole_part)[2]);
  REQUIRE(p3 == Catch::Approx(std::norm(p.residue) *
                              std::exp(2.0 * p.location.imag() * 3.0 * te))
                    .epsilon(1e-12));
}

TEST_CASE("method triangle: flat cutoff") {
  const double te = lifetime(kFlat, 1.0, 0.1);
  TimeGrid g = mixed_grid(1e-3 * te, 10.0 * te, 41);
  AmplitudeSeries line = survival_line(kFlat, 1.0, 0.1, g);
  AmplitudeSeries dec = survival_decomposed(kFlat, 1.0, 0.1, g);
  AmplitudeSeries orc = survival_oracle(kFlat, 1.0, 0.1, 4096, g);
  REQUIRE(max_diff(line, dec) < 1e-6);
  REQUIRE(max_diff(line, orc) < 1e-5);
  REQUIRE(max_diff(dec, orc) < 1e-5);
}

TEST_CASE("method triangle: power-law density with its bound state") {
  for (double lam : {0.3, 0.1}) {
    const double te = lifetime(kPower, 1.0, lam);
    TimeGrid g = mixed_grid(1e-3 * te, 10.0 * te, 31);
    AmplitudeSeries line = survival_line(kPower, 1.0, lam, g);
    AmplitudeSeries dec = survival_decomposed(kPower, 1.0, lam, g);
    AmplitudeSeries orc = survival_oracle(kPower, 1.0, lam, 4096, g);
    REQUIRE(max_diff(line, dec) < 1e-6);
    REQUIRE(max_diff(line, orc) < 1e-5);
    REQUIRE(max_diff(dec, orc) < 1e-5);
    REQUIRE_FALSE(dec.notes.empty());  // bound state reported
  }
}

TEST_CASE("bound state below the power-law threshold carries lambda^4 weight") {
  SurvivalDecomposition d1 = decompose_survival(kPower, 1.0, 0.1);
  SurvivalDecomposition d2 = decompose_survival(kPower, 1.0, 0.05);
  REQUIRE(d1.bound.size() == 1);
  REQUIRE(d2.bound.size() == 1);
  REQUIRE(d1.bound[0].energy < -1.0);  // below the shifted threshold -E_a
  const double r = d1.bound[0].weight / d2.bound[0].weight;
  REQUIRE(r > 10.0);  // lambda^4 scaling gives 16
  REQUIRE(r < 22.0);
  // The flat cutoff has only a logarithmic edge shift: no visible bound state.
  REQUIRE(decompose_survival(kFlat, 1.0, 0.1).bound.empty());
}

TEST_CASE("short-time behavior is quadratic with the Zeno curvature") {
  const double tz = zeno_time(kFlat, 0.1);
  TimeGrid g = linear_grid(1e-4 * tz, 1e-3 * tz, 11);
  AmplitudeSeries orc = survival_oracle(kFlat, 1.0, 0.1, 1024, g);
  for (std::size_t i : {std::size_t(0), g.nodes.size() - 1}) {
    const double t = g.nodes[i];
    const double lhs = (1.0 - orc.probability[i]) / (t * t);
    REQUIRE(lhs == Catch::Approx(1.0 / (tz * tz)).epsilon(1e-3));
  }
}

TEST_CASE("feature fits recover the analytic timescales") {
  const double tz = zeno_time(kFlat, 0.1);
  const double te = lifetime(kFlat, 1.0, 0.1);
  TimeGrid g = log_grid(1e-4 * tz, 30.0 * te, 500);
  g.nodes.insert(g.nodes.begin(), 0.0);
  AmplitudeSeries orc = survival_oracle(kFlat, 1.0, 0.1, 2048, g);
  FeatureReport rep = fit_features(orc, kFlat, 1.0, 0.1);
  REQUIRE(rep.tau_z_fitted == Catch::Approx(tz).epsilon(1e-2));
  REQUIRE(rep.linear_quadratic_ratio < 1e-3);
  REQUIRE(rep.decay_rate_fitted == Catch::Approx(1.0 / te).epsilon(2e-2));
  REQUIRE(rep.normalization_fitted ==
          Catch::Approx(std::norm(find_pole_nonrel(kFlat, 1.0, 0.1).residue)).epsilon(0.05));
}

TEST_CASE("long-time tail carries the branch-point exponent") {
  // eta = 1: smooth single-edge density, fitted on the last decade.
  SpectralModel m = PowerLawExp{1.0, 1.0, 1.0};
  const double te = lifetime(m, 1.0, 0.1);
  SurvivalDecomposition dec = decompose_survival(m, 1.0, 0.1);
  std::vector<double> lt, lp;
  for (int i = 0; i < 40; ++i) {
    const double t = 50.0 * te * std::pow(10.0, i / 39.0);
    lt.push_back(std::log(t));
    lp.push_back(std::log(std::norm(dec.amplitude(t))));
  }
  REQUIRE(linear_fit(lt, lp).slope == Catch::Approx(-2.0).margin(0.1));
}

TEST_CASE("crossover time lies between exponential and power-law eras") {
  SpectralModel m = PowerLawExp{1.0, 1.0, 1.0};
  const double tz = zeno_time(m, 0.1);
  const double te = lifetime(m, 1.0, 0.1);
  TimeGrid g = log_grid(1e-4 * tz, 500.0 * te, 700);
  AmplitudeSeries dec = survival_decomposed(m, 1.0, 0.1, g);
  FeatureReport rep = fit_features(dec, m, 1.0, 0.1);
  REQUIRE(rep.tail_exponent == Catch::Approx(-2.0).margin(0.1));
  REQUIRE(rep.crossover_time > 5.0 * te);
  REQUIRE(rep.crossover_time < 60.0 * te);
}

TEST_CASE("fit windows are enforced") {
  TimeGrid g = linear_grid(0.0, 1.0, 10);  // far too short
  AmplitudeSeries orc = survival_oracle(kFlat, 1.0, 0.1, 128, g);
  REQUIRE_THROWS_AS(fit_features(orc, kFlat, 1.0, 0.1), InsufficientRange);
}

TEST_CASE("decomposed method requires a decaying pole") {
  TimeGrid g = linear_grid(0.0, 1.0, 5);
  REQUIRE_THROWS_AS(survival_decomposed(kFlat, -1.0, 0.1, g), WrongSheet);
  REQUIRE_THROWS_AS(survival_decomposed(kFlat, 1.0, 0.0, g), std::invalid_argument);
}

TEST_CASE("line and decomposed agree off the canonical grids") {
  Lcg rng(4242);
  const double te = lifetime(kFlat, 1.0, 0.2);
  SurvivalDecomposition dec = decompose_survival(kFlat, 1.0, 0.2);
  auto line = detail::build_line_evaluator(kFlat, 1.0, 0.2, 10.0 * te);
  for (int i = 0; i < 12; ++i) {
    const double t = rng.uniform(0.0, 10.0 * te);
    REQUIRE(std::abs(line.amplitude(t) - dec.amplitude(t)) < 1e-6);
  }
}
