#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "decaykit/vanhove.hpp"

using namespace decaykit;

namespace {
const SpectralModel kFlat = FlatCutoff{1.0, 10.0};
}

TEST_CASE("limit amplitude is the golden-rule exponential") {
  // Gamma(E_a) = 1 for the unit flat density at E_a = 1
  TimeGrid g = linear_grid(0.0, 5.0, 11);
  AmplitudeSeries lim = limit_amplitude(kFlat, 1.0, g);
  REQUIRE(lim.amplitude.front() == complex_t(1.0, 0.0));
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    REQUIRE(lim.probability[i] ==
            Catch::Approx(std::exp(-g.nodes[i])).epsilon(1e-13));
  REQUIRE(lim.probability[2] == Catch::Approx(std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("limit amplitude is a semigroup") {
  TimeGrid g = linear_grid(0.0, 4.0, 9);
  AmplitudeSeries lim = limit_amplitude(kFlat, 1.0, g);
  // nodes are equally spaced: A(t_i + t_j) = A(t_i) A(t_j)
  for (std::size_t i = 0; i + 2 < g.nodes.size(); ++i) {
    const complex_t prod = lim.amplitude[i] * lim.amplitude[2];
    REQUIRE(std::abs(lim.amplitude[i + 2] - prod) < 1e-14);
  }
  REQUIRE_THROWS_AS(limit_amplitude(kFlat, -1.0, g), ClosedChannel);
}

TEST_CASE("rescaled survival is a pure re-indexing of the physical series") {
  const double lam = 0.1;
  TimeGrid tg = linear_grid(0.1, 3.0, 7);
  AmplitudeSeries resc = rescaled_survival(kFlat, 1.0, lam, tg);
  TimeGrid phys = tg;
  for (double& t : phys.nodes) t /= lam * lam;
  AmplitudeSeries direct = survival_decomposed(kFlat, 1.0, lam, phys);
  for (std::size_t i = 0; i < tg.nodes.size(); ++i)
    REQUIRE(resc.amplitude[i] == direct.amplitude[i]);  // bitwise identical
  REQUIRE(resc.grid.nodes == tg.nodes);
}

TEST_CASE("rescaled timescale identities are exact") {
  for (double lam : {0.4, 0.1, 0.01}) {
    REQUIRE(lam * lam * zeno_time(kFlat, lam) ==
            Catch::Approx(lam / std::sqrt(total_weight(kFlat))).epsilon(1e-15));
    REQUIRE(lam * lam * lifetime(kFlat, 1.0, lam) ==
            Catch::Approx(1.0 / gamma_of(kFlat, 1.0)).epsilon(1e-15));
  }
}

TEST_CASE("rescaled survival approaches the limit exponential") {
  // At t_tilde = 1/Gamma the survival probability is within O(lambda^2) of 1/e.
  const double lam = 0.05;
  TimeGrid tg = linear_grid(0.5, 1.0, 2);
  AmplitudeSeries resc = rescaled_survival(kFlat, 1.0, lam, tg);
  REQUIRE(std::abs(resc.probability.back() - std::exp(-1.0)) < 5e-3);

  TimeGrid t0 = linear_grid(0.0, 1.0, 2);
  AmplitudeSeries a0 = rescaled_survival(kFlat, 1.0, lam, t0);
  REQUIRE(std::abs(a0.amplitude.front() - complex_t(1.0, 0.0)) < 1e-8);
}

TEST_CASE("convergence scan: deviations shrink toward the Van Hove limit") {
  TimeGrid win = default_deviation_grid(kFlat, 1.0, 81);
  VanHoveScan scan = convergence_scan(kFlat, 1.0, {0.4, 0.2, 0.1}, win);
  REQUIRE(scan.deviation_max.size() == 3);
  REQUIRE(scan.deviation_max[0] > scan.deviation_max[1]);
  REQUIRE(scan.deviation_max[1] > scan.deviation_max[2]);
  REQUIRE(scan.deviation_max[0] / scan.deviation_max[1] >= 3.0);
  REQUIRE(scan.deviation_max[1] / scan.deviation_max[2] >= 3.0);
  // Zeno width shrinks linearly with the coupling.
  REQUIRE(scan.fitted.zeno_width_exponent == Catch::Approx(1.0).margin(0.15));
  // per-node deviation rows match the window grid
  REQUIRE(scan.deviation[0].size() == win.nodes.size());
}

TEST_CASE("convergence scan input validation") {
  TimeGrid win = default_deviation_grid(kFlat, 1.0, 41);
  REQUIRE_THROWS_AS(convergence_scan(kFlat, 1.0, {0.4, 0.2}, win), std::invalid_argument);
  REQUIRE_THROWS_AS(convergence_scan(kFlat, 1.0, {0.1, 0.2, 0.4}, win),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(convergence_scan(kFlat, -1.0, {0.4, 0.2, 0.1}, win), ClosedChannel);
}
