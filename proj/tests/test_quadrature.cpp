#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "decaykit/quadrature.hpp"

using namespace decaykit;

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
  const GaussRule& g = gauss_legendre(12);
  double s = 0.0;
  for (int i = 0; i < 12; ++i) s += g.w[i] * std::pow(g.x[i], 10);
  REQUIRE(s == Catch::Approx(2.0 / 11.0).epsilon(1e-13));
  double w = 0.0;
  for (int i = 0; i < 12; ++i) w += g.w[i];
  REQUIRE(w == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration reaches tight tolerances") {
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  const double v = integrate([](double x) { return std::exp(-x * x); }, 0.0, 10.0, opt);
  REQUIRE(v == Catch::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-12));

  const double lg = integrate([](double x) { return std::log(x); }, 0.0, 1.0, opt);
  REQUIRE(lg == Catch::Approx(-1.0).margin(1e-10));
}

TEST_CASE("half-line transform handles exponential tails") {
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  const double v =
      integrate_half_line([](double x) { return x * std::exp(-x / 3.0); }, 0.0, 3.0, opt);
  REQUIRE(v == Catch::Approx(9.0).epsilon(1e-11));
}

TEST_CASE("threshold peel removes algebraic endpoint singularities") {
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  // int_0^1 x^(-1/2) dx = 2 with eta = 1/2
  const double v = integrate_peeled([](double x) { return 1.0 / std::sqrt(x); }, 0.0,
                                    1.0, 0.5, opt);
  REQUIRE(v == Catch::Approx(2.0).epsilon(1e-12));
  // int_0^4 sqrt(x) e^{-x} dx with eta = 3/2
  const double w = integrate_peeled(
      [](double x) { return std::sqrt(x) * std::exp(-x); }, 0.0, 40.0, 1.5, opt);
  REQUIRE(w == Catch::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("non-finite integrands are reported") {
  QuadOptions opt;
  REQUIRE_THROWS_AS(integrate([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, opt),
                    QuadratureFailure);
}

TEST_CASE("spherical Bessel moments match series and recurrence regimes") {
  double j[33];
  sph_bessel_j(6, 1e-12, j);
  REQUIRE(j[0] == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(j[1] == Catch::Approx(1e-12 / 3.0).epsilon(1e-6));

  sph_bessel_j(4, 2.0, j);
  REQUIRE(j[0] == Catch::Approx(std::sin(2.0) / 2.0).epsilon(1e-13));
  REQUIRE(j[1] == Catch::Approx(std::sin(2.0) / 4.0 - std::cos(2.0) / 2.0).epsilon(1e-12));
  // j_2(2) = (3/x^3 - 1/x) sin x - (3/x^2) cos x at x = 2
  const double j2 = (3.0 / 8.0 - 0.5) * std::sin(2.0) - 0.75 * std::cos(2.0);
  REQUIRE(j[2] == Catch::Approx(j2).epsilon(1e-12));

  sph_bessel_j(4, 500.0, j);
  REQUIRE(j[0] == Catch::Approx(std::sin(500.0) / 500.0).epsilon(1e-12));
}

TEST_CASE("oscillatory panels reproduce Fourier integrals of a smooth function") {
  auto f = [](double x) -> complex_t { return 1.0 / (1.0 + x * x); };
  auto panels = build_osc_panels(f, -8.0, 8.0, 1e-13, 24, 2000, {0.0});
  for (double t : {0.0, 0.7, 3.0, 25.0}) {
    QuadOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    opt.max_panels = 40000;
    const complex_t direct = integrate(
        [t](double x) {
          return complex_t(1.0 / (1.0 + x * x)) * std::exp(complex_t(0.0, -x * t));
        },
        -8.0, 8.0, opt);
    const complex_t fast = osc_integral(panels, t);
    REQUIRE(std::abs(fast - direct) < 1e-10);
  }
}

TEST_CASE("Chebyshev panel cache evaluates to near machine accuracy") {
  auto f = [](double x) -> complex_t {
    return std::exp(complex_t(0.0, 1.0) * std::sqrt(x)) / (1.0 + x);
  };
  auto panels = build_cheb_panels(f, 0.0, 50.0, 1e-13, 20, 2000, {1.0, 5.0, 20.0});
  for (double x : {0.013, 0.9, 7.7, 33.0, 49.2}) {
    const ChebPanel* p = nullptr;
    for (const auto& q : panels)
      if (x >= q.a && x <= q.b) {
        p = &q;
        break;
      }
    REQUIRE(p != nullptr);
    REQUIRE(std::abs(p->eval(x) - f(x)) < 1e-11);
  }
}

TEST_CASE("polyfit recovers exact polynomial coefficients") {
  std::vector<double> x, y;
  for (int i = 0; i <= 30; ++i) {
    const double t = 0.1 * i;
    x.push_back(t);
    y.push_back(2.0 - 0.5 * t + 0.25 * t * t - 0.01 * t * t * t * t);
  }
  auto c = polyfit(x, y, 4);
  REQUIRE(c[0] == Catch::Approx(2.0).margin(1e-10));
  REQUIRE(c[1] == Catch::Approx(-0.5).margin(1e-9));
  REQUIRE(c[2] == Catch::Approx(0.25).margin(1e-9));
  REQUIRE(c[4] == Catch::Approx(-0.01).margin(1e-10));
}

TEST_CASE("linear fit reports slope, intercept and correlation") {
  std::vector<double> x{1, 2, 3, 4, 5}, y{2.1, 4.1, 6.1, 8.1, 10.1};
  auto f = linear_fit(x, y);
  REQUIRE(f.slope == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(f.intercept == Catch::Approx(0.1).margin(1e-12));
  REQUIRE(f.correlation == Catch::Approx(1.0).margin(1e-12));
}
