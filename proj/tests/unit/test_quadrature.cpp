#include "doctest.h"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "lossypdc/quadrature.hpp"

using namespace lossypdc;

TEST_CASE("radial integration of analytic functions") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;

  const auto poly = integrate_radial([](double x) { return x * x * x; }, 0.0, 2.0, spec);
  CHECK(poly.value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(poly.panels == 1);

  const auto osc = integrate_radial([](double x) { return std::cos(50.0 * x); }, 0.0, 3.0, spec);
  CHECK(osc.value == doctest::Approx(std::sin(150.0) / 50.0).epsilon(1e-11));

  const auto cplx =
      integrate_radial([](double x) { return std::exp(cd{0.0, 1.0} * x); }, 0.0, kPi, spec);
  CHECK(std::abs(cplx.value - cd{0.0, 2.0}) < 1e-12);

  const auto peak = integrate_radial([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, spec);
  CHECK(peak.value == doctest::Approx(2.0 * std::atan(100.0) / 1e-2).epsilon(1e-10));
  CHECK(peak.panels > 1);
}

TEST_CASE("sine map removes the square-root endpoint singularity") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.sin_map = true;
  const auto r = integrate_radial([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, spec);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.evaluations < 1000);
}

TEST_CASE("matrix-valued integrands") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  const auto r = integrate_radial(
      [](double x) {
        Eigen::Matrix2d m;
        m << 1.0, x, x * x, std::exp(x);
        return m;
      },
      0.0, 1.0, spec);
  CHECK(r.value(0, 0) == doctest::Approx(1.0));
  CHECK(r.value(0, 1) == doctest::Approx(0.5));
  CHECK(r.value(1, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(r.value(1, 1) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("budget exhaustion raises a convergence error") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.max_subdivisions = 3;
  CHECK_THROWS_AS(integrate_radial([](double x) { return std::sin(1e4 * x * x); }, 0.0, 10.0, spec),
                  ConvergenceError);
  CHECK_THROWS_AS(integrate_radial([](double x) { return x; }, 1.0, 0.0, QuadratureSpec{}), UsageError);
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate_radial([](double x) { return x; }, 0.0, 1.0, bad), UsageError);
}

TEST_CASE("results are bit-reproducible") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  auto f = [](double x) { return std::exp(-x) * std::cos(30.0 * x); };
  const auto a = integrate_radial(f, 0.0, 5.0, spec);
  const auto b = integrate_radial(f, 0.0, 5.0, spec);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
}

TEST_CASE("periodic trapezoid rule") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  // Generating function of the modified Bessel function I0.
  const auto r = integrate_angular([](double phi) { return std::exp(2.0 * std::cos(phi)); }, spec);
  CHECK(r.value == doctest::Approx(2.0 * kPi * std::cyl_bessel_i(0.0, 2.0)).epsilon(1e-13));

  const auto j0 = integrate_angular(
      [](double phi) { return std::exp(cd{0.0, 15.0 * std::cos(phi)}); }, spec);
  CHECK(std::abs(j0.value - 2.0 * kPi * std::cyl_bessel_j(0.0, 15.0)) < 1e-12);

  QuadratureSpec tight = spec;
  tight.max_angular_points = 16;
  CHECK_THROWS_AS(integrate_angular([](double phi) { return std::exp(cd{0.0, 200.0 * std::cos(phi)}); },
                                    tight),
                  ConvergenceError);
}

TEST_CASE("Weyl expansion of the outgoing spherical wave") {
  const double q = 1.0e7;
  for (const double qz : {50.0, 200.0}) {
    for (const double qrho : {0.0, 30.0}) {
      const auto w = weyl_oracle(qz / q, qrho / q, q);
      const double r = std::hypot(qz, qrho) / q;
      const cd expected = std::exp(cd{0.0, q * r}) / (4.0 * kPi * r);
      CHECK(std::abs(w.closed_form - expected) <= 1e-14 * std::abs(expected));
      CHECK(std::abs(w.quadrature - w.closed_form) <= 1e-6 * std::abs(w.closed_form));
    }
  }
}
