#include "doctest.h"

#include <cmath>
#include <random>

#include "lossypdc/errors.hpp"
#include "lossypdc/optics.hpp"

using namespace lossypdc;

namespace {

bool close(cd a, cd b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_CASE("wavelength to angular frequency") {
  CHECK(omega_from_wavelength_nm(532.0) == doctest::Approx(3.540698434791078e15).epsilon(1e-14));
}

TEST_CASE("builtin BBO table") {
  const auto bbo = MaterialDispersion::bbo_ordinary();
  CHECK(bbo.index(omega_from_wavelength_nm(1064.0)) == cd{1.65, 0.0});
  CHECK(bbo.index(omega_from_wavelength_nm(532.0)) == cd{1.67, 0.0});
  CHECK(bbo.index(omega_from_wavelength_nm(266.0)) == cd{1.75, 0.0});

  const double w1 = omega_from_wavelength_nm(1064.0);
  const double w2 = omega_from_wavelength_nm(532.0);
  CHECK(bbo.index(0.5 * (w1 + w2)).real() == doctest::Approx(1.66).epsilon(1e-14));
  CHECK(bbo.index(3.54e15).real() == doctest::Approx(1.669992109638209).epsilon(1e-13));

  CHECK_THROWS_AS(bbo.index(0.9 * w1), RangeError);
  CHECK_THROWS_AS(bbo.index(1.1 * omega_from_wavelength_nm(266.0)), RangeError);
  CHECK(MaterialDispersion::builtin("bbo_ordinary").name() == "bbo_ordinary");
  CHECK_THROWS_AS(MaterialDispersion::builtin("calcite"), UsageError);
}

TEST_CASE("vacuum is exactly one") {
  const MaterialDispersion vac;
  CHECK(vac.is_vacuum());
  CHECK(vac.index(1e10) == cd{1.0, 0.0});
  CHECK(vac.index(1e20) == cd{1.0, 0.0});
}

TEST_CASE("material tables") {
  const auto m = MaterialDispersion::parse_table("# comment\n800 1.5 0\n\n400 1.6 1e-4 # tail\n", "glass");
  CHECK(m.samples().size() == 2);
  CHECK(m.samples().front().omega < m.samples().back().omega);
  CHECK(m.index(omega_from_wavelength_nm(400.0)) == cd{1.6, 1e-4});

  try {
    MaterialDispersion::parse_table("800 1.5 0\n400 x 0\n", "bad");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(MaterialDispersion::parse_table("800 1.5\n", "short"), ParseError);
  CHECK_THROWS_AS(MaterialDispersion::from_samples("dup", {{1e15, 1.5, 0}, {1e15, 1.6, 0}}), UsageError);
  CHECK_THROWS_AS(MaterialDispersion::from_samples("gain", {{1e15, 1.5, -1e-3}, {2e15, 1.6, 0}}),
                  UsageError);
}

TEST_CASE("kinematics") {
  const cd n{1.67, 1e-4};
  const auto on_axis = kinematics(3.54e15, n, {});
  CHECK(on_axis.kz == on_axis.k);
  CHECK(on_axis.qz == cd{on_axis.q, 0.0});
  CHECK(on_axis.k.real() == doctest::Approx(1.9719642179924352e7).epsilon(1e-12));

  const double q = on_axis.q;
  const auto evanescent = kinematics(3.54e15, n, {1.2 * q, 0.0});
  CHECK(evanescent.qz.real() == 0.0);
  CHECK(evanescent.qz.imag() == doctest::Approx(q * std::sqrt(0.44)));
  CHECK(evanescent.kz.imag() >= 0.0);

  CHECK(longitudinal_root(cd{-4.0, 0.0}) == cd{0.0, 2.0});
  CHECK(longitudinal_root(cd{4.0, 0.0}) == cd{2.0, 0.0});
  CHECK_THROWS_AS(kinematics(0.0, n, {}), UsageError);
}

TEST_CASE("normal-incidence coefficients") {
  const cd n{1.75, 0.0};
  const auto kin = kinematics(7.08e15, n, {});
  const auto tem = fresnel(Polarization::TEM, kin, n * n, 2e-3);
  CHECK(tem.r21.real() == doctest::Approx(0.2727272727272727).epsilon(1e-14));
  CHECK(tem.t.real() == doctest::Approx(0.7272727272727273).epsilon(1e-14));

  const auto kin_s = kinematics(3.54e15, cd{1.67, 2e-5}, {});
  const cd eps_s = kin_s.n * kin_s.n;
  const auto te = fresnel(Polarization::TE, kin_s, eps_s, 2e-3);
  const auto tm = fresnel(Polarization::TM, kin_s, eps_s, 2e-3);
  CHECK(close(te.t, tm.t, 1e-14));
  CHECK(close(te.r23, -tm.r23, 1e-14));
  CHECK(close(te.r21, -tm.r21, 1e-14));
  CHECK(close(te.m, tm.m, 1e-14));

  CHECK_THROWS_AS(fresnel(Polarization::TEM, kinematics(7.08e15, n, {1e5, 0.0}), n * n, 2e-3), UsageError);
}

TEST_CASE("lossless TE interface conserves flux") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> frac(0.0, 0.95);
  const cd n{1.67, 0.0};
  for (int trial = 0; trial < 50; ++trial) {
    const double q = 1.18e7;
    const auto kin = kinematics(q * constants::c, n, {frac(rng) * q, 0.0});
    const auto te = fresnel(Polarization::TE, kin, n * n, 1e-3);
    const double flux = std::norm(te.r23) + (kin.qz.real() / kin.kz.real()) * std::norm(te.t);
    CHECK(flux == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("interface coefficients match the kinematic form") {
  const cd n{1.67, 3e-5};
  const auto kin = kinematics(3.54e15, n, {4e6, 1e6});
  for (const auto pol : {Polarization::TE, Polarization::TM}) {
    const auto a = fresnel(pol, kin, n * n, 2e-3);
    const auto b = interface_coefficients(pol, kin.kz, kin.qz, n * n, n, 2e-3);
    CHECK(a.t == b.t);
    CHECK(a.r21 == b.r21);
    CHECK(a.r23 == b.r23);
    CHECK(a.m == b.m);
  }
}

TEST_CASE("noise-polarization factors") {
  const cd n{1.67, 1e-3};
  const cd eps = n * n;
  const cd lf = local_field(eps);
  CHECK(lf.real() == doctest::Approx(1.60987493716775e10).epsilon(1e-12));
  CHECK(lf.imag() == doctest::Approx(1.07775247066854e7).epsilon(1e-11));

  const cd a = noise_factor(eps);
  CHECK(a.real() - 1.0 == doctest::Approx(6.374472024393648e-7).epsilon(1e-8));
  CHECK(a.imag() == doctest::Approx(-9.521762212600306e-4).epsilon(1e-12));
  CHECK(close(noise_factor_excess(eps), a - 1.0, 1e-9));

  CHECK(noise_factor(cd{2.5, 0.0}) == cd{1.0, 0.0});
  CHECK(noise_rate_gain(cd{2.5, 0.0}) == 0.0);
  CHECK(noise_rate_gain(eps) == doctest::Approx(std::pow(std::abs(a), 4) - 1.0).epsilon(1e-9));
}

TEST_CASE("loss conventions") {
  const double w = 3.54e15;
  const double ni = n_imag_from_loss(0.1, w, LossConvention::intensity);
  CHECK(ni == doctest::Approx(4.46134010808012e-7).epsilon(1e-13));
  CHECK(std::exp(-2.0 * ni * w * 0.01 / constants::c) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(n_imag_from_loss(0.1, w, LossConvention::amplitude) == doctest::Approx(2.0 * ni).epsilon(1e-15));
  CHECK(n_imag_from_loss(0.0, w, LossConvention::intensity) == 0.0);
  CHECK_THROWS_AS(n_imag_from_loss(1.0, w, LossConvention::intensity), UsageError);

  const cd n{1.67, ni};
  CHECK(noise_rate_gain(n * n) == doctest::Approx(8.68405577963475e-13).epsilon(1e-6));
}
