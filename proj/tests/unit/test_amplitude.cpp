#include "doctest.h"

#include <cmath>
#include <random>

#include "lossypdc/amplitude.hpp"
#include "lossypdc/errors.hpp"

using namespace lossypdc;

namespace {

ExperimentConfig figure_config(PdcType type, double n_imag) {
  ExperimentConfig cfg;
  cfg.chi2.type = type;
  cfg.pump = {1.75, n_imag};
  cfg.signal = {1.67, n_imag};
  cfg.idler = {1.67, n_imag};
  return cfg;
}

Matrix2cd exchange() {
  Matrix2cd j;
  j << 0.0, 1.0, 1.0, 0.0;
  return j;
}

double rel(const Matrix2cd& a, const Matrix2cd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("collinear phase terms") {
  const auto st = collinear_state(figure_config(PdcType::I, 0.0));
  CHECK(st.phase.delta_k.real() == doctest::Approx(1.889307035202335e6).epsilon(1e-10));
  CHECK(st.phase.sigma_k.real() == doctest::Approx(8.076787575489974e7).epsilon(1e-12));
  CHECK(st.phase.delta_k.imag() == 0.0);

  // Equal absorption at the degenerate point cancels in the mismatch.
  const auto lossy = collinear_state(figure_config(PdcType::I, 1e-5));
  CHECK(std::abs(lossy.phase.delta_k.imag()) <= 1e-15 * std::abs(lossy.phase.sigma_k));
  CHECK(lossy.phase.sigma_k.imag() > 0.0);
}

TEST_CASE("sinc profile and phase window") {
  const double L = 2e-3;
  for (int m = 1; m <= 4; ++m) {
    const PhaseMatch pm{cd{2.0 * m * kPi / L, 0.0}, cd{8e7, 0.0}};
    CHECK(sinc_profile(pm, L) <= 1e-12);
  }
  CHECK(sinc_profile({cd{0.0, 0.0}, cd{8e7, 0.0}}, L) == 1.0);

  const PhaseMatch unequal{cd{2.0 * kPi / L, -2e1}, cd{8e7, 6e1}};
  CHECK(sinc_profile(unequal, L) > 1e-6);

  for (const double x : {0.999e-3, 1.001e-3, 2.5}) {
    const PhaseMatch pm{cd{2.0 * x / L, 1e-3}, cd{8e7, 50.0}};
    const cd x_c = pm.delta_k * (0.5 * L);
    const cd direct = std::sin(x_c) / x_c * std::exp(cd{0.0, 1.0} * pm.sigma_k * (0.5 * L));
    CHECK(std::abs(phase_window(pm, L) - direct) <= 1e-13 * std::abs(direct));
  }
  // Strongly complex mismatch: the difference form matches the direct
  // product where both are representable and stays finite beyond.
  const PhaseMatch above{cd{1e6, 300.5 / (0.5 * L)}, cd{8e7, 310.0 / (0.5 * L)}};
  const cd x_a = above.delta_k * (0.5 * L);
  const cd direct = std::sin(x_a) / x_a * std::exp(cd{0.0, 1.0} * above.sigma_k * (0.5 * L));
  CHECK(std::abs(phase_window(above, L) - direct) <= 1e-9 * std::abs(direct));
  const PhaseMatch steep{cd{1e6, 8e5}, cd{8e7, 8e5}};
  CHECK(std::isfinite(std::abs(phase_window(steep, L))));
}

TEST_CASE("X-factors at normal incidence") {
  const auto st = collinear_state(figure_config(PdcType::I, 0.0));
  const cd ns = st.n.signal;
  const cd np = st.n.pump;
  const cd r = (ns - 1.0) / (ns + 1.0);
  const cd t = 2.0 * ns / (ns + 1.0);
  const cd rp = (np - 1.0) / (np + 1.0);
  const cd tp = 2.0 / (np + 1.0);
  const double L = 2e-3;
  const cd m = 1.0 / (1.0 - r * r * std::exp(cd{0.0, 2.0} * st.signal.k * L));
  const cd mp = 1.0 / (1.0 - rp * rp * std::exp(cd{0.0, 2.0} * st.pump.k * L));
  const cd e = std::exp(cd{0.0, 1.0} * st.phase.sigma_k * L);
  const cd x_plus = tp * t * t * mp * m * m * (1.0 + rp * r * r * e);
  const cd x_minus = tp * t * t * mp * m * m * (1.0 - rp * r * r * e);
  CHECK(std::abs(st.x_plus - x_plus) <= 1e-13 * std::abs(x_plus));
  CHECK(std::abs(st.x_minus - x_minus) <= 1e-13 * std::abs(x_minus));

  const auto pump = fresnel(Polarization::TEM, st.pump, np * np, L);
  const auto te = fresnel(Polarization::TE, st.signal, ns * ns, L);
  CHECK_THROWS_AS(x_factor(Polarization::TM, Polarization::TE, pump, te, te, st.phase.sigma_k, L), UsageError);
  CHECK_THROWS_AS(x_factor(Polarization::TE, Polarization::TE, te, te, te, st.phase.sigma_k, L), UsageError);
}

TEST_CASE("integrand domain") {
  const auto cfg = figure_config(PdcType::I, 1e-6);
  const double q = cfg.omega_signal / constants::c;
  CHECK_THROWS_AS(integrand_typeI({0.0, 0.0}, cfg), DomainError);
  CHECK_THROWS_AS(integrand_typeII({q, 0.0}, cfg), DomainError);
  CHECK_NOTHROW(integrand_typeI({0.3 * q, 0.1 * q}, cfg));
  CHECK_THROWS_AS(reduced_radial(q, cfg), DomainError);
}

TEST_CASE("angular reduction equals the azimuthal quadrature") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> frac(0.02, 0.98);
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  for (const auto type : {PdcType::I, PdcType::II}) {
    auto cfg = figure_config(type, 3e-6);
    cfg.z_signal = 0.02;
    cfg.z_idler = 0.03;
    const double q = cfg.omega_signal / constants::c;
    for (int trial = 0; trial < 10; ++trial) {
      const double kappa = frac(rng) * q;
      const auto full = integrate_angular(
          [&](double phi) -> Matrix2cd {
            const Vec2 k{kappa * std::cos(phi), kappa * std::sin(phi)};
            return type == PdcType::I ? integrand_typeI(k, cfg) : integrand_typeII(k, cfg);
          },
          spec);
      const Matrix2cd oracle = full.value * (kappa / (4.0 * kPi * kPi));
      CHECK(rel(reduced_radial(kappa, cfg), oracle) < 1e-8);
    }
  }
}

TEST_CASE("polarization structure") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    for (const auto type : {PdcType::I, PdcType::II}) {
      auto cfg = figure_config(type, 1e-5 * u(rng));
      cfg.length = 1e-3 + 2e-3 * u(rng);
      cfg.z_signal = 0.5 + u(rng);
      cfg.z_idler = cfg.z_signal;
      const auto a = amplitude_farfield(cfg).matrix;
      const auto b = amplitude_numeric(cfg, 1e-6).matrix;
      const Matrix2cd shape = type == PdcType::I ? Matrix2cd::Identity() : exchange();
      for (const auto& m : {a, b}) {
        const cd coef = (shape.adjoint() * m).trace() / 2.0;
        CHECK((m - coef * shape).norm() <= 1e-10 * m.norm());
      }
    }
  }
}

TEST_CASE("rate is invariant under unitary polarization bases") {
  const auto a = amplitude_farfield(figure_config(PdcType::II, 2e-6)).matrix;
  const double theta = 0.37;
  const double phi = 1.1;
  Matrix2cd u;
  u << std::cos(theta), -std::sin(theta) * std::exp(cd{0.0, phi}), std::sin(theta),
      std::cos(theta) * std::exp(cd{0.0, phi});
  CHECK(rate(u * a * u.transpose()) == doctest::Approx(rate(a)).epsilon(1e-13));
}

TEST_CASE("far field agrees with the numeric amplitude") {
  for (const auto type : {PdcType::I, PdcType::II}) {
    const auto cfg = figure_config(type, 1e-6);
    const auto far = amplitude_farfield(cfg);
    const auto num = amplitude_numeric(cfg, 1e-7);
    CHECK(rel(num.matrix, far.matrix) < 5e-3);
    CHECK(num.error_estimate <= 1e-5 * num.matrix.norm());
  }
}

TEST_CASE("real axis and deformed contour agree") {
  for (const auto type : {PdcType::I, PdcType::II}) {
    auto cfg = figure_config(type, 4e-6);
    cfg.z_signal = 1.5e-3;
    cfg.z_idler = 1.0e-3;
    NumericOptions real_axis;
    real_axis.tol = 1e-9;
    real_axis.path = RadialPath::real_axis;
    NumericOptions contour = real_axis;
    contour.path = RadialPath::contour;
    const auto a = amplitude_numeric(cfg, real_axis).matrix;
    const auto b = amplitude_numeric(cfg, contour).matrix;
    CHECK(rel(a, b) < 1e-7);
  }
}

TEST_CASE("full angular mode with a transverse offset") {
  auto cfg = figure_config(PdcType::I, 2e-6);
  cfg.z_signal = 2e-3;
  cfg.z_idler = 2e-3;
  NumericOptions reduced;
  reduced.tol = 1e-8;
  reduced.angular = AngularMode::reduced;
  NumericOptions full = reduced;
  full.angular = AngularMode::full;
  CHECK(rel(amplitude_numeric(cfg, full).matrix, amplitude_numeric(cfg, reduced).matrix) < 1e-6);

  cfg.offset = {2e-7, -1e-7};
  CHECK_THROWS_AS(amplitude_numeric(cfg, reduced), UsageError);
  CHECK_THROWS_AS(amplitude_farfield(cfg), UsageError);
  const auto shifted = amplitude_numeric(cfg, full);
  CHECK(std::isfinite(shifted.rate));
  CHECK(shifted.rate > 0.0);
}

TEST_CASE("configuration validation") {
  auto cfg = figure_config(PdcType::I, 0.0);
  cfg.length = 0.0;
  try {
    cfg.validate();
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "length");
  }
  cfg = figure_config(PdcType::I, 0.0);
  cfg.idler.n_imag = -1e-6;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = figure_config(PdcType::I, 0.0);
  cfg.omega_signal = 1e14;
  cfg.signal = {};
  CHECK_THROWS_AS(resolve_indices(cfg), RangeError);
}

TEST_CASE("noise gain") {
  CHECK(noise_gain(figure_config(PdcType::I, 0.0)) == 0.0);
  double previous = 0.0;
  for (int j = 1; j <= 10; ++j) {
    const double g = noise_gain(figure_config(PdcType::I, 1e-4 * j));
    CHECK(g > previous);
    previous = g;
  }
  const cd n{1.67, 1e-4};
  CHECK(noise_gain(figure_config(PdcType::I, 1e-4)) ==
        doctest::Approx(std::pow(std::abs(noise_factor(n * n)), 4) - 1.0).epsilon(1e-8));
}
