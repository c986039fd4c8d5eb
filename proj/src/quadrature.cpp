#include "lossypdc/quadrature.hpp"

#include <cmath>

namespace lossypdc {

namespace {

// Angular factor \int_0^{2pi} dphi e^{i kappa rho cos(phi)}, by the trapezoid rule.
cd angular_phase(double kappa, double rho, const QuadratureSpec& spec) {
  if (rho == 0.0) return {2.0 * kPi, 0.0};
  const auto result = integrate_angular(
      [&](double phi) { return std::exp(kI * (kappa * rho * std::cos(phi))); }, spec);
  return result.value;
}

}  // namespace

WeylComparison weyl_oracle(double z, double rho, double q, const QuadratureSpec& spec) {
  if (!(z > 0.0)) throw UsageError("weyl_oracle: z must be positive");
  if (!(q > 0.0)) throw UsageError("weyl_oracle: q must be positive");
  if (!(rho >= 0.0)) throw UsageError("weyl_oracle: rho must be non-negative");

  const double r = std::hypot(z, rho);
  WeylComparison out;
  out.closed_form = std::exp(kI * (q * r)) / (4.0 * kPi * r);

  // Propagating sector, kappa = q sin(theta): the 1/q_z endpoint factor cancels
  // against the Jacobian.
  QuadratureSpec prop = spec;
  prop.sin_map = false;
  prop.max_panel_width = 2.0 * kPi / (q * (z + rho) + 1.0);
  const auto propagating = integrate_radial(
      [&](double theta) {
        const double kappa = q * std::sin(theta);
        return q * std::sin(theta) * std::exp(kI * (q * z * std::cos(theta))) *
               angular_phase(kappa, rho, spec);
      },
      0.0, 0.5 * kPi, prop);

  // Evanescent sector, kappa = q cosh(s), q_z = i q sinh(s), cut where the
  // decay reaches e^{-45}.
  constexpr double decay_cut = 45.0;
  const double s_max = std::asinh(decay_cut / (q * z));
  QuadratureSpec evan = spec;
  evan.sin_map = false;
  evan.max_panel_width = 2.0 * kPi / (decay_cut * rho / z + 1.0);
  evan.abs_floor = std::max(spec.abs_floor, spec.rel_tol * std::abs(propagating.value));
  const auto evanescent = integrate_radial(
      [&](double s) {
        const double kappa = q * std::cosh(s);
        return -kI * (q * std::cosh(s) * std::exp(-q * z * std::sinh(s))) *
               angular_phase(kappa, rho, spec);
      },
      0.0, s_max, evan);

  const cd prefactor = kI / (8.0 * kPi * kPi);
  out.quadrature = prefactor * (propagating.value + evanescent.value);
  out.error_estimate = std::abs(prefactor) * (propagating.error + evanescent.error);
  return out;
}

}  // namespace lossypdc
