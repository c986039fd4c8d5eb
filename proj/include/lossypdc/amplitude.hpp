#pragma once

// Biphoton amplitude and coincidence rate of Type I / Type II down-conversion
// in an absorbing slab: phase matching, X-factors, the transverse-wave-vector
// integrands and their numerical and stationary-phase evaluation.

#include <optional>

#include "lossypdc/green.hpp"
#include "lossypdc/optics.hpp"

namespace lossypdc {

/// Replaces the real and/or imaginary part of a mode's refractive index.
struct IndexOverride {
  std::optional<double> n_real;
  std::optional<double> n_imag;
};

struct ExperimentConfig {
  MaterialDispersion material = MaterialDispersion::bbo_ordinary();
  IndexOverride pump;
  IndexOverride signal;
  IndexOverride idler;

  double length = 2e-3;        // m
  double pump_field = 1e6;     // V/m
  double z_pump = 0.0;         // m, pump reference plane
  Chi2Geometry chi2{PdcType::I, 2e-12};

  double omega_signal = 3.54e15;  // rad/s
  double omega_idler = 3.54e15;   // rad/s
  double z_signal = 1.0;          // m, from the output face
  double z_idler = 1.0;           // m
  Vec2 offset;                    // r_ds,perp - r_di,perp, m

  /// Always omega_signal + omega_idler.
  double omega_pump() const { return omega_signal + omega_idler; }

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

struct ModeIndices {
  cd pump;
  cd signal;
  cd idler;
};

/// Material indices at the three frequencies with overrides applied.
ModeIndices resolve_indices(const ExperimentConfig& cfg);

struct PhaseMatch {
  cd delta_k;  // k_p - k_zs - k_zi
  cd sigma_k;  // k_p + k_zs + k_zi
};

PhaseMatch phase_terms(const ModeKinematics& signal, const ModeKinematics& idler,
                       const ModeKinematics& pump);

/// |sinc(dk L/2)|^2 |e^{i Sk L/2}|^2.
double sinc_profile(const PhaseMatch& pm, double length);

/// sinc(dk L/2) e^{i Sk L/2}; switches to a difference of exponentials when
/// Im dk L/2 is large enough for sin to overflow.
cd phase_window(const PhaseMatch& pm, double length);

cd x_factor(Polarization sigma, Polarization sigma_prime, const FresnelSet& pump,
            const FresnelSet& signal, const FresnelSet& idler, cd sigma_k, double length);

/// Integrand f of I = \int d^2k_perp / (2 pi)^2 f for 0 < |k_perp| <
/// min(q_s, q_i); DomainError outside. The 1/k_perp^4 poles are cancelled
/// against the wave-function products analytically.
Matrix2cd integrand_typeI(Vec2 kperp, const ExperimentConfig& cfg);
Matrix2cd integrand_typeII(Vec2 kperp, const ExperimentConfig& cfg);

/// Radial integrand r(kappa) after the angular integral, I = \int dkappa r,
/// for collinear detectors (zero offset), per cfg.chi2.type.
Matrix2cd reduced_radial(double kappa, const ExperimentConfig& cfg);

struct BiphotonAmplitude {
  Matrix2cd matrix = Matrix2cd::Zero();
  double rate = 0.0;
  double error_estimate = 0.0;  // absolute, on the matrix norm
};

double rate(const Matrix2cd& amplitude);
double rate(const BiphotonAmplitude& amplitude);

/// Radial contour: the real k_perp^2 axis with oscillation-capped panels, or a
/// deformation into the lower half k_perp^2 plane where the detector phase
/// decays. `automatic` picks the real axis when it is cheap and the contour
/// when the transverse offset allows it.
enum class RadialPath { automatic, real_axis, contour };

/// Angular treatment: the closed-form angular reduction (collinear only) or
/// trapezoid quadrature of the full 2-D integrand.
enum class AngularMode { automatic, reduced, full };

struct NumericOptions {
  double tol = 1e-6;
  RadialPath path = RadialPath::automatic;
  AngularMode angular = AngularMode::automatic;
  int max_subdivisions = 400000;
};

BiphotonAmplitude amplitude_numeric(const ExperimentConfig& cfg, const NumericOptions& options);
BiphotonAmplitude amplitude_numeric(const ExperimentConfig& cfg, double tol);

/// Leading-order stationary-phase amplitude. Requires degenerate frequencies
/// and zero transverse offset (UsageError otherwise).
BiphotonAmplitude amplitude_farfield(const ExperimentConfig& cfg);

/// Collinear phase terms and Fresnel sets at k_perp = 0.
struct CollinearState {
  ModeIndices n;
  ModeKinematics pump;
  ModeKinematics signal;
  ModeKinematics idler;
  PhaseMatch phase;
  cd x_plus;   // X_TE,TE
  cd x_minus;  // X_TE,TM
};

CollinearState collinear_state(const ExperimentConfig& cfg);

/// |A*(omega_s) A*(omega_i)|^2 - 1, the relative rate increase due to the
/// noise-polarization couplings.
double noise_gain(const ExperimentConfig& cfg);

}  // namespace lossypdc
