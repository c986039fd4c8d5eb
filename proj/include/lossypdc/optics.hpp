#pragma once

// Material dispersion, plane-wave kinematics and the interface coefficients of
// a vacuum / crystal / vacuum slab.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lossypdc/constants.hpp"

namespace lossypdc {

/// Real transverse wave vector (k_x, k_y) or transverse position (x, y).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm2() const { return x * x + y * y; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// One tabulated point of a complex refractive index.
struct DispersionSample {
  double omega;   // rad/s
  double n_real;
  double n_imag;
};

/// Angular frequency of a vacuum wavelength given in nanometres.
double omega_from_wavelength_nm(double lambda_nm);

/// Complex refractive index n(omega) = n' + i n'', linearly interpolated in
/// angular frequency between samples. The vacuum material has no samples and
/// evaluates to exactly 1 everywhere.
class MaterialDispersion {
 public:
  MaterialDispersion() = default;  // vacuum

  static MaterialDispersion vacuum();
  /// Ordinary-ray indices of beta barium borate at 1064, 532 and 266 nm.
  static MaterialDispersion bbo_ordinary();
  /// "bbo_ordinary" or "vacuum"; anything else is a UsageError.
  static MaterialDispersion builtin(std::string_view name);

  /// Samples in any order; they are sorted by frequency. Duplicate
  /// frequencies, n'' < 0 or n' <= 0 are rejected.
  static MaterialDispersion from_samples(std::string name, std::vector<DispersionSample> samples);

  /// Text table, one `lambda_nm n_real n_imag` triple per line, `#` comments.
  static MaterialDispersion parse_table(std::string_view text, std::string name);
  static MaterialDispersion load_table(const std::filesystem::path& path);

  /// Throws RangeError outside the sampled interval.
  cd index(double omega) const;

  bool is_vacuum() const { return samples_.empty(); }
  const std::string& name() const { return name_; }
  const std::vector<DispersionSample>& samples() const { return samples_; }
  /// Sampled angular-frequency interval; (0, inf) for vacuum.
  std::pair<double, double> omega_range() const;

 private:
  std::string name_ = "vacuum";
  std::vector<DispersionSample> samples_;
};

inline cd dispersion_eval(const MaterialDispersion& material, double omega) {
  return material.index(omega);
}

enum class Polarization { TE, TM, TEM };

std::string_view to_string(Polarization pol);

/// Wave-vector data of one mode at one frequency and transverse wave vector.
struct ModeKinematics {
  double omega = 0.0;
  cd n{1.0, 0.0};
  cd k;        // n omega / c inside the crystal
  cd kz;       // sqrt(k^2 - |k_perp|^2), Im >= 0
  double q = 0.0;  // omega / c in vacuum
  cd qz;       // sqrt(q^2 - |k_perp|^2), Im >= 0
  Vec2 kperp;
};

/// Square root with Im >= 0; the non-negative root for non-negative reals.
cd longitudinal_root(cd radicand);

/// Throws UsageError for omega <= 0.
ModeKinematics kinematics(double omega, cd n, Vec2 kperp);

/// Interface and multiple-scattering coefficients of the slab for one
/// polarization at one frequency. For TEM, `t` is the entry coefficient t12;
/// for TE/TM it is the exit coefficient t23.
struct FresnelSet {
  cd r21;
  cd r23;
  cd t;
  cd m;
  Polarization pol = Polarization::TEM;
};

/// TE/TM/TEM coefficients. TEM requires k_perp == 0 (UsageError otherwise).
///
/// The TM transmission coefficient is the electric-field amplitude ratio,
/// 2 n k_z / (k_z + eps q_z), so that TE and TM coincide at normal incidence.
FresnelSet fresnel(Polarization pol, const ModeKinematics& kin, cd eps, double length);

/// TE/TM coefficients for arbitrary complex k_z, q_z (used on complex
/// integration contours). `n` must be the principal root of `eps`.
FresnelSet interface_coefficients(Polarization pol, cd kz, cd qz, cd eps, cd n, double length);

/// Local-field correction (2 / 9 eps0) (eps - 1) / eps of the noise polarization.
cd local_field(cd eps);

/// Noise-coupling enhancement A = 1 - 2 i eps0 eps'' L[eps].
cd noise_factor(cd eps);

/// A - 1 without the cancellation of noise_factor(eps) - 1.
cd noise_factor_excess(cd eps);

/// |A|^4 - 1 evaluated without cancellation; the relative rate increase
/// contributed by the noise-polarization couplings.
double noise_rate_gain(cd eps);

/// How an "x per cm" absorption figure is converted into n''.
enum class LossConvention {
  intensity,  // exp(-2 n'' omega L_ref / c) = 1 - x
  amplitude,  // exp(-n'' omega L_ref / c) = 1 - x
};

double n_imag_from_loss(double fraction, double omega, LossConvention convention,
                        double reference_length = 0.01);

}  // namespace lossypdc
