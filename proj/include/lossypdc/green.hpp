#pragma once

// TE/TM vector wave functions of the vacuum / crystal / vacuum slab, their
// contractions with the second-order susceptibility and their dyadic
// products, and point evaluation of the transmission Green tensor.
//
// Partner-wave convention: a wave generated at k_perp with longitudinal sign s
// is paired with the wave of fully reversed wave vector, i.e. M(-k_perp) and
// N(-k_perp) with sign -s. `reversed()` builds that partner.

#include <Eigen/Dense>

#include "lossypdc/optics.hpp"
#include "lossypdc/quadrature.hpp"

namespace lossypdc {

using Vector3cd = Eigen::Vector3cd;
using Matrix3cd = Eigen::Matrix3cd;
using Matrix2cd = Eigen::Matrix2cd;

enum class WaveKind { M, N };

struct WaveFunction {
  Vector3cd components;
  WaveKind kind = WaveKind::M;
  Vec2 kperp;
  cd kz;      // unused for M
  cd k;       // unused for M
  int sign = +1;
};

/// M = i (k_perp x z) = i (k_y, -k_x, 0). Throws DomainError at k_perp = 0.
WaveFunction vector_wave_M(Vec2 kperp);

/// N = -(1/k) (k_{j+-} x (k_perp x z)) with k_{j+-} = k_perp + sign k_z z.
/// Throws DomainError at k_perp = 0 or k = 0, UsageError for |sign| != 1.
WaveFunction vector_wave_N(Vec2 kperp, cd kz, cd k, int sign = +1);

/// Partner wave: same kind, k_perp -> -k_perp, sign -> -sign.
WaveFunction reversed(const WaveFunction& w);

enum class PdcType { I, II };

std::string_view to_string(PdcType type);

/// Type I: d (xx + yy). Type II: d (xy + yx).
struct Chi2Geometry {
  PdcType type = PdcType::I;
  double d = 1.0;  // m/V

  Eigen::Matrix3d tensor() const;
};

/// d_{ab} a_a b_b from the closed-form tables, with `a` the signal partner
/// wave (built by reversed(), generated at -k_perp) and `b` the idler wave at
/// +k_perp. The tables are expressed in (k_x, k_y) of `b`, k_z/k of `a` for the
/// signal and of `b` for the idler. Throws UsageError if the pairing is wrong.
cd contract_chi2(const Chi2Geometry& geom, const WaveFunction& a, const WaveFunction& b);

/// a (x) b from the closed-form tables, with `a` the signal wave at +k_perp and
/// `b` the reversed idler wave. Throws UsageError if the pairing is wrong.
Matrix3cd dyadic_product(const WaveFunction& a, const WaveFunction& b);

namespace tables {

// Closed forms for complex transverse components; the entries are
// homogeneous of degree two in (kx, ky) apart from the z row/column of the
// dyads.
cd contraction(PdcType type, WaveKind signal, WaveKind idler, cd kx, cd ky, cd kzs, cd ks, cd kzi,
               cd ki);
Matrix3cd dyad(WaveKind signal, WaveKind idler, cd kx, cd ky, cd kzs, cd ks, cd kzi, cd ki);

}  // namespace tables

/// z-dependent transmission factor of a source at z_A inside the slab
/// (|z_A| <= L/2) seen at z_d > L/2. Throws DomainError otherwise.
cd f_factor(Polarization pol, double z_d, double z_A, const ModeKinematics& kin,
            const FresnelSet& fres, double length);

/// Homogeneous slab of index n occupying |z| <= length / 2.
struct Slab {
  cd n{1.0, 0.0};
  double length = 0.0;
};

/// Transmission Green tensor G(r_d, r_A, omega) for r_A inside the slab and
/// r_d beyond its output face, by angular-spectrum quadrature over the
/// propagating and evanescent sectors. Lossless slabs can support guided
/// modes whose poles sit on the evanescent sector; those make the quadrature
/// fail with ConvergenceError rather than return a wrong value.
Matrix3cd scattering_green_point(const Eigen::Vector3d& r_d, const Eigen::Vector3d& r_A, double omega,
                                 const Slab& slab, const QuadratureSpec& spec = {});

/// Free-space dyadic Green tensor (I + grad grad / q^2) e^{iqr}/(4 pi r) at
/// separation r != 0.
Matrix3cd free_space_green(const Eigen::Vector3d& r, double q);

}  // namespace lossypdc
