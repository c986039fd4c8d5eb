#include "lossypdc/green.hpp"

#include <cmath>

#include "lossypdc/errors.hpp"

namespace lossypdc {

WaveFunction vector_wave_M(Vec2 kperp) {
  if (kperp.norm2() == 0.0)
    throw DomainError("vector_wave_M: TE direction undefined at k_perp = 0");
  WaveFunction w;
  w.kind = WaveKind::M;
  w.kperp = kperp;
  w.components = Vector3cd(kI * kperp.y, -kI * kperp.x, 0.0);
  return w;
}

WaveFunction vector_wave_N(Vec2 kperp, cd kz, cd k, int sign) {
  if (kperp.norm2() == 0.0)
    throw DomainError("vector_wave_N: TM direction undefined at k_perp = 0");
  if (k == cd{0.0, 0.0}) throw DomainError("vector_wave_N: k = 0");
  if (sign != 1 && sign != -1) throw UsageError("vector_wave_N: sign must be +1 or -1");
  WaveFunction w;
  w.kind = WaveKind::N;
  w.kperp = kperp;
  w.kz = kz;
  w.k = k;
  w.sign = sign;
  const cd skz = static_cast<double>(sign) * kz;
  w.components = -Vector3cd(skz * kperp.x, skz * kperp.y, -kperp.norm2()) / k;
  return w;
}

WaveFunction reversed(const WaveFunction& w) {
  if (w.kind == WaveKind::M) return vector_wave_M(-w.kperp);
  return vector_wave_N(-w.kperp, w.kz, w.k, -w.sign);
}

std::string_view to_string(PdcType type) { return type == PdcType::I ? "I" : "II"; }

Eigen::Matrix3d Chi2Geometry::tensor() const {
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  if (type == PdcType::I) {
    t(0, 0) = d;
    t(1, 1) = d;
  } else {
    t(0, 1) = d;
    t(1, 0) = d;
  }
  return t;
}

namespace tables {

cd contraction(PdcType type, WaveKind signal, WaveKind idler, cd kx, cd ky, cd kzs, cd ks, cd kzi,
               cd ki) {
  const bool ms = signal == WaveKind::M;
  const bool mi = idler == WaveKind::M;
  if (type == PdcType::I) {
    const cd kp2 = kx * kx + ky * ky;
    if (ms && mi) return kp2;
    if (!ms && !mi) return kp2 * kzs * kzi / (ks * ki);
    return 0.0;
  }
  const cd diff = kx * kx - ky * ky;
  if (ms && mi) return -2.0 * kx * ky;
  if (ms) return -kI * diff * kzi / ki;
  if (mi) return kI * diff * kzs / ks;
  return 2.0 * kx * ky * kzs * kzi / (ks * ki);
}

Matrix3cd dyad(WaveKind signal, WaveKind idler, cd kx, cd ky, cd kzs, cd ks, cd kzi, cd ki) {
  const cd kp2 = kx * kx + ky * ky;
  Matrix3cd m;
  if (signal == WaveKind::M && idler == WaveKind::M) {
    m << ky * ky, -kx * ky, 0.0,
         -kx * ky, kx * kx, 0.0,
         0.0, 0.0, 0.0;
  } else if (signal == WaveKind::M) {
    m << kI * kx * ky * kzi, kI * ky * ky * kzi, -kI * ky * kp2,
         -kI * kx * kx * kzi, -kI * kx * ky * kzi, kI * kx * kp2,
         0.0, 0.0, 0.0;
    m *= -1.0 / ki;
  } else if (idler == WaveKind::M) {
    m << kI * kx * ky * kzs, -kI * kx * kx * kzs, 0.0,
         kI * ky * ky * kzs, -kI * kx * ky * kzs, 0.0,
         -kI * ky * kp2, kI * kx * kp2, 0.0;
    m *= 1.0 / ks;
  } else {
    m << kx * kx * kzs * kzi, kx * ky * kzs * kzi, -kx * kzs * kp2,
         kx * ky * kzs * kzi, ky * ky * kzs * kzi, -ky * kzs * kp2,
         -kx * kzi * kp2, -ky * kzi * kp2, kp2 * kp2;
    m *= 1.0 / (ks * ki);
  }
  return m;
}

}  // namespace tables

cd contract_chi2(const Chi2Geometry& geom, const WaveFunction& a, const WaveFunction& b) {
  if (!(a.kperp == -b.kperp))
    throw UsageError("contract_chi2: a must be generated at -k_perp of b");
  if ((a.kind == WaveKind::N && a.sign != -1) || (b.kind == WaveKind::N && b.sign != 1))
    throw UsageError("contract_chi2: a must be a reversed wave and b a forward wave");
  return geom.d * tables::contraction(geom.type, a.kind, b.kind, b.kperp.x, b.kperp.y, a.kz, a.k,
                                      b.kz, b.k);
}

Matrix3cd dyadic_product(const WaveFunction& a, const WaveFunction& b) {
  if (!(b.kperp == -a.kperp))
    throw UsageError("dyadic_product: b must be generated at -k_perp of a");
  if ((a.kind == WaveKind::N && a.sign != 1) || (b.kind == WaveKind::N && b.sign != -1))
    throw UsageError("dyadic_product: a must be a forward wave and b a reversed wave");
  return tables::dyad(a.kind, b.kind, a.kperp.x, a.kperp.y, a.kz, a.k, b.kz, b.k);
}

cd f_factor(Polarization pol, double z_d, double z_A, const ModeKinematics& kin,
            const FresnelSet& fres, double length) {
  if (pol == Polarization::TEM) throw UsageError("f_factor: polarization must be TE or TM");
  if (!(std::abs(z_A) <= 0.5 * length))
    throw DomainError("f_factor: source point z_A lies outside the crystal");
  if (!(z_d > 0.5 * length)) throw DomainError("f_factor: detector must lie beyond the output face");
  const cd kz = kin.kz;
  return fres.t * std::exp(kI * kin.qz * (z_d - 0.5 * length)) * std::exp(kI * kz * (0.5 * length)) *
         (std::exp(-kI * kz * z_A) + fres.r21 * std::exp(kI * kz * (z_A + length))) * fres.m;
}

Matrix3cd scattering_green_point(const Eigen::Vector3d& r_d, const Eigen::Vector3d& r_A, double omega,
                                 const Slab& slab, const QuadratureSpec& spec) {
  if (!(omega > 0.0)) throw UsageError("scattering_green_point: omega must be positive");
  if (!(slab.length > 0.0)) throw UsageError("scattering_green_point: slab length must be positive");
  if (!(std::abs(r_A.z()) <= 0.5 * slab.length))
    throw DomainError("scattering_green_point: source point lies outside the crystal");
  if (!(r_d.z() > 0.5 * slab.length))
    throw DomainError("scattering_green_point: detector must lie beyond the output face");

  const double q = omega / constants::c;
  const cd eps = slab.n * slab.n;
  const double dx = r_d.x() - r_A.x();
  const double dy = r_d.y() - r_A.y();
  const double rho = std::hypot(dx, dy);
  const double depth = r_d.z() - r_A.z();

  // Angular integral of the bracket divided by kappa^2, at radius kappa.
  auto ring = [&](double kappa) -> Matrix3cd {
    const auto kin = kinematics(omega, slab.n, Vec2{kappa, 0.0});
    const auto te = fresnel(Polarization::TE, kin, eps, slab.length);
    const auto tm = fresnel(Polarization::TM, kin, eps, slab.length);
    const cd f_te = f_factor(Polarization::TE, r_d.z(), r_A.z(), kin, te, slab.length);
    const cd f_tm = f_factor(Polarization::TM, r_d.z(), r_A.z(), kin, tm, slab.length);
    auto integrand = [&](double phi) -> Matrix3cd {
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      const cd phase = std::exp(kI * (kappa * (c * dx + s * dy)));
      const Matrix3cd mm = tables::dyad(WaveKind::M, WaveKind::M, c, s, kin.kz, kin.k, kin.kz, kin.k);
      // N (x) N scaled by 1/kappa^2 has entries of degree 0, 1 and 2 in kappa.
      const Matrix3cd nn =
          tables::dyad(WaveKind::N, WaveKind::N, kappa * c, kappa * s, kin.kz, kin.k, kin.kz, kin.k) /
          (kappa * kappa);
      return phase * (mm * f_te + nn * f_tm);
    };
    QuadratureSpec angular = spec;
    return integrate_angular(integrand, angular).value / kin.kz;
  };

  // Propagating sector, kappa = q sin(theta).
  QuadratureSpec prop = spec;
  prop.sin_map = false;
  prop.max_panel_width = 2.0 * kPi / (q * (depth + rho) + 1.0);
  const auto propagating = integrate_radial(
      [&](double theta) -> Matrix3cd {
        const double kappa = q * std::sin(theta);
        if (kappa == 0.0) return Matrix3cd::Zero();
        return ring(kappa) * (kappa * q * std::cos(theta));
      },
      0.0, 0.5 * kPi, prop);

  // Evanescent sector, kappa = q cosh(s), cut at e^{-45} decay.
  constexpr double decay_cut = 45.0;
  const double s_max = std::asinh(decay_cut / (q * depth));
  QuadratureSpec evan = spec;
  evan.sin_map = false;
  evan.max_panel_width = 2.0 * kPi / (decay_cut * rho / depth + 1.0);
  evan.abs_floor = std::max(spec.abs_floor, spec.rel_tol * propagating.value.norm());
  const auto evanescent = integrate_radial(
      [&](double s) -> Matrix3cd {
        const double kappa = q * std::cosh(s);
        return ring(kappa) * (kappa * q * std::sinh(s));
      },
      0.0, s_max, evan);

  return (kI / (8.0 * kPi * kPi)) * (propagating.value + evanescent.value);
}

Matrix3cd free_space_green(const Eigen::Vector3d& r, double q) {
  const double dist = r.norm();
  if (dist == 0.0) throw SingularityError("free_space_green: r = 0");
  const double qr = q * dist;
  const cd g = std::exp(kI * qr) / (4.0 * kPi * dist);
  const cd a = 1.0 + kI / qr - 1.0 / (qr * qr);
  const cd b = -1.0 - 3.0 * kI / qr + 3.0 / (qr * qr);
  const Eigen::Vector3d u = r / dist;
  return g * (a * Matrix3cd::Identity() + b * (u * u.transpose()).cast<cd>());
}

}  // namespace lossypdc
