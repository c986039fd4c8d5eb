#include "lossypdc/amplitude.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "lossypdc/errors.hpp"

namespace lossypdc {

namespace {

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ValidationError(key, what);
}

cd apply_override(const MaterialDispersion& material, double omega, const IndexOverride& o) {
  if (o.n_real && o.n_imag) return {*o.n_real, *o.n_imag};
  const cd base = material.index(omega);
  return {o.n_real.value_or(base.real()), o.n_imag.value_or(base.imag())};
}

Polarization polarization_of(int index) { return index == 0 ? Polarization::TE : Polarization::TM; }
WaveKind kind_of(int index) { return index == 0 ? WaveKind::M : WaveKind::N; }

Matrix2cd identity2() { return Matrix2cd::Identity(); }
Matrix2cd exchange2() {
  Matrix2cd j;
  j << 0.0, 1.0, 1.0, 0.0;
  return j;
}

// Everything about a configuration that does not depend on k_perp.
class Integrand {
 public:
  explicit Integrand(const ExperimentConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    n_ = resolve_indices(cfg_);
    eps_s_ = n_.signal * n_.signal;
    eps_i_ = n_.idler * n_.idler;
    const auto pump = kinematics(cfg_.omega_pump(), n_.pump, Vec2{});
    kp_ = pump.k;
    pump_ = fresnel(Polarization::TEM, pump, n_.pump * n_.pump, cfg_.length);
    qs_ = cfg_.omega_signal / constants::c;
    qi_ = cfg_.omega_idler / constants::c;
    ks_ = n_.signal * cfg_.omega_signal / constants::c;
    ki_ = n_.idler * cfg_.omega_idler / constants::c;
  }

  double qs() const { return qs_; }
  double qi() const { return qi_; }
  cd ks() const { return ks_; }
  cd ki() const { return ki_; }
  const ExperimentConfig& config() const { return cfg_; }

  struct Point {
    cd kzs, kzi, qzs, qzi;
    cd common;  // sinc e^{i Sk L/2} e^{i (q_zs z_ds + q_zi z_di)} / (k_zs k_zi)
    std::array<std::array<cd, 2>, 2> x;  // [signal TE/TM][idler TE/TM]
  };

  // Longitudinal components at complex u = k_perp^2.
  cd kz_signal(cd u) const { return u == cd{} ? ks_ : longitudinal_root(ks_ * ks_ - u); }
  cd kz_idler(cd u) const { return u == cd{} ? ki_ : longitudinal_root(ki_ * ki_ - u); }
  cd qz_signal(cd u) const { return u == cd{} ? cd{qs_} : longitudinal_root(qs_ * qs_ - u); }
  cd qz_idler(cd u) const { return u == cd{} ? cd{qi_} : longitudinal_root(qi_ * qi_ - u); }

  // Detector phase q_zs z_ds + q_zi z_di.
  cd detector_phase(cd u) const {
    return qz_signal(u) * cfg_.z_signal + qz_idler(u) * cfg_.z_idler;
  }

  Point at(cd u) const {
    Point p;
    p.kzs = kz_signal(u);
    p.kzi = kz_idler(u);
    p.qzs = qz_signal(u);
    p.qzi = qz_idler(u);
    const PhaseMatch pm{kp_ - p.kzs - p.kzi, kp_ + p.kzs + p.kzi};
    const double L = cfg_.length;
    std::array<FresnelSet, 2> fs;
    std::array<FresnelSet, 2> fi;
    for (int a = 0; a < 2; ++a) {
      fs[a] = interface_coefficients(polarization_of(a), p.kzs, p.qzs, eps_s_, n_.signal, L);
      fi[a] = interface_coefficients(polarization_of(a), p.kzi, p.qzi, eps_i_, n_.idler, L);
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        p.x[a][b] = x_factor(polarization_of(a), polarization_of(b), pump_, fs[a], fi[b], pm.sigma_k, L);
    p.common = phase_window(pm, L) *
               std::exp(kI * (p.qzs * cfg_.z_signal + p.qzi * cfg_.z_idler)) / (p.kzs * p.kzi);
    return p;
  }

  // h(u) of I = \int du h(u) after the closed-form angular integral.
  Matrix2cd reduced(cd u) const {
    const Point p = at(u);
    const cd as = p.kzs / ks_;
    const cd ai = p.kzi / ki_;
    if (cfg_.chi2.type == PdcType::I) {
      const cd bracket = p.x[0][0] + (as * ai) * (as * ai) * p.x[1][1];
      return (p.common * bracket / (8.0 * kPi)) * identity2();
    }
    const cd bracket = p.x[0][0] + as * as * p.x[1][0] + ai * ai * p.x[0][1] +
                       (as * ai) * (as * ai) * p.x[1][1];
    return (p.common * bracket / (16.0 * kPi)) * exchange2();
  }

  // Full integrand f along the unit direction (c, s) at radius kappa.
  Matrix2cd full(const Point& p, double c, double s, cd kappa) const {
    Matrix2cd sum = Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const cd contraction = tables::contraction(cfg_.chi2.type, kind_of(a), kind_of(b), c, s, p.kzs,
                                                   ks_, p.kzi, ki_);
        if (contraction == cd{}) continue;
        const Matrix3cd dyad = tables::dyad(kind_of(a), kind_of(b), c, s, p.kzs, ks_, p.kzi, ki_);
        sum += (contraction * p.x[a][b]) * dyad.topLeftCorner<2, 2>();
      }
    }
    const cd transverse = std::exp(kI * kappa * (c * cfg_.offset.x + s * cfg_.offset.y));
    return (p.common * transverse) * sum;
  }

  // h(u) by trapezoid quadrature of the full integrand over the angle.
  Matrix2cd angular(cd u) const {
    const Point p = at(u);
    const cd kappa = std::sqrt(u);
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    const auto result = integrate_angular(
        [&](double phi) { return full(p, std::cos(phi), std::sin(phi), kappa); }, spec);
    return result.value / (8.0 * kPi * kPi);
  }

  // hbar E_p L / (4 pi i eps0) (w_s w_i / c^2)^2 e^{i q_p z_p} d A*(w_s) A*(w_i).
  cd prefactor() const {
    const double ws = cfg_.omega_signal;
    const double wi = cfg_.omega_idler;
    const double c2 = constants::c * constants::c;
    const cd a_s = std::conj(noise_factor(eps_s_));
    const cd a_i = std::conj(noise_factor(eps_i_));
    const double qp = cfg_.omega_pump() / constants::c;
    return constants::hbar * cfg_.pump_field * cfg_.length / (4.0 * kPi * kI * constants::epsilon0) *
           (ws * wi / c2) * (ws * wi / c2) * std::exp(kI * (qp * cfg_.z_pump)) * cfg_.chi2.d * a_s *
           a_i;
  }

 private:
  ExperimentConfig cfg_;
  ModeIndices n_;
  cd eps_s_, eps_i_;
  cd kp_, ks_, ki_;
  double qs_ = 0.0, qi_ = 0.0;
  FresnelSet pump_;
};

Matrix2cd integrand_of_type(Vec2 kperp, const ExperimentConfig& cfg, PdcType type) {
  ExperimentConfig typed = cfg;
  typed.chi2.type = type;
  const Integrand integrand(typed);
  const double kappa = std::sqrt(kperp.norm2());
  if (!(kappa > 0.0 && kappa < std::min(integrand.qs(), integrand.qi())))
    throw DomainError("integrand: k_perp must satisfy 0 < |k_perp| < min(q_s, q_i)");
  return integrand.full(integrand.at(kappa * kappa), kperp.x / kappa, kperp.y / kappa, kappa);
}

// Decay margin for truncating the deformed contour: the dropped pieces are
// below e^{-margin} relative to the stationary-point contribution.
double contour_margin(const Integrand& in) {
  const auto& cfg = in.config();
  const double qz = std::max(in.qs(), in.qi()) * (cfg.z_signal + cfg.z_idler);
  return 40.0 + std::log(std::max(1.0, qz));
}

// Largest e-folding of e^{i k_perp . rho} on the contour beyond the decay of
// the detector phase.
double transverse_growth(cd u, double rho) { return std::abs(std::sqrt(u).imag()) * rho; }

struct ContourPlan {
  double depth = 0.0;    // Y, left leg u = -i y, y in [0, Y]
  double tau_max = 0.0;  // right leg u = U - i tau^2
  double worst_excess = 0.0;
};

ContourPlan plan_contour(const Integrand& in) {
  const auto& cfg = in.config();
  const double rho = std::hypot(cfg.offset.x, cfg.offset.y);
  const double U = std::pow(std::min(in.qs(), in.qi()), 2);
  const double T = contour_margin(in);
  auto decay_left = [&](double y) {
    const cd u{0.0, -y};
    return in.detector_phase(u).imag() - transverse_growth(u, rho);
  };
  auto decay_right = [&](double tau) {
    const cd u{U, -tau * tau};
    return in.detector_phase(u).imag() - transverse_growth(u, rho);
  };

  ContourPlan plan;
  const double z_sum = cfg.z_signal + cfg.z_idler;
  double y = 2.0 * std::max(in.qs(), in.qi()) * T / z_sum;
  for (int iter = 0; decay_left(y) < T; ++iter) {
    if (iter > 200) throw UsageError("contour: detector phase does not decay on the deformed path");
    y *= 2.0;
  }
  plan.depth = y;
  for (int j = 1; j <= 400; ++j) {
    const double yj = y * std::pow(1e-12, 1.0 - j / 400.0);
    plan.worst_excess = std::max(plan.worst_excess, -decay_left(yj));
  }
  double tau = T / std::min(cfg.z_signal, cfg.z_idler);
  for (int iter = 0; decay_right(tau) < T; ++iter) {
    if (iter > 200) throw UsageError("contour: detector phase does not decay on the deformed path");
    tau *= 2.0;
  }
  plan.tau_max = tau;
  for (int j = 1; j <= 400; ++j)
    plan.worst_excess = std::max(plan.worst_excess, -decay_right(tau * j / 400.0));
  return plan;
}

// Transverse-offset growth tolerated on the contour, in e-folds.
constexpr double kMaxContourGrowth = 6.0;
// Real-axis panels below which the real axis is preferred.
constexpr double kCheapRealAxisPanels = 4000.0;

double real_axis_panel_width(const Integrand& in) {
  const auto& cfg = in.config();
  const double rho = std::hypot(cfg.offset.x, cfg.offset.y);
  const double qmax = std::max(in.qs(), in.qi());
  const double rate = in.qs() * cfg.z_signal + in.qi() * cfg.z_idler +
                      2.0 * (std::abs(in.ks()) + std::abs(in.ki())) * cfg.length + qmax * rho + 1.0;
  return 2.0 * kPi / rate;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(std::isfinite(length) && length > 0.0, "length", "crystal length must be positive");
  require(std::isfinite(pump_field), "pump_field", "must be finite");
  require(std::isfinite(z_pump), "z_pump", "must be finite");
  require(std::isfinite(chi2.d), "d", "must be finite");
  require(std::isfinite(omega_signal) && omega_signal > 0.0, "omega_signal", "must be positive");
  require(std::isfinite(omega_idler) && omega_idler > 0.0, "omega_idler", "must be positive");
  require(std::isfinite(z_signal) && z_signal > 0.0, "z_signal", "detector distance must be positive");
  require(std::isfinite(z_idler) && z_idler > 0.0, "z_idler", "detector distance must be positive");
  require(std::isfinite(offset.x) && std::isfinite(offset.y), "offset", "must be finite");
  const std::array<std::pair<const IndexOverride*, const char*>, 3> modes{
      {{&pump, "pump"}, {&signal, "signal"}, {&idler, "idler"}}};
  for (const auto& [o, name] : modes) {
    if (o->n_real && !(*o->n_real > 0.0))
      throw ValidationError(std::string("n_") + name, "real index must be positive");
    if (o->n_imag && !(*o->n_imag >= 0.0))
      throw ValidationError(std::string("n_imag_") + name, "must be non-negative (gain media unsupported)");
  }
}

ModeIndices resolve_indices(const ExperimentConfig& cfg) {
  return {apply_override(cfg.material, cfg.omega_pump(), cfg.pump),
          apply_override(cfg.material, cfg.omega_signal, cfg.signal),
          apply_override(cfg.material, cfg.omega_idler, cfg.idler)};
}

PhaseMatch phase_terms(const ModeKinematics& signal, const ModeKinematics& idler,
                       const ModeKinematics& pump) {
  return {pump.kz - signal.kz - idler.kz, pump.kz + signal.kz + idler.kz};
}

namespace {

cd sinc(cd x) {
  if (std::abs(x) < 1e-4) {
    const cd x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

}  // namespace

double sinc_profile(const PhaseMatch& pm, double length) {
  return std::norm(sinc(pm.delta_k * (0.5 * length))) * std::exp(-pm.sigma_k.imag() * length);
}

constexpr double kDirectWindowLimit = 300.0;

cd phase_window(const PhaseMatch& pm, double length) {
  const cd x = pm.delta_k * (0.5 * length);
  if (std::abs(x.imag()) < kDirectWindowLimit) return sinc(x) * std::exp(kI * pm.sigma_k * (0.5 * length));
  // sin(x) e^{iS} / x = (e^{i(S + x)} - e^{i(S - x)}) / (2 i x), S + x = k_p L;
  // sin(x) alone would overflow.
  const cd upper = (pm.sigma_k + pm.delta_k) * (0.5 * length);
  const cd lower = (pm.sigma_k - pm.delta_k) * (0.5 * length);
  return (std::exp(kI * upper) - std::exp(kI * lower)) / (2.0 * kI * x);
}

cd x_factor(Polarization sigma, Polarization sigma_prime, const FresnelSet& pump,
            const FresnelSet& signal, const FresnelSet& idler, cd sigma_k, double length) {
  if (pump.pol != Polarization::TEM) throw UsageError("x_factor: pump set must be TEM");
  if (signal.pol != sigma || idler.pol != sigma_prime)
    throw UsageError("x_factor: Fresnel sets do not match the requested polarizations");
  return pump.t * signal.t * idler.t * pump.m * signal.m * idler.m *
         (1.0 + pump.r23 * signal.r21 * idler.r21 * std::exp(kI * sigma_k * length));
}

Matrix2cd integrand_typeI(Vec2 kperp, const ExperimentConfig& cfg) {
  return integrand_of_type(kperp, cfg, PdcType::I);
}

Matrix2cd integrand_typeII(Vec2 kperp, const ExperimentConfig& cfg) {
  return integrand_of_type(kperp, cfg, PdcType::II);
}

Matrix2cd reduced_radial(double kappa, const ExperimentConfig& cfg) {
  if (cfg.offset.norm2() != 0.0)
    throw UsageError("reduced_radial: the angular reduction needs zero transverse offset");
  const Integrand integrand(cfg);
  if (!(kappa >= 0.0 && kappa < std::min(integrand.qs(), integrand.qi())))
    throw DomainError("reduced_radial: kappa must lie in [0, min(q_s, q_i))");
  return 2.0 * kappa * integrand.reduced(kappa * kappa);
}

double rate(const Matrix2cd& amplitude) { return amplitude.squaredNorm(); }
double rate(const BiphotonAmplitude& amplitude) { return rate(amplitude.matrix); }

BiphotonAmplitude amplitude_numeric(const ExperimentConfig& cfg, double tol) {
  NumericOptions options;
  options.tol = tol;
  return amplitude_numeric(cfg, options);
}

BiphotonAmplitude amplitude_numeric(const ExperimentConfig& cfg, const NumericOptions& options) {
  if (!(options.tol > 0.0)) throw UsageError("amplitude_numeric: tol must be positive");
  const Integrand in(cfg);
  const bool collinear = cfg.offset.norm2() == 0.0;

  AngularMode angular = options.angular;
  if (angular == AngularMode::automatic) angular = collinear ? AngularMode::reduced : AngularMode::full;
  if (angular == AngularMode::reduced && !collinear)
    throw UsageError("amplitude_numeric: the reduced angular form needs zero transverse offset");
  auto h = [&](cd u) -> Matrix2cd {
    return angular == AngularMode::reduced ? in.reduced(u) : in.angular(u);
  };

  const double U = std::pow(std::min(in.qs(), in.qi()), 2);
  const double width = real_axis_panel_width(in);
  RadialPath path = options.path;
  std::optional<ContourPlan> plan;
  if (path != RadialPath::real_axis) {
    plan = plan_contour(in);
    const bool contour_ok = plan->worst_excess <= kMaxContourGrowth;
    if (path == RadialPath::contour && !contour_ok) {
      std::ostringstream msg;
      msg << "amplitude_numeric: transverse offset grows by e^" << plan->worst_excess
          << " on the deformed contour; use the real-axis path";
      throw UsageError(msg.str());
    }
    if (path == RadialPath::automatic)
      path = (0.5 * kPi / width <= kCheapRealAxisPanels || !contour_ok) ? RadialPath::real_axis
                                                                       : RadialPath::contour;
  }

  QuadratureSpec spec;
  spec.rel_tol = options.tol;
  spec.max_subdivisions = options.max_subdivisions;

  Matrix2cd integral;
  double error = 0.0;
  if (path == RadialPath::real_axis) {
    // u = U sin^2(theta): the k_z, q_z square-root endpoint becomes smooth.
    spec.max_panel_width = width;
    const auto result = integrate_radial(
        [&](double theta) -> Matrix2cd {
          const double s = std::sin(theta);
          const double c = std::cos(theta);
          return h(cd{U * s * s}) * (2.0 * U * s * c);
        },
        0.0, 0.5 * kPi, spec);
    integral = result.value;
    error = result.error;
  } else {
    const auto left = integrate_radial(
        [&](double y) -> Matrix2cd { return h(cd{0.0, -y}) * (-kI); }, 0.0, plan->depth, spec);
    QuadratureSpec right_spec = spec;
    right_spec.abs_floor = options.tol * left.value.norm();
    const auto right = integrate_radial(
        [&](double tau) -> Matrix2cd { return h(cd{U, -tau * tau}) * (2.0 * kI * tau); }, 0.0,
        plan->tau_max, right_spec);
    integral = left.value + right.value;
    error = left.error + right.error;
  }

  const cd pre = in.prefactor();
  BiphotonAmplitude amp;
  amp.matrix = pre * integral;
  amp.rate = rate(amp.matrix);
  amp.error_estimate = std::abs(pre) * error;
  return amp;
}

CollinearState collinear_state(const ExperimentConfig& cfg) {
  cfg.validate();
  CollinearState st;
  st.n = resolve_indices(cfg);
  st.pump = kinematics(cfg.omega_pump(), st.n.pump, Vec2{});
  st.signal = kinematics(cfg.omega_signal, st.n.signal, Vec2{});
  st.idler = kinematics(cfg.omega_idler, st.n.idler, Vec2{});
  st.phase = phase_terms(st.signal, st.idler, st.pump);
  const double L = cfg.length;
  const auto pump = fresnel(Polarization::TEM, st.pump, st.n.pump * st.n.pump, L);
  const auto s_te = fresnel(Polarization::TE, st.signal, st.n.signal * st.n.signal, L);
  const auto i_te = fresnel(Polarization::TE, st.idler, st.n.idler * st.n.idler, L);
  const auto i_tm = fresnel(Polarization::TM, st.idler, st.n.idler * st.n.idler, L);
  st.x_plus = x_factor(Polarization::TE, Polarization::TE, pump, s_te, i_te, st.phase.sigma_k, L);
  st.x_minus = x_factor(Polarization::TE, Polarization::TM, pump, s_te, i_tm, st.phase.sigma_k, L);
  return st;
}

BiphotonAmplitude amplitude_farfield(const ExperimentConfig& cfg) {
  cfg.validate();
  const double ws = cfg.omega_signal;
  if (std::abs(ws - cfg.omega_idler) > 1e-12 * ws)
    throw UsageError("amplitude_farfield: needs degenerate frequencies; use amplitude_numeric");
  if (cfg.offset.norm2() != 0.0)
    throw UsageError("amplitude_farfield: needs zero transverse offset; use amplitude_numeric");
  const auto st = collinear_state(cfg);
  if (st.n.signal != st.n.idler)
    throw UsageError("amplitude_farfield: signal and idler indices differ; use amplitude_numeric");

  const cd n = st.n.signal;
  const cd a_conj = std::conj(noise_factor(n * n));
  const double q = ws / constants::c;
  const double z_sum = cfg.z_signal + cfg.z_idler;
  const bool type_one = cfg.chi2.type == PdcType::I;
  // The stationary point is the k_perp = 0 end of a one-sided u-integral,
  // \int_0^inf du e^{-i u Z / 2q} = 2q / (i Z); hence the overall minus sign.
  const double denominator = (type_one ? 8.0 : 16.0) * kPi * kPi * constants::epsilon0;
  const cd scale = -constants::hbar * cfg.pump_field * cfg.length / denominator * (q * q * q) / (n * n) *
                   cfg.chi2.d * std::exp(kI * (q * (2.0 * cfg.z_pump + z_sum))) / z_sum * a_conj *
                   a_conj * phase_window(st.phase, cfg.length);

  BiphotonAmplitude amp;
  amp.matrix = type_one ? Matrix2cd(scale * st.x_plus * identity2())
                        : Matrix2cd(scale * (st.x_plus + st.x_minus) * exchange2());
  amp.rate = rate(amp.matrix);
  return amp;
}

double noise_gain(const ExperimentConfig& cfg) {
  const auto n = resolve_indices(cfg);
  auto intensity_excess = [](cd eps) {
    const cd delta = noise_factor_excess(eps);
    return 2.0 * delta.real() + std::norm(delta);
  };
  const double gs = intensity_excess(n.signal * n.signal);
  const double gi = intensity_excess(n.idler * n.idler);
  return gs + gi + gs * gi;
}

}  // namespace lossypdc
