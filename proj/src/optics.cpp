#include "lossypdc/optics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lossypdc/errors.hpp"

namespace lossypdc {

double omega_from_wavelength_nm(double lambda_nm) {
  return 2.0 * kPi * constants::c / (lambda_nm * 1e-9);
}

MaterialDispersion MaterialDispersion::vacuum() { return MaterialDispersion{}; }

MaterialDispersion MaterialDispersion::bbo_ordinary() {
  return from_samples("bbo_ordinary", {
                                          {omega_from_wavelength_nm(1064.0), 1.65, 0.0},
                                          {omega_from_wavelength_nm(532.0), 1.67, 0.0},
                                          {omega_from_wavelength_nm(266.0), 1.75, 0.0},
                                      });
}

MaterialDispersion MaterialDispersion::builtin(std::string_view name) {
  if (name == "bbo_ordinary") return bbo_ordinary();
  if (name == "vacuum") return vacuum();
  throw UsageError("unknown builtin material '" + std::string(name) +
                   "' (expected bbo_ordinary or vacuum)");
}

MaterialDispersion MaterialDispersion::from_samples(std::string name,
                                                    std::vector<DispersionSample> samples) {
  if (samples.empty()) throw UsageError("material '" + name + "' has no samples");
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.omega < b.omega; });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.omega > 0.0) || !std::isfinite(s.omega))
      throw UsageError("material '" + name + "': non-positive sample frequency");
    if (!(s.n_real > 0.0)) throw UsageError("material '" + name + "': n' must be positive");
    if (!(s.n_imag >= 0.0))
      throw UsageError("material '" + name + "': n'' must be non-negative (gain media unsupported)");
    if (i > 0 && !(samples[i - 1].omega < s.omega))
      throw UsageError("material '" + name + "': duplicate sample frequency");
  }
  MaterialDispersion m;
  m.name_ = std::move(name);
  m.samples_ = std::move(samples);
  return m;
}

namespace {

// Parses the next whitespace-delimited number; column is 1-based.
double take_number(std::string_view line, std::size_t& pos, int line_no) {
  while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  if (pos >= line.size())
    throw ParseError("expected three columns: lambda_nm n_real n_imag", line_no,
                     static_cast<int>(pos) + 1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
  if (ec != std::errc{}) throw ParseError("not a number", line_no, static_cast<int>(pos) + 1);
  pos = static_cast<std::size_t>(ptr - line.data());
  return value;
}

}  // namespace

MaterialDispersion MaterialDispersion::parse_table(std::string_view text, std::string name) {
  std::vector<DispersionSample> samples;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    std::size_t pos = 0;
    const double lambda = take_number(line, pos, line_no);
    const double n_real = take_number(line, pos, line_no);
    const double n_imag = take_number(line, pos, line_no);
    if (line.find_first_not_of(" \t\r", pos) != std::string_view::npos)
      throw ParseError("unexpected trailing text", line_no, static_cast<int>(pos) + 1);
    if (!(lambda > 0.0)) throw ParseError("wavelength must be positive", line_no, 1);
    samples.push_back({omega_from_wavelength_nm(lambda), n_real, n_imag});
    if (end == text.size()) break;
  }
  return from_samples(std::move(name), std::move(samples));
}

MaterialDispersion MaterialDispersion::load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open material table " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_table(buffer.str(), path.string());
}

std::pair<double, double> MaterialDispersion::omega_range() const {
  if (is_vacuum()) return {0.0, std::numeric_limits<double>::infinity()};
  return {samples_.front().omega, samples_.back().omega};
}

cd MaterialDispersion::index(double omega) const {
  if (is_vacuum()) return {1.0, 0.0};
  const auto [lo, hi] = omega_range();
  if (!(omega >= lo && omega <= hi)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "material '" << name_ << "': omega = " << omega << " rad/s outside sampled interval ["
        << lo << ", " << hi << "] rad/s";
    throw RangeError(msg.str());
  }
  auto upper = std::lower_bound(samples_.begin(), samples_.end(), omega,
                                [](const DispersionSample& s, double w) { return s.omega < w; });
  if (upper->omega == omega) return {upper->n_real, upper->n_imag};
  auto lower = upper - 1;
  const double t = (omega - lower->omega) / (upper->omega - lower->omega);
  return {lower->n_real + t * (upper->n_real - lower->n_real),
          lower->n_imag + t * (upper->n_imag - lower->n_imag)};
}

std::string_view to_string(Polarization pol) {
  switch (pol) {
    case Polarization::TE: return "TE";
    case Polarization::TM: return "TM";
    case Polarization::TEM: return "TEM";
  }
  return "?";
}

cd longitudinal_root(cd radicand) {
  cd root = std::sqrt(radicand);
  if (root.imag() < 0.0) root = -root;
  if (root.imag() == 0.0 && root.real() < 0.0) root = -root;
  return root;
}

ModeKinematics kinematics(double omega, cd n, Vec2 kperp) {
  if (!(omega > 0.0)) throw UsageError("kinematics: omega must be positive");
  ModeKinematics kin;
  kin.omega = omega;
  kin.n = n;
  kin.k = n * omega / constants::c;
  kin.q = omega / constants::c;
  kin.kperp = kperp;
  const double kp2 = kperp.norm2();
  if (kp2 == 0.0) {
    kin.kz = kin.k;
    kin.qz = kin.q;
  } else {
    kin.kz = longitudinal_root(kin.k * kin.k - kp2);
    kin.qz = longitudinal_root(cd{kin.q * kin.q - kp2, 0.0});
  }
  return kin;
}

FresnelSet interface_coefficients(Polarization pol, cd kz, cd qz, cd eps, cd n, double length) {
  FresnelSet f;
  f.pol = pol;
  switch (pol) {
    case Polarization::TE:
      f.r21 = (kz - qz) / (kz + qz);
      f.t = 2.0 * kz / (kz + qz);
      break;
    case Polarization::TM:
      f.r21 = (kz - eps * qz) / (kz + eps * qz);
      f.t = 2.0 * n * kz / (kz + eps * qz);
      break;
    case Polarization::TEM:
      throw UsageError("interface_coefficients: TEM is a normal-incidence set, use fresnel()");
  }
  f.r23 = f.r21;
  f.m = 1.0 / (1.0 - f.r21 * f.r23 * std::exp(2.0 * kI * kz * length));
  return f;
}

FresnelSet fresnel(Polarization pol, const ModeKinematics& kin, cd eps, double length) {
  if (pol != Polarization::TEM) return interface_coefficients(pol, kin.kz, kin.qz, eps, kin.n, length);
  if (kin.kperp.norm2() != 0.0)
    throw UsageError("fresnel: TEM coefficients require k_perp = 0");
  FresnelSet f;
  f.pol = pol;
  f.r21 = (kin.n - 1.0) / (kin.n + 1.0);
  f.r23 = f.r21;
  f.t = 2.0 / (kin.n + 1.0);
  f.m = 1.0 / (1.0 - f.r21 * f.r23 * std::exp(2.0 * kI * kin.k * length));
  return f;
}

cd local_field(cd eps) {
  if (eps == cd{0.0, 0.0}) throw SingularityError("local_field: eps = 0");
  return 2.0 / (9.0 * constants::epsilon0) * (eps - 1.0) / eps;
}

cd noise_factor(cd eps) {
  return 1.0 - 2.0 * kI * constants::epsilon0 * eps.imag() * local_field(eps);
}

cd noise_factor_excess(cd eps) {
  if (eps == cd{0.0, 0.0}) throw SingularityError("noise_factor: eps = 0");
  return -(4.0 / 9.0) * kI * eps.imag() * (eps - 1.0) / eps;
}

double noise_rate_gain(cd eps) {
  // |A|^2 - 1 = 2 Re(A - 1) + |A - 1|^2.
  const cd delta = noise_factor_excess(eps);
  const double g = 2.0 * delta.real() + std::norm(delta);
  return g * (2.0 + g);
}

double n_imag_from_loss(double fraction, double omega, LossConvention convention,
                        double reference_length) {
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw UsageError("absorption fraction must lie in [0, 1)");
  if (!(omega > 0.0) || !(reference_length > 0.0))
    throw UsageError("n_imag_from_loss: omega and reference length must be positive");
  const double decay = -std::log1p(-fraction) * constants::c / (omega * reference_length);
  return convention == LossConvention::intensity ? decay / 2.0 : decay;
}

}  // namespace lossypdc
