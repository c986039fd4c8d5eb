#include "lossypdc/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "lossypdc/errors.hpp"

namespace lossypdc {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;  // of the value
};

enum class Dimension { none, fraction, length, frequency, field, nonlinear };

struct UnitScale {
  std::string_view unit;
  double scale;
};

constexpr std::array kLengthUnits{UnitScale{"", 1.0},     UnitScale{"m", 1.0},   UnitScale{"cm", 1e-2},
                                  UnitScale{"mm", 1e-3},  UnitScale{"um", 1e-6}, UnitScale{"nm", 1e-9}};
constexpr std::array kFrequencyUnits{UnitScale{"", 1.0}, UnitScale{"rad/s", 1.0}, UnitScale{"1/s", 1.0}};
constexpr std::array kFieldUnits{UnitScale{"", 1.0}, UnitScale{"V/m", 1.0}};
constexpr std::array kNonlinearUnits{UnitScale{"", 1.0}, UnitScale{"m/V", 1.0}, UnitScale{"pm/V", 1e-12}};
constexpr std::array kFractionUnits{UnitScale{"", 1.0}, UnitScale{"%", 1e-2}};
constexpr std::array kNoUnits{UnitScale{"", 1.0}};

template <std::size_t N>
std::optional<double> find_scale(const std::array<UnitScale, N>& units, std::string_view unit,
                                 std::string& allowed) {
  for (const auto& u : units) {
    if (!u.unit.empty()) allowed += (allowed.empty() ? "" : ", ") + std::string(u.unit);
    if (u.unit == unit) return u.scale;
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double quantity(const std::string& key, const Entry& e, Dimension dim) {
  const std::string_view text = e.value;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{}) throw ParseError("expected a number for '" + key + "'", e.line, e.column);
  if (!std::isfinite(value)) throw ValidationError(key, "value must be finite");
  const std::string_view unit = trim(text.substr(static_cast<std::size_t>(ptr - text.data())));
  std::string allowed;
  std::optional<double> scale;
  switch (dim) {
    case Dimension::none: scale = find_scale(kNoUnits, unit, allowed); break;
    case Dimension::fraction: scale = find_scale(kFractionUnits, unit, allowed); break;
    case Dimension::length: scale = find_scale(kLengthUnits, unit, allowed); break;
    case Dimension::frequency: scale = find_scale(kFrequencyUnits, unit, allowed); break;
    case Dimension::field: scale = find_scale(kFieldUnits, unit, allowed); break;
    case Dimension::nonlinear: scale = find_scale(kNonlinearUnits, unit, allowed); break;
  }
  if (!scale) {
    std::string msg = "unit '" + std::string(unit) + "' is not valid here";
    msg += allowed.empty() ? " (dimensionless)" : " (expected " + allowed + ")";
    throw ValidationError(key, msg);
  }
  return value * *scale;
}

int integer(const std::string& key, const Entry& e) {
  int value = 0;
  const std::string_view text = e.value;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError("expected an integer for '" + key + "'", e.line, e.column);
  return value;
}

const std::vector<std::string_view>& known_keys() {
  static const std::vector<std::string_view> keys{
      "type",          "material",        "material_file",     "n_pump",          "n_signal",
      "n_idler",       "n_imag",          "n_imag_pump",       "n_imag_signal",   "n_imag_idler",
      "absorption_per_cm", "loss_convention", "length",        "pump_field",      "z_pump",
      "d",             "omega",           "omega_signal",      "omega_idler",     "omega_pump",
      "wavelength",    "z_signal",        "z_idler",           "offset_x",        "offset_y",
      "scan_axis",     "scan_start",      "scan_stop",         "scan_count",      "scan_observables"};
  return keys;
}

std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value'", line_no, static_cast<int>(first) + 1);
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("missing key before '='", line_no, static_cast<int>(eq) + 1);
    for (std::size_t j = 0; j < key.size(); ++j) {
      const char ch = key[j];
      if (!(std::islower(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) ||
            ch == '_'))
        throw ParseError("invalid character in key", line_no, static_cast<int>(first + j) + 1);
    }
    const std::string_view rest = line.substr(eq + 1);
    const auto value_start = rest.find_first_not_of(" \t\r");
    if (value_start == std::string_view::npos)
      throw ParseError("missing value after '='", line_no, static_cast<int>(eq) + 2);
    const std::string k(key);
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw ValidationError(k, "unknown key");
    if (auto it = entries.find(k); it != entries.end())
      throw ValidationError(k, "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
    entries[k] = Entry{std::string(trim(rest)), line_no, static_cast<int>(eq + 1 + value_start) + 1};
  }
  return entries;
}

}  // namespace

std::string_view to_string(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::n_imag: return "n_imag";
    case ScanAxis::crystal_length: return "crystal_length";
    case ScanAxis::delta_k: return "delta_k";
    case ScanAxis::frequency: return "frequency";
  }
  return "?";
}

std::string_view to_string(Observable observable) {
  switch (observable) {
    case Observable::rate_I: return "rate_I";
    case Observable::rate_II: return "rate_II";
    case Observable::rate_ratio_to_lossless: return "rate_ratio_to_lossless";
    case Observable::sinc_profile: return "sinc_profile";
    case Observable::a_factor_gain: return "a_factor_gain";
    case Observable::amplitude_matrix: return "amplitude_matrix";
  }
  return "?";
}

ScanAxis parse_axis(std::string_view text) {
  for (auto axis : {ScanAxis::n_imag, ScanAxis::crystal_length, ScanAxis::delta_k, ScanAxis::frequency})
    if (to_string(axis) == text) return axis;
  throw ValidationError("scan_axis", "unknown axis '" + std::string(text) +
                                         "' (expected n_imag, crystal_length, delta_k or frequency)");
}

Observable parse_observable(std::string_view text) {
  for (auto o : {Observable::rate_I, Observable::rate_II, Observable::rate_ratio_to_lossless,
                 Observable::sinc_profile, Observable::a_factor_gain, Observable::amplitude_matrix})
    if (to_string(o) == text) return o;
  throw ValidationError("scan_observables", "unknown observable '" + std::string(text) + "'");
}

ParsedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const auto entries = tokenize(text);
  auto has = [&](const char* key) { return entries.count(key) != 0; };
  auto get = [&](const char* key, Dimension dim) { return quantity(key, entries.at(key), dim); };

  ParsedConfig out;
  ExperimentConfig& cfg = out.experiment;

  if (has("type")) {
    const auto& v = entries.at("type").value;
    if (v == "I") cfg.chi2.type = PdcType::I;
    else if (v == "II") cfg.chi2.type = PdcType::II;
    else throw ValidationError("type", "expected I or II, got '" + v + "'");
  }

  if (has("material") && has("material_file"))
    throw ValidationError("material_file", "conflicts with 'material'");
  if (has("material")) {
    try {
      cfg.material = MaterialDispersion::builtin(entries.at("material").value);
    } catch (const UsageError& e) {
      throw ValidationError("material", e.what());
    }
  }
  if (has("material_file")) {
    const std::filesystem::path p = base_dir / entries.at("material_file").value;
    try {
      cfg.material = MaterialDispersion::load_table(p);
    } catch (const UsageError& e) {
      throw ValidationError("material_file", e.what());
    }
  }

  if (has("length")) cfg.length = get("length", Dimension::length);
  if (has("pump_field")) cfg.pump_field = get("pump_field", Dimension::field);
  if (has("z_pump")) cfg.z_pump = get("z_pump", Dimension::length);
  if (has("d")) cfg.chi2.d = get("d", Dimension::nonlinear);
  if (has("z_signal")) cfg.z_signal = get("z_signal", Dimension::length);
  if (has("z_idler")) cfg.z_idler = get("z_idler", Dimension::length);
  if (has("offset_x")) cfg.offset.x = get("offset_x", Dimension::length);
  if (has("offset_y")) cfg.offset.y = get("offset_y", Dimension::length);

  // Frequencies: the pump frequency is always the sum of signal and idler.
  if (has("omega") && has("wavelength")) throw ValidationError("wavelength", "conflicts with 'omega'");
  const bool degenerate = has("omega") || has("wavelength");
  if (degenerate && (has("omega_signal") || has("omega_idler") || has("omega_pump")))
    throw ValidationError(has("omega") ? "omega" : "wavelength",
                          "conflicts with omega_signal / omega_idler / omega_pump");
  if (has("omega")) {
    cfg.omega_signal = cfg.omega_idler = get("omega", Dimension::frequency);
  } else if (has("wavelength")) {
    const double lambda = get("wavelength", Dimension::length);
    if (!(lambda > 0.0)) throw ValidationError("wavelength", "must be positive");
    cfg.omega_signal = cfg.omega_idler = 2.0 * kPi * constants::c / lambda;
  } else {
    const bool has_s = has("omega_signal");
    const bool has_i = has("omega_idler");
    const bool has_p = has("omega_pump");
    const double ws = has_s ? get("omega_signal", Dimension::frequency) : 0.0;
    const double wi = has_i ? get("omega_idler", Dimension::frequency) : 0.0;
    const double wp = has_p ? get("omega_pump", Dimension::frequency) : 0.0;
    if (has_s && has_i) {
      if (has_p && std::abs(wp - (ws + wi)) > 1e-12 * wp)
        throw ValidationError("omega_pump", "must equal omega_signal + omega_idler");
      cfg.omega_signal = ws;
      cfg.omega_idler = wi;
    } else if (has_p && (has_s || has_i)) {
      cfg.omega_signal = has_s ? ws : wp - wi;
      cfg.omega_idler = has_i ? wi : wp - ws;
    } else if (has_p) {
      cfg.omega_signal = cfg.omega_idler = 0.5 * wp;
    } else if (has_s || has_i) {
      throw ValidationError(has_s ? "omega_signal" : "omega_idler",
                            "give both omega_signal and omega_idler, or one of them with omega_pump");
    }
  }

  if (has("n_pump")) cfg.pump.n_real = get("n_pump", Dimension::none);
  if (has("n_signal")) cfg.signal.n_real = get("n_signal", Dimension::none);
  if (has("n_idler")) cfg.idler.n_real = get("n_idler", Dimension::none);

  if (has("loss_convention")) {
    const auto& v = entries.at("loss_convention").value;
    if (v == "intensity") out.loss_convention = LossConvention::intensity;
    else if (v == "amplitude") out.loss_convention = LossConvention::amplitude;
    else throw ValidationError("loss_convention", "expected intensity or amplitude, got '" + v + "'");
  }
  const bool explicit_imag =
      has("n_imag") || has("n_imag_pump") || has("n_imag_signal") || has("n_imag_idler");
  if (has("absorption_per_cm")) {
    if (explicit_imag) throw ValidationError("absorption_per_cm", "conflicts with n_imag keys");
    const double x = get("absorption_per_cm", Dimension::fraction);
    if (!(x >= 0.0 && x < 1.0)) throw ValidationError("absorption_per_cm", "must lie in [0, 1)");
    if (!(cfg.omega_signal > 0.0)) throw ValidationError("omega_signal", "must be positive");
    const double n_imag = n_imag_from_loss(x, cfg.omega_signal, out.loss_convention);
    cfg.pump.n_imag = cfg.signal.n_imag = cfg.idler.n_imag = n_imag;
  } else if (has("loss_convention")) {
    throw ValidationError("loss_convention", "only meaningful with absorption_per_cm");
  }
  if (has("n_imag")) cfg.pump.n_imag = cfg.signal.n_imag = cfg.idler.n_imag = get("n_imag", Dimension::none);
  if (has("n_imag_pump")) cfg.pump.n_imag = get("n_imag_pump", Dimension::none);
  if (has("n_imag_signal")) cfg.signal.n_imag = get("n_imag_signal", Dimension::none);
  if (has("n_imag_idler")) cfg.idler.n_imag = get("n_imag_idler", Dimension::none);

  if (has("scan_axis")) out.scan.axis = parse_axis(entries.at("scan_axis").value);
  Dimension axis_dim = Dimension::none;
  if (out.scan.axis == ScanAxis::crystal_length) axis_dim = Dimension::length;
  if (out.scan.axis == ScanAxis::frequency) axis_dim = Dimension::frequency;
  if (has("scan_start")) out.scan.start = get("scan_start", axis_dim);
  if (has("scan_stop")) out.scan.stop = get("scan_stop", axis_dim);
  if (has("scan_count")) out.scan.count = integer("scan_count", entries.at("scan_count"));
  if (has("scan_observables")) {
    std::string_view list = entries.at("scan_observables").value;
    while (!list.empty()) {
      const auto comma = list.find(',');
      const auto item = trim(list.substr(0, comma));
      if (item.empty()) throw ValidationError("scan_observables", "empty entry in list");
      out.scan.observables.push_back(parse_observable(item));
      list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
    }
  }

  cfg.validate();
  try {
    resolve_indices(cfg);
  } catch (const RangeError& e) {
    throw ValidationError("omega", e.what());
  }
  return out;
}

ExperimentConfig load_config(std::string_view text) { return parse_config(text).experiment; }

ParsedConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

}  // namespace lossypdc
