#include "lossypdc/scan.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "lossypdc/errors.hpp"

namespace lossypdc {

std::string_view to_string(Method method) {
  return method == Method::farfield ? "farfield" : "numeric";
}

Method parse_method(std::string_view text) {
  if (text == "farfield") return Method::farfield;
  if (text == "numeric") return Method::numeric;
  throw UsageError("unknown method '" + std::string(text) + "' (expected farfield or numeric)");
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw UsageError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

namespace {

std::vector<std::string> columns_of(Observable o) {
  switch (o) {
    case Observable::rate_I: return {"rate_I"};
    case Observable::rate_II: return {"rate_II"};
    case Observable::rate_ratio_to_lossless: return {"rate_ratio_I", "rate_ratio_II"};
    case Observable::sinc_profile: return {"sinc_profile"};
    case Observable::a_factor_gain: return {"a_factor_gain"};
    case Observable::amplitude_matrix:
      return {"A_xx_re", "A_xx_im", "A_xy_re", "A_xy_im", "A_yx_re", "A_yx_im", "A_yy_re", "A_yy_im"};
  }
  return {};
}

std::string_view axis_column(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::n_imag: return "n_imag";
    case ScanAxis::crystal_length: return "crystal_length";
    case ScanAxis::delta_k: return "delta_k_half_length";
    case ScanAxis::frequency: return "omega";
  }
  return "?";
}

Matrix2cd amplitude_of(const ExperimentConfig& cfg, Method method, double tol) {
  if (method == Method::farfield) return amplitude_farfield(cfg).matrix;
  return amplitude_numeric(cfg, tol).matrix;
}

ExperimentConfig with_type(ExperimentConfig cfg, PdcType type) {
  cfg.chi2.type = type;
  return cfg;
}

ExperimentConfig lossless(ExperimentConfig cfg) {
  cfg.pump.n_imag = cfg.signal.n_imag = cfg.idler.n_imag = 0.0;
  return cfg;
}

void evaluate_row(const ScanRequest& req, double value, std::vector<double>& row) {
  const ExperimentConfig cfg = config_at(req, value);
  for (const Observable o : req.observables) {
    switch (o) {
      case Observable::rate_I:
        row.push_back(rate(amplitude_of(with_type(cfg, PdcType::I), req.method, req.tol)));
        break;
      case Observable::rate_II:
        row.push_back(rate(amplitude_of(with_type(cfg, PdcType::II), req.method, req.tol)));
        break;
      case Observable::rate_ratio_to_lossless:
        for (const PdcType type : {PdcType::I, PdcType::II}) {
          const ExperimentConfig typed = with_type(cfg, type);
          row.push_back(rate(amplitude_of(typed, req.method, req.tol)) /
                        rate(amplitude_of(lossless(typed), req.method, req.tol)));
        }
        break;
      case Observable::sinc_profile: {
        PhaseMatch pm = collinear_state(cfg).phase;
        if (req.axis == ScanAxis::delta_k) pm.delta_k = cd{2.0 * value / cfg.length, pm.delta_k.imag()};
        row.push_back(sinc_profile(pm, cfg.length));
        break;
      }
      case Observable::a_factor_gain: row.push_back(noise_gain(cfg)); break;
      case Observable::amplitude_matrix: {
        const Matrix2cd a = amplitude_of(cfg, req.method, req.tol);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) {
            row.push_back(a(r, c).real());
            row.push_back(a(r, c).imag());
          }
        break;
      }
    }
  }
}

std::string strip_key(const ValidationError& e) {
  const std::string what = e.what();
  const std::string prefix = e.key() + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& where) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where + ": " + e.what(), e.estimate_magnitude(), e.error_estimate());
  } catch (const ValidationError& e) {
    throw ValidationError(e.key(), where + ": " + strip_key(e));
  } catch (const RangeError& e) {
    throw RangeError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  } catch (const SingularityError& e) {
    throw SingularityError(where + ": " + e.what());
  } catch (const UsageError& e) {
    throw UsageError(where + ": " + e.what());
  }
}

void add_config_metadata(const ExperimentConfig& cfg, ScanResult& res) {
  auto& m = res.metadata;
  const ModeIndices n = resolve_indices(cfg);
  m.emplace_back("type", std::string(to_string(cfg.chi2.type)));
  m.emplace_back("material", cfg.material.name());
  m.emplace_back("length", cfg.length);
  m.emplace_back("pump_field", cfg.pump_field);
  m.emplace_back("z_pump", cfg.z_pump);
  m.emplace_back("d", cfg.chi2.d);
  m.emplace_back("omega_signal", cfg.omega_signal);
  m.emplace_back("omega_idler", cfg.omega_idler);
  m.emplace_back("omega_pump", cfg.omega_pump());
  m.emplace_back("n_pump_re", n.pump.real());
  m.emplace_back("n_pump_im", n.pump.imag());
  m.emplace_back("n_signal_re", n.signal.real());
  m.emplace_back("n_signal_im", n.signal.imag());
  m.emplace_back("n_idler_re", n.idler.real());
  m.emplace_back("n_idler_im", n.idler.imag());
  m.emplace_back("z_signal", cfg.z_signal);
  m.emplace_back("z_idler", cfg.z_idler);
  m.emplace_back("offset_x", cfg.offset.x);
  m.emplace_back("offset_y", cfg.offset.y);
}

}  // namespace

void ScanRequest::validate() const {
  base.validate();
  if (count < 2) throw ValidationError("scan_count", "must be at least 2");
  if (!(std::isfinite(start) && std::isfinite(stop) && start < stop))
    throw ValidationError("scan_start", "requires finite start < stop");
  if (observables.empty()) throw ValidationError("scan_observables", "at least one observable required");
  if (!(tol > 0.0)) throw ValidationError("tol", "must be positive");
  switch (axis) {
    case ScanAxis::n_imag:
      if (start < 0.0) throw ValidationError("scan_start", "n_imag must be non-negative");
      break;
    case ScanAxis::crystal_length:
      if (!(start > 0.0)) throw ValidationError("scan_start", "crystal length must be positive");
      break;
    case ScanAxis::frequency:
      if (!(start > 0.0)) throw ValidationError("scan_start", "frequency must be positive");
      break;
    case ScanAxis::delta_k:
      for (const Observable o : observables)
        if (o != Observable::sinc_profile)
          throw ValidationError("scan_observables",
                                "the delta_k axis only supports sinc_profile, not " +
                                    std::string(to_string(o)));
      break;
  }
}

double axis_value(const ScanRequest& req, int j) {
  if (j == req.count - 1) return req.stop;
  return req.start + (req.stop - req.start) * static_cast<double>(j) / static_cast<double>(req.count - 1);
}

ExperimentConfig config_at(const ScanRequest& req, double value) {
  ExperimentConfig cfg = req.base;
  switch (req.axis) {
    case ScanAxis::n_imag: cfg.pump.n_imag = cfg.signal.n_imag = cfg.idler.n_imag = value; break;
    case ScanAxis::crystal_length: cfg.length = value; break;
    case ScanAxis::frequency: cfg.omega_signal = cfg.omega_idler = value; break;
    case ScanAxis::delta_k: break;
  }
  return cfg;
}

ScanResult run_scan(const ScanRequest& req) {
  req.validate();
  ScanResult res;
  res.columns.emplace_back(axis_column(req.axis));
  for (const Observable o : req.observables)
    for (auto& c : columns_of(o)) res.columns.push_back(std::move(c));

  const auto n = static_cast<std::size_t>(req.count);
  res.rows.assign(n, {});
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < n; j = next++) {
      try {
        const double value = axis_value(req, static_cast<int>(j));
        std::vector<double> row{value};
        evaluate_row(req, value, row);
        res.rows[j] = std::move(row);
        ++completed;
      } catch (...) {
        errors[j] = std::current_exception();
        next = n;  // stop handing out work
      }
    }
  };
  unsigned threads = req.threads ? req.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (errors[j]) {
      std::ostringstream where;
      where << "scan point " << j << " (" << axis_column(req.axis) << " = "
            << format_double(axis_value(req, static_cast<int>(j))) << "), " << completed.load() << " of "
            << n << " points completed";
      rethrow_with_context(errors[j], where.str());
    }
  }

  auto& m = res.metadata;
  m.emplace_back("tool_version", std::string(kVersion));
  m.emplace_back("axis", std::string(to_string(req.axis)));
  m.emplace_back("scan_start", req.start);
  m.emplace_back("scan_stop", req.stop);
  m.emplace_back("scan_count", static_cast<double>(req.count));
  m.emplace_back("method", std::string(to_string(req.method)));
  m.emplace_back("tol", req.tol);
  add_config_metadata(req.base, res);
  return res;
}

ScanResult evaluate_point(const ExperimentConfig& cfg, Method method, double tol) {
  ScanResult res;
  res.columns = {"rate"};
  for (auto& c : columns_of(Observable::amplitude_matrix)) res.columns.push_back(std::move(c));
  const Matrix2cd a = amplitude_of(cfg, method, tol);
  std::vector<double> row{rate(a)};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      row.push_back(a(r, c).real());
      row.push_back(a(r, c).imag());
    }
  res.rows.push_back(std::move(row));
  res.metadata.emplace_back("tool_version", std::string(kVersion));
  res.metadata.emplace_back("method", std::string(to_string(method)));
  res.metadata.emplace_back("tol", tol);
  add_config_metadata(cfg, res);
  return res;
}

std::vector<std::string_view> preset_names() { return {"fig3", "fig4", "fig5", "fig6"}; }

namespace {

// Captioned parameters shared by the figures: Re n(2w) = 1.75, Re n(w) = 1.67,
// w = 3.54e15 rad/s, L = 2 mm, degenerate and collinear.
ExperimentConfig figure_base() {
  ExperimentConfig cfg;
  cfg.material = MaterialDispersion::bbo_ordinary();
  cfg.pump.n_real = 1.75;
  cfg.signal.n_real = 1.67;
  cfg.idler.n_real = 1.67;
  cfg.pump.n_imag = cfg.signal.n_imag = cfg.idler.n_imag = 0.0;
  cfg.omega_signal = cfg.omega_idler = 3.54e15;
  cfg.length = 2e-3;
  return cfg;
}

// Imaginary parts of the three sinc-profile variants (pump, signal/idler).
struct ProfileVariant {
  std::string_view suffix;
  double n_imag_pump;
  double n_imag_down;
};
constexpr std::array kProfileVariants{ProfileVariant{"lossless", 0.0, 0.0},
                                      ProfileVariant{"unequal", 2e-5, 0.0},
                                      ProfileVariant{"equal", 1e-5, 1e-5}};

}  // namespace

ScanRequest preset_request(std::string_view name) {
  ScanRequest req;
  req.base = figure_base();
  if (name == "fig3") {
    req.axis = ScanAxis::delta_k;
    req.start = 0.0;
    req.stop = 4.0 * kPi;
    req.count = 401;
    req.observables = {Observable::sinc_profile};
  } else if (name == "fig4") {
    req.axis = ScanAxis::n_imag;
    req.start = 0.0;
    req.stop = 1e-3;
    req.count = 101;
    req.observables = {Observable::a_factor_gain};
  } else if (name == "fig5") {
    req.axis = ScanAxis::n_imag;
    req.start = 0.0;
    req.stop = 1e-5;
    req.count = 20;
    req.observables = {Observable::rate_ratio_to_lossless};
  } else if (name == "fig6") {
    req.base.pump.n_imag = req.base.signal.n_imag = req.base.idler.n_imag = 1e-6;
    req.axis = ScanAxis::crystal_length;
    req.start = 1.9e-3;
    req.stop = 2.1e-3;
    req.count = 400;
    req.observables = {Observable::rate_I, Observable::rate_II};
  } else {
    throw UsageError("unknown preset '" + std::string(name) + "' (expected fig3, fig4, fig5 or fig6)");
  }
  return req;
}

ScanResult run_preset(std::string_view name, Method method, double tol) {
  ScanRequest req = preset_request(name);
  req.method = method;
  req.tol = tol;
  if (name != "fig3") {
    ScanResult res = run_scan(req);
    res.metadata.insert(res.metadata.begin(), {"preset", std::string(name)});
    return res;
  }

  ScanResult merged;
  for (const auto& variant : kProfileVariants) {
    ScanRequest v = req;
    v.base.pump.n_imag = variant.n_imag_pump;
    v.base.signal.n_imag = v.base.idler.n_imag = variant.n_imag_down;
    ScanResult part = run_scan(v);
    if (merged.rows.empty()) {
      merged.columns.push_back(part.columns.front());
      merged.rows.assign(part.rows.size(), {});
      for (std::size_t j = 0; j < part.rows.size(); ++j) merged.rows[j].push_back(part.rows[j].front());
      merged.metadata = part.metadata;
    }
    merged.columns.push_back("sinc_profile_" + std::string(variant.suffix));
    for (std::size_t j = 0; j < part.rows.size(); ++j) merged.rows[j].push_back(part.rows[j][1]);
    merged.metadata.emplace_back("n_imag_pump_" + std::string(variant.suffix), variant.n_imag_pump);
    merged.metadata.emplace_back("n_imag_signal_idler_" + std::string(variant.suffix), variant.n_imag_down);
  }
  merged.metadata.insert(merged.metadata.begin(), {"preset", std::string(name)});
  return merged;
}

ScanRequest scan_request(const ParsedConfig& parsed, Method method, double tol) {
  const auto& s = parsed.scan;
  if (!s.axis) throw ValidationError("scan_axis", "required for a scan");
  if (!s.start) throw ValidationError("scan_start", "required for a scan");
  if (!s.stop) throw ValidationError("scan_stop", "required for a scan");
  if (!s.count) throw ValidationError("scan_count", "required for a scan");
  if (s.observables.empty()) throw ValidationError("scan_observables", "required for a scan");
  ScanRequest req;
  req.base = parsed.experiment;
  req.axis = *s.axis;
  req.start = *s.start;
  req.stop = *s.stop;
  req.count = *s.count;
  req.observables = s.observables;
  req.method = method;
  req.tol = tol;
  req.validate();
  return req;
}

void emit(const ScanResult& result, Format format, std::ostream& out) {
  if (format == Format::csv) {
    for (std::size_t c = 0; c < result.columns.size(); ++c) out << (c ? "," : "") << result.columns[c];
    out << '\n';
    for (const auto& row : result.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : result.metadata)
    std::visit([&](const auto& v) { meta[key] = v; }, value);
  doc["metadata"] = meta;
  doc["columns"] = result.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : result.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) r[result.columns[c]] = row[c];
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

std::string emit(const ScanResult& result, Format format) {
  std::ostringstream out;
  emit(result, format, out);
  return out.str();
}

}  // namespace lossypdc
