#include <optional>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lossypdc/config.hpp"
#include "lossypdc/errors.hpp"
#include "lossypdc/scan.hpp"

namespace py = pybind11;
using namespace lossypdc;

namespace {

IndexOverride& mode_override(ExperimentConfig& cfg, const std::string& mode) {
  if (mode == "pump") return cfg.pump;
  if (mode == "signal") return cfg.signal;
  if (mode == "idler") return cfg.idler;
  throw UsageError("mode must be pump, signal or idler, not '" + mode + "'");
}

py::dict metadata_dict(const ScanResult& res) {
  py::dict out;
  for (const auto& [key, value] : res.metadata)
    std::visit([&](const auto& v) { out[py::str(key)] = v; }, value);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Biphoton amplitudes and coincidence rates of lossy down-conversion";
  m.attr("__version__") = std::string(kVersion);

  // Translators run newest first, so the base class is registered first.
  auto& base_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base_error.ptr());

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_property(
          "type", [](const ExperimentConfig& c) { return std::string(to_string(c.chi2.type)); },
          [](ExperimentConfig& c, const std::string& t) {
            if (t == "I") c.chi2.type = PdcType::I;
            else if (t == "II") c.chi2.type = PdcType::II;
            else throw UsageError("type must be 'I' or 'II'");
          })
      .def_property_readonly("material", [](const ExperimentConfig& c) { return c.material.name(); })
      .def_readwrite("length", &ExperimentConfig::length)
      .def_readwrite("pump_field", &ExperimentConfig::pump_field)
      .def_readwrite("z_pump", &ExperimentConfig::z_pump)
      .def_property(
          "d", [](const ExperimentConfig& c) { return c.chi2.d; },
          [](ExperimentConfig& c, double d) { c.chi2.d = d; })
      .def_readwrite("omega_signal", &ExperimentConfig::omega_signal)
      .def_readwrite("omega_idler", &ExperimentConfig::omega_idler)
      .def_property_readonly("omega_pump", &ExperimentConfig::omega_pump)
      .def_readwrite("z_signal", &ExperimentConfig::z_signal)
      .def_readwrite("z_idler", &ExperimentConfig::z_idler)
      .def_property(
          "offset", [](const ExperimentConfig& c) { return py::make_tuple(c.offset.x, c.offset.y); },
          [](ExperimentConfig& c, std::pair<double, double> xy) { c.offset = {xy.first, xy.second}; })
      .def(
          "set_index",
          [](ExperimentConfig& c, const std::string& mode, std::optional<double> n_real,
             std::optional<double> n_imag) { mode_override(c, mode) = {n_real, n_imag}; },
          py::arg("mode"), py::arg("n_real") = py::none(), py::arg("n_imag") = py::none(),
          "Override the real and/or imaginary index of 'pump', 'signal' or 'idler'.")
      .def("indices",
           [](const ExperimentConfig& c) {
             const auto n = resolve_indices(c);
             py::dict out;
             out["pump"] = n.pump;
             out["signal"] = n.signal;
             out["idler"] = n.idler;
             return out;
           })
      .def("validate", &ExperimentConfig::validate);

  m.def("load_config", &load_config, py::arg("text"), "Parse `key = value` configuration text.");

  m.def(
      "amplitude",
      [](const ExperimentConfig& cfg, const std::string& method, double tol) -> Matrix2cd {
        if (parse_method(method) == Method::farfield) return amplitude_farfield(cfg).matrix;
        return amplitude_numeric(cfg, tol).matrix;
      },
      py::arg("config"), py::arg("method") = "farfield", py::arg("tol") = 1e-6,
      "2x2 biphoton amplitude matrix.");
  m.def("rate", py::overload_cast<const Matrix2cd&>(&rate), py::arg("amplitude"));
  m.def("noise_gain", &noise_gain, py::arg("config"));

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("columns", &ScanResult::columns)
      .def_readonly("rows", &ScanResult::rows)
      .def_property_readonly("metadata", &metadata_dict);

  m.def("preset_names", [] {
    std::vector<std::string> out;
    for (const auto n : preset_names()) out.emplace_back(n);
    return out;
  });
  m.def(
      "run_preset",
      [](const std::string& name, const std::string& method, double tol) {
        py::gil_scoped_release release;
        return run_preset(name, parse_method(method), tol);
      },
      py::arg("name"), py::arg("method") = "farfield", py::arg("tol") = 1e-6);
  m.def(
      "emit", [](const ScanResult& res, const std::string& format) { return emit(res, parse_format(format)); },
      py::arg("result"), py::arg("format") = "csv");
}
