#pragma once

// Parameter sweeps, the figure presets and CSV / JSON output.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lossypdc/config.hpp"

namespace lossypdc {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum class Method { farfield, numeric };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);  // UsageError

struct ScanRequest {
  ExperimentConfig base;
  ScanAxis axis = ScanAxis::n_imag;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;
  std::vector<Observable> observables;
  Method method = Method::farfield;
  double tol = 1e-6;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;

  /// Throws ValidationError for invalid ranges or axis / observable pairs.
  void validate() const;
};

using MetaValue = std::variant<double, std::string>;

struct ScanResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, MetaValue>> metadata;
};

/// Axis point j of a request (linear spacing, both ends included).
double axis_value(const ScanRequest& req, int j);

/// The configuration evaluated at an axis value. For the delta_k axis the
/// configuration is unchanged (the axis only enters sinc_profile).
ExperimentConfig config_at(const ScanRequest& req, double value);

/// Evaluates every axis point, in parallel across points; rows are ordered by
/// axis index. An evaluation error aborts the scan and is rethrown with the
/// failing axis point in its message.
ScanResult run_scan(const ScanRequest& req);

/// Single configuration: rate and the amplitude matrix.
ScanResult evaluate_point(const ExperimentConfig& cfg, Method method, double tol);

/// Figure presets "fig3" .. "fig6" with the captioned parameters.
std::vector<std::string_view> preset_names();
ScanRequest preset_request(std::string_view name);
ScanResult run_preset(std::string_view name, Method method = Method::farfield, double tol = 1e-6);

/// Request from the scan keys of a parsed config (ValidationError if any is
/// missing).
ScanRequest scan_request(const ParsedConfig& parsed, Method method, double tol);

enum class Format { csv, json };

Format parse_format(std::string_view text);  // UsageError
void emit(const ScanResult& result, Format format, std::ostream& out);
std::string emit(const ScanResult& result, Format format);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace lossypdc
