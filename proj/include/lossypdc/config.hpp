#pragma once

// Flat `key = value` experiment description.
//
//   # comment
//   type     = II
//   material = bbo_ordinary
//   length   = 2 mm
//   omega    = 3.54e15 rad/s
//
// Lengths accept m, cm, mm, um, nm; frequencies rad/s; fields V/m;
// nonlinear coefficients m/V or pm/V. A bare number is SI.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lossypdc/amplitude.hpp"

namespace lossypdc {

enum class ScanAxis { n_imag, crystal_length, delta_k, frequency };

enum class Observable {
  rate_I,
  rate_II,
  rate_ratio_to_lossless,
  sinc_profile,
  a_factor_gain,
  amplitude_matrix,
};

std::string_view to_string(ScanAxis axis);
std::string_view to_string(Observable observable);
ScanAxis parse_axis(std::string_view text);              // ValidationError("scan_axis")
Observable parse_observable(std::string_view text);      // ValidationError("scan_observables")

/// Scan keys found alongside the experiment keys; all optional.
struct ScanSettings {
  std::optional<ScanAxis> axis;
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<int> count;
  std::vector<Observable> observables;
};

struct ParsedConfig {
  ExperimentConfig experiment;
  ScanSettings scan;
  LossConvention loss_convention = LossConvention::intensity;
};

/// Throws ParseError (line/column) for malformed text and ValidationError
/// (naming the key) for unknown keys, bad units or invalid values.
/// `material_file` paths are resolved against `base_dir`.
ParsedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

ExperimentConfig load_config(std::string_view text);

ParsedConfig read_config_file(const std::filesystem::path& path);

}  // namespace lossypdc
