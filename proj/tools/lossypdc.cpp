#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "lossypdc/config.hpp"
#include "lossypdc/errors.hpp"
#include "lossypdc/scan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitConvergence = 2;

struct Options {
  std::string config;
  std::string format = "csv";
  std::string out;
  std::string method = "farfield";
  double tol = 1e-6;
  std::string preset;
};

void write(const lossypdc::ScanResult& result, const Options& opt) {
  const lossypdc::Format format = lossypdc::parse_format(opt.format);
  if (opt.out.empty()) {
    lossypdc::emit(result, format, std::cout);
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw lossypdc::UsageError("cannot open output file '" + opt.out + "'");
  lossypdc::emit(result, format, file);
  if (!file.flush()) throw lossypdc::UsageError("failed writing '" + opt.out + "'");
}

lossypdc::ParsedConfig parsed_config(const Options& opt) {
  if (opt.config.empty()) return {};
  return lossypdc::read_config_file(opt.config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coincidence rates of down-converted photon pairs in absorbing crystals"};
  app.set_version_flag("--version", std::string(lossypdc::kVersion));
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", opt.out, "Output file (default: stdout)");
    sub->add_option("--method", opt.method, "Amplitude evaluation")
        ->check(CLI::IsMember({"farfield", "numeric"}))
        ->capture_default_str();
    sub->add_option("--tol", opt.tol, "Relative tolerance of the numeric method")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* rate = app.add_subcommand("rate", "Amplitude matrix and rate of one configuration");
  rate->add_option("--config", opt.config, "Configuration file (default: built-in defaults)")
      ->check(CLI::ExistingFile);
  add_common(rate);

  auto* scan = app.add_subcommand("scan", "Sweep described by the scan_* keys of a configuration");
  scan->add_option("--config", opt.config, "Configuration file")->required()->check(CLI::ExistingFile);
  add_common(scan);

  auto* preset = app.add_subcommand("preset", "Reproduce a figure");
  preset->add_option("name", opt.preset, "Preset name")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6"}));
  add_common(preset);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    const lossypdc::Method method = lossypdc::parse_method(opt.method);
    if (*rate) {
      const auto parsed = parsed_config(opt);
      parsed.experiment.validate();
      write(lossypdc::evaluate_point(parsed.experiment, method, opt.tol), opt);
    } else if (*scan) {
      write(lossypdc::run_scan(lossypdc::scan_request(parsed_config(opt), method, opt.tol)), opt);
    } else if (*preset) {
      write(lossypdc::run_preset(opt.preset, method, opt.tol), opt);
    }
  } catch (const lossypdc::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const lossypdc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}
