// crofton-lab <experiment> --config <path> [--seed N] [--out <path>]
//
// Exit codes: 0 PASS, 1 FAIL, 2 usage or configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crofton/experiment.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crofton-formula experiments for random exponential sums and polynomials"};
  std::string experiment, config_path, out_path, csv_path;
  std::optional<std::uint64_t> seed;
  app.add_option("experiment", experiment,
                 "verify-crofton | integrate-volume | estimate-zeros | pseudo-volume | bkk | asymptotics")
      ->required();
  app.add_option("--config", config_path, "YAML configuration file")->required();
  app.add_option("--seed", seed, "overrides the seed in the configuration");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--csv", csv_path, "asymptotics curve as CSV (t,estimate,stderr,prediction)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto kind = crofton::parse_experiment_kind(experiment);
  if (!kind) {
    std::cerr << "error: argument 'experiment': unknown experiment '" << experiment << "'\n";
    return 2;
  }

  crofton::ExperimentReport report;
  try {
    const auto config = crofton::load_config(config_path, kind, seed);
    report = crofton::run_experiment(config);
  } catch (const crofton::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  const std::string yaml = crofton::report_yaml(report);
  if (out_path.empty()) out_path = report.config.output;
  if (out_path.empty()) {
    std::cout << yaml;
  } else if (!write_file(out_path, yaml)) {
    std::cerr << "error: argument '--out': cannot write '" << out_path << "'\n";
    return 2;
  }
  if (csv_path.empty()) csv_path = report.config.csv;
  if (!csv_path.empty()) {
    if (report.config.kind != crofton::ExperimentKind::kAsymptotics) {
      std::cerr << "error: field 'csv': only the asymptotics experiment emits a curve\n";
      return 2;
    }
    if (!write_file(csv_path, crofton::report_csv(report))) {
      std::cerr << "error: field 'csv': cannot write '" << csv_path << "'\n";
      return 2;
    }
  }
  std::cerr << to_string(report.config.kind) << ": " << (report.pass() ? "PASS" : "FAIL") << "\n";
  return report.pass() ? 0 : 1;
}
