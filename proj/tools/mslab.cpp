#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "mslab/acceptance.hpp"
#include "mslab/experiments.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const auto b = item.find_last_not_of(" \t");
    std::size_t used = 0;
    const double x = std::stod(item.substr(a, b - a + 1), &used);
    if (used != b - a + 1) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(x);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-soliton NLS simulation and diagnostics"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run the experiment named in a config");
  run->add_option("config", run_config, "Config file")->required();

  std::string sweep_config, axis;
  std::optional<std::string> values;
  unsigned jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "Run one job per axis value and aggregate the fits");
  sweep->add_option("config", sweep_config, "Config file")->required();
  sweep->add_option("--axis", axis, "Config key, or a / v_star")->required();
  sweep->add_option("--values", values, "Comma-separated values (default: sweep.<axis> from the config)");
  sweep->add_option("-j,--jobs", jobs, "Worker threads (default: hardware concurrency)");

  std::vector<int> only;
  auto* check = app.add_subcommand("check", "Run the acceptance suite");
  check->add_option("--only", only, "Criterion ids")->check(CLI::Range(1, mslab::kCriteria));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mslab::kExitConfig;
  }

  if (*run) return mslab::run_command(run_config, std::cout);
  if (*sweep) {
    if (!values) return mslab::sweep_command(sweep_config, axis, nullptr, std::cout, jobs);
    std::vector<double> v;
    try {
      v = parse_values(*values);
    } catch (const std::exception& e) {
      std::cerr << "--values: " << e.what() << '\n';
      return mslab::kExitConfig;
    }
    return mslab::sweep_command(sweep_config, axis, &v, std::cout, jobs);
  }
  const auto rs = mslab::run_acceptance(only, &std::cout);
  std::size_t failed = 0;
  for (const auto& r : rs) failed += !r.passed;
  std::cout << rs.size() - failed << "/" << rs.size() << " criteria passed\n";
  return failed ? mslab::kExitAcceptance : mslab::kExitOk;
}
