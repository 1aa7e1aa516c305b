#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mslab/config.hpp"
#include "mslab/multisoliton.hpp"
#include "mslab/nonlinearity.hpp"

namespace mslab {

struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

struct FitRecord {
  double rate = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct RunResult {
  std::string experiment;
  std::string config_hash;
  std::map<std::string, SeriesTable> series;
  std::map<std::string, FitRecord> fits;
  std::map<std::string, double> values;
  std::vector<std::filesystem::path> artifacts;  // relative to the output directory
  std::string status = "ok";                     // ok or error
  std::string error;
};

const std::vector<std::string>& experiment_names();

// Shared parsing of nonlinearity.*, run.* and ensemble.* keys.
Nonlinearity config_nonlinearity(const RunConfig& cfg);
GridSpec config_grid(const RunConfig& cfg);
EnsembleConfig config_ensemble(const RunConfig& cfg, const Nonlinearity& nl, const GridSpec& g);

// Validates every key the experiment reads; throws ConfigError naming the key.
void check_config(const RunConfig& cfg);

// Runs the experiment. Config errors propagate; experiment errors are caught and recorded in
// status/error with the series gathered so far kept. Snapshots go under artifact_dir when set.
RunResult run_experiment(const RunConfig& cfg, const std::filesystem::path& artifact_dir = {});

// <dir>/<series>.csv and <dir>/summary.csv, no timestamps.
void write_result(const std::filesystem::path& dir, const RunResult& r);
std::string summary_csv(const RunResult& r);

// Axis aliases: "a" is profile.a, "v_star" rescales every soliton velocity so the ensemble
// has that v_star. Any other key must already hold a number.
RunConfig apply_axis(const RunConfig& cfg, const std::string& axis, double value);
bool sweepable(const RunConfig& cfg, const std::string& axis);

struct SweepRow {
  double value = 0.0;
  RunResult result;
};

// One job per value on a bounded pool; a failing job is recorded and the others continue.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& axis,
                                const std::vector<double>& values, unsigned workers = 0,
                                const std::filesystem::path& out_dir = {});
std::string sweep_summary_csv(const std::string& axis, const std::vector<SweepRow>& rows);

// CLI entry points returning the documented exit codes.
enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitExperiment = 2, kExitAcceptance = 3 };
int run_command(const std::filesystem::path& config, std::ostream& log);
int sweep_command(const std::filesystem::path& config, const std::string& axis,
                  const std::vector<double>* values, std::ostream& log, unsigned workers = 0);

}  // namespace mslab
