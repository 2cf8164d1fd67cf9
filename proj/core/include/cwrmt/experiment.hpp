#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwrmt/ensembles.hpp"

namespace cwrmt {

enum class Task { esd, moments, norm, correlations, oracle, graphcheck, laplace };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

// Defaults are the acceptance thresholds; every value can be overridden from
// the "tolerances" object of the config.
struct Tolerances {
  double ks_max = 0.05;
  double moment2_abs = 1e-9;
  double moment4_lo = 1.85;
  double moment4_hi = 2.15;
  double identity_rel = 1e-8;
  double norm_vs_magnetization = 0.07;
  double norm_b_max = 0.15;
  double variance_max = 0.01;
  double sigmas = 3.0;
  double laplace_ratio = 0.02;
};

struct ExperimentSpec {
  Task task = Task::esd;
  EnsembleConfig ensemble;  // N is taken from N_grid
  double gamma = 0.5;
  std::size_t replicas = 1;
  int k_max = 8;
  std::vector<std::int64_t> N_grid;
  std::vector<int> K_list{2, 4};
  std::vector<double> scales;  // laplace task
  std::size_t mc_samples = 100000;
  std::filesystem::path output_dir = "cwrmt_out";
  std::uint64_t seed = 0;
  bool write_eigenvalues = true;
  Tolerances tolerances;

  // Throws ConfigError with the offending field.
  void validate() const;
};

// Parses the JSON config format documented in the README. Throws ConfigError.
ExperimentSpec parse_experiment_spec(std::string_view json_text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  ExperimentSpec spec;
  // Flat "name -> value" aggregates, e.g. "N=1000/mean_ks".
  std::map<std::string, double> aggregates;
  // Per-replica values in replica order, e.g. "N=1000/ks".
  std::map<std::string, std::vector<double>> per_replica;
  std::vector<Check> checks;
  std::vector<std::string> lines;  // human-readable summary for stdout
  std::map<std::string, double> timings_seconds;
  std::string summary_json;

  bool passed() const;
};

// Executes the task, writes summary.json and the task's CSVs to
// spec.output_dir, and returns the report. ConfigError, IoError and
// ResourceError propagate for distinct exit codes.
RunReport run(const ExperimentSpec& spec);

// Process exit code for an exception thrown by run() (0 is never returned).
int exit_code_for(const std::exception& e);

inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitResource = 4;
inline constexpr int kExitNumeric = 5;

}  // namespace cwrmt
