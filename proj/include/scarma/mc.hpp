#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scarma/carma.hpp"

namespace scarma {

struct ExperimentConfig {
  std::string family = "ou";
  std::vector<double> theta0;
  double alpha = 1.5;
  double sigma = 1.0;
  double delta = 1.0;
  std::vector<std::int64_t> n_list = {500, 2000, 5000};
  int replications = 500;
  std::vector<std::string> estimators = {"whittle", "garcia"};
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  double sim_step = 0.01;
  double sim_burn_in = 0.0;
  std::string sim_method = "euler";  // or "exact"
  std::string out;                   // output path hint for drivers

  void check() const;  // throws std::invalid_argument
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct ReplicationRecord {
  int rep = 0;
  bool ok = false;
  std::vector<double> theta;
  std::string failure_stage;  // empty when ok
};

struct CoordinateStats {
  double mean = 0.0;
  double bias = 0.0;  // |mean - theta0| as in the result tables
  double std_dev = 0.0;
  bool std_defined = true;  // false when only one success
};

struct CellSummary {
  std::string estimator;
  std::int64_t n = 0;
  std::vector<CoordinateStats> coords;
  int successes = 0;
  int failures = 0;
  bool empty = false;  // no successful replication
};

struct ExperimentCell {
  std::string estimator;
  std::int64_t n = 0;
  std::vector<ReplicationRecord> records;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentCell> cells;
  std::vector<CellSummary> summaries;
  double wall_seconds = 0.0;  // kept out of the serialized report

  // JSON with full per-replication records; deterministic for a given seed.
  std::string to_json() const;
  // CSV summary: estimator,n,coord,theta0,mean,bias,std,successes,failures
  std::string summary_csv() const;
};

// Summarize successful records of one (estimator, n) cell.
CellSummary summarize(const ExperimentCell& cell,
                      const std::vector<double>& theta0);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace scarma
