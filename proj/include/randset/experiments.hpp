#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randset/parallel.hpp"

namespace randset {

struct ExperimentConfig {
  std::string experiment;
  int d = 2;
  std::vector<double> lambdas;
  std::size_t replicates = 1;
  std::size_t samples = 1;
  std::uint64_t seed = 20240917;
  std::size_t grid_size = 2048;
  std::string out;  // empty: standard output
  std::string format = "csv";
  double eps = 1e-3;
  std::vector<double> betas;
  bool timing = false;
  Execution execution = Execution::OpenMP;
};

struct ExperimentRecord {
  std::string experiment;
  int d = 0;
  double lambda = 0.0;
  long long replicate = -1;  // -1 for aggregates over replicates
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();  // NaN: not applicable
  double runtime_ms = std::numeric_limits<double>::quiet_NaN();
};

const std::vector<std::string>& registered_experiments();
bool is_registered(std::string_view name);

// Defaults sized for a single core; unknown names throw ConfigError.
ExperimentConfig default_config(const std::string& experiment);

// Flat "key = value" lines; '#' starts a comment. Later keys override
// earlier ones and the fields already in cfg.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
// Sets one field from its textual form, as the config file and flags do.
void set_config_field(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                      int line = 0);

void validate(const ExperimentConfig& cfg);

// Runs the configured experiment. Records come out in (lambda index,
// replicate, metric) order independent of the worker count.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "experiment,d,lambda,replicate,seed,metric,value,std_error,runtime_ms";

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_json(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_records(const ExperimentConfig& cfg, const std::vector<ExperimentRecord>& records);

// Shortest round-trip decimal form, "" for NaN.
std::string format_number(double v);

}  // namespace randset
