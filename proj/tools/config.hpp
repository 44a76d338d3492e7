#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlucli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `key = value` lines; `#` starts a comment. Keys are validated against the
/// documented set and unknown keys are rejected with their line number.
struct Experiment {
  std::string task = "synthetic";  // synthetic | localization | qm9 | iris | custom

  // Architecture; zero means "task default".
  int inputs = 0;
  int hidden = 0;
  int outputs = 0;
  std::string mask = "no_direct_io";
  bool allow_onsite = false;

  // Data.
  std::uint64_t data_seed = 0;
  int n = 0;
  double omega = 0.15;
  std::vector<double> base_points;  // row-major q x L; empty for the built-in set
  double delta_ipr = 7.0;
  bool drop_sepal_width = false;
  std::string iris_path;
  std::string qm9_path;
  std::string dataset_path;
  int pad_len = 0;
  std::string label_descriptor = "C";
  std::vector<std::string> scan_descriptors;
  std::string scan_partition = "first";  // consensus | first

  // Physics.
  double gamma_in = -1.0;
  double gamma_out = -1.0;
  double gamma_dephase = 0.0;

  // Training.
  int iterations = 0;
  int particles = 0;
  double h_max = 0.0;
  std::string mutation = "uniform";
  double mutation_value = 0.0;
  std::string cost = "";  // clustering | localization; empty means task default
  int window = 0;
  double min_delta = -1.0;
  int init_retries = 0;

  std::vector<std::uint64_t> seeds{1};
  int repeats = 0;  // 0: one run per seed
  int threads = 1;

  // Sweep.
  std::string sweep_axis;
  std::vector<double> sweep_values;

  // Baseline.
  int kmeans_restarts = 50;
  std::string kmeans_init = "plus_plus";
  std::uint64_t kmeans_seed = 0;

  std::string output;

  /// Training seeds after applying `repeats`: the list is truncated, or
  /// extended with consecutive integers after its last entry.
  std::vector<std::uint64_t> run_seeds() const;
};

/// Reads a config file; relative paths resolve against its directory.
Experiment load_experiment(const std::string& path);

/// Parses config text; `base_dir` anchors relative paths.
Experiment parse_experiment(const std::string& text, const std::string& name, const std::string& base_dir);

/// "1,2,5" or "1..10" (inclusive) or a mix such as "1..3,7".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

std::vector<double> parse_number_list(const std::string& text);

/// Human-readable description of every accepted key.
const std::map<std::string, std::string>& documented_keys();

}  // namespace qlucli
