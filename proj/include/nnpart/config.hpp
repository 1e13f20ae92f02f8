#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nnpart/environment.hpp"

namespace nnpart {

/// Flat key=value configuration with dotted keys. Lines starting with '#'
/// are comments. Keys under "grid." hold comma-separated sweep values.
struct ExperimentConfig {
  long dimension = 3;
  int labels = 2;
  Metric metric = Metric::InnerProduct;
  double alpha = 1.0;
  double p = 2.0;
  double delta = 0.0;  // Δ
  long rounds = 1000;
  std::uint64_t seed = 1;

  std::string adversary = "uniform_ball";  // uniform_ball|margin|adaptive_width|replay|lowerbound
  double adversary_gamma = 0.0;
  int adversary_candidates = 64;
  std::string replay_file;

  std::string centers = "random";  // or "x,y;x,y"
  double report_gamma = 0.0;
  std::string learner = "reduction";  // or "random"
  int replications = 20;              // lowerbound command

  double lp_tolerance = 1e-9;
  long mc_samples = 4096;
  long burn_in = 256;
  int i_min = -2;
  std::optional<int> i_max;  // unset: ceil(log2(T·d)) + 4
  double c_scale = 100.0;
  double selection_constant = 1e3;
  double slack_constant = 3.0;
  int i_cap = 0;
  long max_lifted_dim = 640;

  std::string ledger_path = "ledger.csv";
  std::string summary_path = "summary.txt";
  std::string sweep_path = "sweep.csv";

  /// Grid axes in file order.
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;

  /// Sets one key; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Cross-field checks.
  void validate() const;
  /// Every key with its effective value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> effective() const;
  /// Explicit centers parsed from `centers`, or nothing for "random".
  std::optional<std::vector<Eigen::VectorXd>> explicit_centers() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace nnpart
