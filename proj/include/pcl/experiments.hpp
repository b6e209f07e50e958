#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pcl/core.hpp"
#include "pcl/io.hpp"

namespace pcl::experiments {

struct GeneratedClass {
  PartialConceptClass cls;
  bool degenerate = false;  // every concept is all-Star
};

// i.i.d. ternary rows with P(Star) = star_prob, deduplicated, resampled until
// `size` distinct rows exist. star_prob = 1 yields the single all-Star concept,
// flagged degenerate.
GeneratedClass generate_random_class(std::size_t n, std::size_t size, double star_prob,
                                     std::uint64_t seed);

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t trials = 0;  // 0 keeps the suite default
  std::map<std::string, double> params;
  std::vector<std::string> inputs;
  std::string output;  // report path stem; empty means no files

  double param(const std::string& key, double fallback) const;
};

struct Check {
  std::string name;
  std::string reference;  // which inequality is being checked
  double measured = 0;
  double bound = 0;
  std::string relation = "<=";
  bool pass = false;
  std::string detail;
};

struct Report {
  int schema = 1;
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  std::size_t passed() const;
  std::size_t failed() const { return checks.size() - passed(); }
  bool ok() const { return failed() == 0; }
  io::Json to_json() const;
  std::string to_csv() const;
};

std::vector<std::string> experiment_names();
// Throws ContractViolation for an unknown name.
Report run_experiment(const ExperimentConfig& config);
// Writes <output>.json and <output>.csv when config.output is set.
void write_report(const ExperimentConfig& config, const Report& report);

// experiment: compression-size | disambiguation-size. One CSV row per grid point.
std::string emit_scaling_table(const std::string& experiment, const std::vector<std::size_t>& grid,
                               std::uint64_t seed);

}  // namespace pcl::experiments
