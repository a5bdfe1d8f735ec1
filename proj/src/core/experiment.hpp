#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "analysis.hpp"
#include "asymptotic.hpp"
#include "catalog.hpp"
#include "csv.hpp"

namespace layercache {

// How q(d) is split over versions.
//   uniform-decreasing  random simplex point sorted descending (any V)
//   two                 (alpha, 1 - alpha), V = 2
//   two-alternating     (alpha, 1 - alpha) on odd objects (one-based), (0.5, 0.5) otherwise
//   three               (zeta, eta, 1 - zeta - eta), V = 3
//   parametric          proportional to (V - v + 1)^m
//   single              V = 1
struct SplitRule {
  std::string rule = "uniform-decreasing";
  double alpha = 0.5;
  double zeta = 0.5;
  double eta = 0.25;
  double m = 1.0;
  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

// Layer sizes.
//   random-composition  random integer composition of `total` into V parts >= 1
//   two-layer           (rho, 1 - rho)
//   three-layer         (rho, kappa, 1 - rho - kappa)
//   parametric          proportional to l^n, summing to 1
//   mr-overhead         MR sizes (beta, 1); LR sizes (1 + overhead/100) times MR
//   unit                every layer has size 1
struct SizeRule {
  std::string rule = "unit";
  double total = 240.0;
  double rho = 0.5;
  double kappa = 0.25;
  double n = 1.0;
  double beta = 0.5;
  double overhead = 0.0;  // percent
  friend bool operator==(const SizeRule&, const SizeRule&) = default;
};

struct ScenarioSpec {
  std::string id;
  std::size_t objects = 100;
  std::size_t versions = 1;
  double zipf = 0.8;
  SplitRule split;
  SizeRule sizes;
  // When set, the catalog is read from this JSON file and the recipe above
  // is ignored.
  std::string catalog_file;
  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct ShapeSpec {
  std::string kind = "uniform";  // uniform | power | log
  double param = 0.0;
  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

Shape make_shape(const ShapeSpec& spec);

// Limit-model evaluation. "fixed-versions": V fixed, version weights g
// independent of x, layer sizes Delta(x, l) = layer_sizes[l]. "continuum":
// version shape G and constant Delta = layer_size.
struct AsymptoticSpec {
  std::string model = "fixed-versions";
  ShapeSpec popularity{"log", 50.0};
  ShapeSpec version_shape;
  std::vector<double> version_weights{0.4, 0.3, 0.2, 0.1};
  std::vector<double> layer_sizes{0.25, 0.25, 0.25, 0.25};
  double layer_size = 1.0;
  std::string layer_mass = "suffix";
  std::vector<double> b{0.25, 0.5};
  std::size_t points = 20;  // x grid for the limit curve
  // Finite catalogs (objects, and versions for the continuum model) whose
  // fixed-point hit probabilities are reported next to the limit.
  std::vector<std::size_t> finite_objects;
  std::size_t finite_versions = 20;
  double quad_tol = 1e-8;
  friend bool operator==(const AsymptoticSpec&, const AsymptoticSpec&) = default;
};

enum class RunMode { kSimulate, kApprox, kAsymptotic, kCompare };

std::string_view to_string(RunMode mode);
std::optional<RunMode> run_mode_from_string(std::string_view name);

// Fully resolved experiment description. All randomness derives from `seed`:
// scenario i's catalog uses derive_seed(seed, catalog, 2i) for version splits
// and derive_seed(seed, catalog, 2i+1) for layer sizes; replication r replays
// derive_seed(seed, trace, r) unless `seeds` lists trace seeds explicitly.
struct ExperimentConfig {
  std::string name = "experiment";
  RunMode mode = RunMode::kSimulate;
  std::uint64_t seed = 1;
  std::vector<ScenarioSpec> scenarios;
  std::vector<std::string> policies{"llru"};
  std::vector<double> capacities;
  std::size_t requests = 1000000;
  std::size_t replications = 1;
  std::vector<std::uint64_t> seeds;
  double warmup_fraction = 0.0;
  ClockMode clock = ClockMode::kDiscrete;
  double resolution = 0.0;  // static-opt size grid; 0 = automatic
  std::uint64_t lfu_decay_threshold = 0;
  bool approx_overlay = false;  // simulate mode: add llru-approx rows
  std::string output = "results.csv";
  AsymptoticSpec asymptotic;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Every offending field, as "path: message"; empty when valid.
std::vector<std::string> validate_config(const ExperimentConfig& config);

// Parses and validates; throws ConfigError listing every problem.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

Catalog build_catalog(const ScenarioSpec& spec, std::uint64_t seed, std::size_t index);
std::vector<std::uint64_t> trace_seeds(const ExperimentConfig& config);

const std::vector<std::string>& preset_names();
ExperimentConfig figure_preset(std::string_view name);

// Result rows for simulate, approx and compare modes.
std::vector<CsvRow> compute_rows(const ExperimentConfig& config);

inline constexpr std::string_view kAsymptoticCsvHeader =
    "scenario_id,model,variant,b,tau,D,x,layer_or_y,limit_hit_prob,finite_hit_prob";

// Writes the asymptotic-mode CSV.
void write_asymptotic_csv(const ExperimentConfig& config, std::ostream& out);

struct RunResult {
  std::string csv_path;
  std::string meta_path;
  std::size_t rows = 0;
};

// Runs the experiment and writes `output` (relative paths resolve against
// out_dir when it is non-empty) plus a `<output>.meta.json` sidecar holding
// the resolved config.
RunResult run_config(const ExperimentConfig& config, const std::string& out_dir = {});

}  // namespace layercache
