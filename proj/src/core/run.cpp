#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "experiment.hpp"
#include "policies.hpp"
#include "sim.hpp"

namespace layercache {

namespace {

std::vector<ScenarioCatalog> build_scenarios(const ExperimentConfig& config) {
  std::vector<ScenarioCatalog> out;
  out.reserve(config.scenarios.size());
  for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
    out.push_back({config.scenarios[i].id, build_catalog(config.scenarios[i], config.seed, i)});
  }
  return out;
}

SimOptions sim_options(const ExperimentConfig& config) {
  SimOptions options;
  options.warmup_fraction = config.warmup_fraction;
  options.policy.resolution = config.resolution;
  options.policy.lfu_decay_threshold = config.lfu_decay_threshold;
  return options;
}

bool analytic_in_compare(const std::string& policy) {
  return policy == "llru" || policy == "mrlru" || policy == "static-opt" || policy == "hlfu-static";
}

double analytic_hit_rate(const std::string& policy, const Catalog& catalog, double capacity,
                         const ExperimentConfig& config) {
  if (policy == "llru" || policy == "mrlru") {
    if (capacity <= 0.0) return 0.0;
    const auto solution = policy == "llru"
                              ? solve_characteristic_time(catalog, capacity, config.clock)
                              : mr_approximation(catalog, capacity, config.clock);
    return solution.hit_rate;
  }
  const double total = catalog.popularity().total_rate;
  if (policy == "static-opt") {
    const double res = config.resolution > 0.0 ? config.resolution : default_resolution(catalog);
    return static_optimal(catalog, capacity, res).value / total;
  }
  return hlfu_static_placement(catalog, capacity).value / total;
}

FixedVersionModel fixed_model(const AsymptoticSpec& a) {
  FixedVersionModel m;
  m.popularity = make_shape(a.popularity);
  m.versions = a.version_weights.size();
  m.version_weight = [w = a.version_weights](std::size_t v, double) { return w[v]; };
  m.layer_size = [s = a.layer_sizes](double, std::size_t l) { return s[l]; };
  return m;
}

ContinuumModel continuum_model(const AsymptoticSpec& a) {
  ContinuumModel m;
  m.popularity = make_shape(a.popularity);
  m.version = make_shape(a.version_shape);
  m.layer_size = [s = a.layer_size](double, double) { return s; };
  return m;
}

}  // namespace

std::vector<CsvRow> compute_rows(const ExperimentConfig& config) {
  if (auto problems = validate_config(config); !problems.empty()) {
    throw ConfigError(std::move(problems));
  }
  if (config.mode == RunMode::kAsymptotic) {
    throw InvalidArgument("compute_rows: asymptotic mode writes its own CSV");
  }
  const auto scenarios = build_scenarios(config);
  const auto seeds = trace_seeds(config);
  const auto options = sim_options(config);
  std::vector<CsvRow> rows;

  if (config.mode == RunMode::kSimulate) {
    const auto cells = sweep(config.policies, scenarios, config.capacities, config.requests,
                             seeds, options);
    std::size_t next = 0;
    for (const auto& sc : scenarios) {
      for (double b : config.capacities) {
        for (std::size_t p = 0; p < config.policies.size(); ++p) {
          auto cell_rows = sweep_rows(cells[next++]);
          rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
        }
        if (config.approx_overlay && b > 0.0) {
          auto approx = approx_rows(sc.id, "llru-approx",
                                    solve_characteristic_time(sc.catalog, b, config.clock));
          rows.insert(rows.end(), approx.begin(), approx.end());
        }
      }
    }
    return rows;
  }

  if (config.mode == RunMode::kApprox) {
    for (const auto& sc : scenarios) {
      for (double b : config.capacities) {
        for (const auto& policy : config.policies) {
          const auto solution = policy == "llru"
                                    ? solve_characteristic_time(sc.catalog, b, config.clock)
                                    : mr_approximation(sc.catalog, b, config.clock);
          auto approx = approx_rows(sc.id, policy, solution);
          rows.insert(rows.end(), approx.begin(), approx.end());
        }
      }
    }
    return rows;
  }

  // Compare: one aggregate row per (scenario, B, policy).
  std::vector<std::string> simulated;
  for (const auto& p : config.policies) {
    if (!analytic_in_compare(p)) simulated.push_back(p);
  }
  std::map<std::tuple<std::string, double, std::string>, CsvRow> sim_rows;
  if (!simulated.empty()) {
    const auto cells = sweep(simulated, scenarios, config.capacities, config.requests, seeds, options);
    for (const auto& cell : cells) {
      sim_rows.emplace(std::tuple{cell.scenario_id, cell.capacity, cell.policy},
                       sweep_rows(cell).back());
    }
  }
  for (const auto& sc : scenarios) {
    for (double b : config.capacities) {
      for (const auto& policy : config.policies) {
        if (analytic_in_compare(policy)) {
          rows.push_back(aggregate_row(sc.id, policy, b, analytic_hit_rate(policy, sc.catalog, b, config)));
        } else {
          rows.push_back(sim_rows.at({sc.id, b, policy}));
        }
      }
    }
  }
  return rows;
}

void write_asymptotic_csv(const ExperimentConfig& config, std::ostream& out) {
  if (auto problems = validate_config(config); !problems.empty()) {
    throw ConfigError(std::move(problems));
  }
  const auto& a = config.asymptotic;
  out << kAsymptoticCsvHeader << '\n';
  const auto row = [&](std::string_view variant, double b, double tau, std::optional<std::size_t> D,
                       double x, double pos, double limit, std::optional<double> finite) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{}\n", config.name, a.model, variant,
               format_number(b), format_number(tau), D ? fmt::format("{}", *D) : "",
               format_number(x), format_number(pos), format_number(limit),
               finite ? format_number(*finite) : "");
  };
  const std::size_t points = a.points;

  if (a.model == "fixed-versions") {
    const auto model = fixed_model(a);
    for (double b : a.b) {
      const auto limit = asymptotic_hit_fixed_versions(model, b, a.quad_tol);
      for (std::size_t i = 1; i <= points; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(points);
        for (std::size_t l = 0; l < model.versions; ++l) {
          row("suffix", b, limit.tau(), std::nullopt, x, static_cast<double>(l + 1),
              limit.hit_prob(x, l), std::nullopt);
        }
      }
      for (std::size_t D : a.finite_objects) {
        const auto catalog = fixed_version_catalog(model, D);
        const auto finite = solve_characteristic_time(catalog, b * static_cast<double>(D), ClockMode::kDiscrete);
        for (std::size_t d = 0; d < D; ++d) {
          const double x = static_cast<double>(d + 1) / static_cast<double>(D);
          for (std::size_t l = 0; l < model.versions; ++l) {
            row("suffix", b, limit.tau(), D, x, static_cast<double>(l + 1), limit.hit_prob(x, l),
                finite.hit_prob(d, l));
          }
        }
      }
    }
    return;
  }

  const auto model = continuum_model(a);
  const auto mass = layer_mass_from_string(a.layer_mass);
  for (double b : a.b) {
    const auto limit = asymptotic_hit_continuum(model, b, mass, a.quad_tol);
    for (std::size_t i = 1; i <= points; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(points);
      for (std::size_t j = 0; j < points; ++j) {
        const double y = static_cast<double>(j) / static_cast<double>(points);
        row(a.layer_mass, b, limit.tau(), std::nullopt, x, y, limit.hit_prob(x, y), std::nullopt);
      }
    }
    const std::size_t V = a.finite_versions;
    for (std::size_t D : a.finite_objects) {
      const auto catalog = continuum_catalog(model, D, V);
      const double budget = b * static_cast<double>(D) * static_cast<double>(V);
      const auto finite = solve_characteristic_time(catalog, budget, ClockMode::kDiscrete);
      for (std::size_t d = 0; d < D; ++d) {
        const double x = static_cast<double>(d + 1) / static_cast<double>(D);
        for (std::size_t l = 0; l < V; ++l) {
          // Layer l (zero-based) carries suffix mass 1 - G(l / V).
          const double y = mass == LayerMass::kSuffix ? static_cast<double>(l) / static_cast<double>(V)
                                                      : (static_cast<double>(l) + 0.5) / static_cast<double>(V);
          row(a.layer_mass, b, limit.tau(), D, x, y, limit.hit_prob(x, y), finite.hit_prob(d, l));
        }
      }
    }
  }
}

RunResult run_config(const ExperimentConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (auto problems = validate_config(config); !problems.empty()) {
    throw ConfigError(std::move(problems));
  }
  fs::path csv_path = config.output;
  if (!out_dir.empty() && csv_path.is_relative()) csv_path = fs::path(out_dir) / csv_path;
  if (csv_path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(csv_path.parent_path(), ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", csv_path.parent_path().string(), ec.message()));
  }

  RunResult result;
  result.csv_path = csv_path.string();
  result.meta_path = result.csv_path + ".meta.json";
  // Compute before opening the file so a failed run leaves no partial CSV.
  std::string body;
  if (config.mode == RunMode::kAsymptotic) {
    std::ostringstream buffer;
    write_asymptotic_csv(config, buffer);
    body = buffer.str();
    result.rows = static_cast<std::size_t>(std::count(body.begin(), body.end(), '\n')) - 1;
  } else {
    const auto rows = compute_rows(config);
    std::ostringstream buffer;
    write_csv(buffer, rows);
    body = buffer.str();
    result.rows = rows.size();
  }
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + result.csv_path);
    out << body;
    if (!out) throw IoError("write failed for " + result.csv_path);
  }
  {
    nlohmann::json meta = {{"config", config_to_json(config)},
                           {"csv", csv_path.filename().string()},
                           {"rows", result.rows},
                           {"trace_seeds", trace_seeds(config)}};
    std::ofstream out(result.meta_path);
    if (!out) throw IoError("cannot write " + result.meta_path);
    out << meta.dump(2) << '\n';
  }
  return result;
}

}  // namespace layercache
