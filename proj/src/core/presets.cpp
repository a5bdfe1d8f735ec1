#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "experiment.hpp"

namespace layercache {

namespace {

// Every preset shares this seed.
constexpr std::uint64_t kPresetSeed = 2024;

// 0.1, 0.2, ... printed without binary noise.
double grid(int i, int steps) { return std::round(1e6 * i / steps) / 1e6; }

ScenarioSpec two_version(std::string id, double alpha, double rho) {
  ScenarioSpec s;
  s.id = std::move(id);
  s.versions = 2;
  s.split = {.rule = "two", .alpha = alpha};
  s.sizes = {.rule = "two-layer", .rho = rho};
  return s;
}

ScenarioSpec mr_pair(std::string id, std::string rule, double alpha, double overhead) {
  ScenarioSpec s;
  s.id = std::move(id);
  s.versions = 2;
  s.split = {.rule = std::move(rule), .alpha = alpha};
  s.sizes = {.rule = "mr-overhead", .beta = 0.5, .overhead = overhead};
  return s;
}

ExperimentConfig base(std::string name, RunMode mode) {
  ExperimentConfig c;
  c.name = name;
  c.mode = mode;
  c.seed = kPresetSeed;
  c.output = name + ".csv";
  return c;
}

std::vector<double> even_grid(double total, int points) {
  std::vector<double> out;
  for (int i = 1; i <= points; ++i) out.push_back(total * i / points);
  return out;
}

ExperimentConfig fig2() {
  auto c = base("fig2", RunMode::kSimulate);
  ScenarioSpec s;
  s.id = "fig2";
  s.versions = 4;
  s.split = {.rule = "uniform-decreasing"};
  s.sizes = {.rule = "random-composition", .total = 240.0};
  c.scenarios = {s};
  c.policies = {"llru"};
  c.capacities = even_grid(100 * 240.0, 20);
  c.requests = 5000000;
  c.replications = 1;
  c.approx_overlay = true;
  return c;
}

ExperimentConfig fig3(std::string name, bool alternating, RunMode mode) {
  auto c = base(std::move(name), mode);
  if (mode == RunMode::kApprox) {
    // Overhead sweep at alpha = 0.5.
    for (int o = 0; o <= 50; o += 5) {
      c.scenarios.push_back(mr_pair(fmt::format("o={}", o), "two", 0.5, o));
    }
    c.policies = {"llru", "mrlru"};
    c.capacities = {10, 20, 100};
    return c;
  }
  for (double o : {5.0, 25.0}) {
    for (int i = 1; i <= 9; ++i) {
      const double alpha = grid(i, 10);
      c.scenarios.push_back(mr_pair(fmt::format("o={:g},alpha={:g}", o, alpha),
                                    alternating ? "two-alternating" : "two", alpha, o));
    }
  }
  c.policies = {"llru", "mrlru", "hlru", "hlfu-static"};
  c.capacities = {100};
  c.requests = 1000000;
  c.replications = 5;
  return c;
}

ExperimentConfig policy_study(std::string name, std::vector<ScenarioSpec> scenarios) {
  auto c = base(std::move(name), RunMode::kSimulate);
  c.scenarios = std::move(scenarios);
  c.policies = {"lbelady", "llfu", "llru", "static-opt"};
  c.capacities = even_grid(100.0, 20);
  c.requests = 1000000;
  c.replications = 5;
  return c;
}

ExperimentConfig fig5() {
  ScenarioSpec single;
  single.id = "V=1";
  single.versions = 1;
  single.split = {.rule = "single"};
  single.sizes = {.rule = "unit"};
  std::vector<ScenarioSpec> s{single};
  for (double alpha : {0.99, 0.9, 0.5}) {
    s.push_back(two_version(fmt::format("alpha={:g},rho=0.5", alpha), alpha, 0.5));
  }
  auto c = policy_study("fig5", std::move(s));
  // Four scenarios; shorter traces keep the preset within minutes.
  c.requests = 200000;
  c.replications = 3;
  return c;
}

ExperimentConfig fig6() {
  auto c = base("fig6", RunMode::kApprox);
  for (int i = 1; i <= 19; ++i) {
    const double alpha = grid(i, 20);
    c.scenarios.push_back(two_version(fmt::format("alpha={:g}", alpha), alpha, 0.5));
  }
  c.capacities = {10, 20, 40};
  return c;
}

ExperimentConfig fig7() {
  auto c = base("fig7", RunMode::kApprox);
  for (int i = 1; i <= 9; ++i) {
    for (int j = 1; j <= 9; ++j) {
      const double alpha = grid(i, 10);
      const double rho = grid(j, 10);
      c.scenarios.push_back(two_version(fmt::format("alpha={:g},rho={:g}", alpha, rho), alpha, rho));
    }
  }
  c.capacities = {20};
  return c;
}

ScenarioSpec three_version(double zeta, double eta, double rho, double kappa) {
  ScenarioSpec s;
  s.id = fmt::format("zeta={:g},eta={:g},rho={:g},kappa={:g}", zeta, eta, rho, kappa);
  s.versions = 3;
  s.split = {.rule = "three", .zeta = zeta, .eta = eta};
  s.sizes = {.rule = "three-layer", .rho = rho, .kappa = kappa};
  return s;
}

// Pairs (a, b) on the 0.1 grid with a, b, 1 - a - b all >= 0.1; infeasible
// pairs are left out.
std::vector<std::pair<double, double>> simplex_grid() {
  std::vector<std::pair<double, double>> out;
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; i + j <= 9; ++j) out.emplace_back(grid(i, 10), grid(j, 10));
  }
  return out;
}

ExperimentConfig fig8() {
  auto c = base("fig8", RunMode::kApprox);
  for (const auto& [rho, kappa] : {std::pair{0.1, 0.3}, std::pair{0.5, 0.3}}) {
    for (const auto& [zeta, eta] : simplex_grid()) {
      c.scenarios.push_back(three_version(zeta, eta, rho, kappa));
    }
  }
  c.capacities = {80};
  return c;
}

ExperimentConfig fig9() {
  auto c = base("fig9", RunMode::kApprox);
  for (const auto& [zeta, eta] : {std::pair{0.5, 0.3}, std::pair{0.2, 0.3}}) {
    for (const auto& [rho, kappa] : simplex_grid()) {
      c.scenarios.push_back(three_version(zeta, eta, rho, kappa));
    }
  }
  c.capacities = {80};
  return c;
}

ExperimentConfig fig11() {
  auto c = base("fig11", RunMode::kApprox);
  for (double m : {0.5, 1.0, 2.0}) {
    for (double n : {0.5, 1.0, 2.0}) {
      for (std::size_t V = 1; V <= 8; ++V) {
        ScenarioSpec s;
        s.id = fmt::format("m={:g},n={:g},V={}", m, n, V);
        s.versions = V;
        s.split = {.rule = "parametric", .m = m};
        s.sizes = {.rule = "parametric", .n = n};
        c.scenarios.push_back(std::move(s));
      }
    }
  }
  c.capacities = {10, 20, 40};
  return c;
}

ExperimentConfig limit_fixed() {
  auto c = base("limit-fixed", RunMode::kAsymptotic);
  c.asymptotic.model = "fixed-versions";
  c.asymptotic.popularity = {"log", 50.0};
  c.asymptotic.version_weights = {0.4, 0.3, 0.2, 0.1};
  c.asymptotic.layer_sizes = {0.25, 0.25, 0.25, 0.25};
  c.asymptotic.b = {0.1, 0.25, 0.5};
  c.asymptotic.finite_objects = {50, 200, 1000};
  return c;
}

ExperimentConfig limit_continuum() {
  auto c = base("limit-continuum", RunMode::kAsymptotic);
  c.asymptotic.model = "continuum";
  c.asymptotic.popularity = {"log", 50.0};
  c.asymptotic.version_shape = {"uniform", 0.0};
  c.asymptotic.version_weights.clear();
  c.asymptotic.layer_sizes.clear();
  c.asymptotic.layer_size = 1.0;
  c.asymptotic.layer_mass = "suffix";
  c.asymptotic.b = {0.1, 0.25, 0.5};
  c.asymptotic.finite_objects = {500};
  c.asymptotic.finite_versions = 20;
  return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2",  "fig3a", "fig3b", "fig3c",
                                              "fig4",  "fig5",  "fig6",  "fig7",
                                              "fig8",  "fig9",  "fig11", "limit-fixed",
                                              "limit-continuum"};
  return names;
}

ExperimentConfig figure_preset(std::string_view name) {
  if (name == "fig2") return fig2();
  if (name == "fig3a") return fig3("fig3a", false, RunMode::kApprox);
  if (name == "fig3b") return fig3("fig3b", false, RunMode::kCompare);
  if (name == "fig3c") return fig3("fig3c", true, RunMode::kCompare);
  if (name == "fig4") return policy_study("fig4", {two_version("alpha=0.99,rho=0.5", 0.99, 0.5)});
  if (name == "fig5") return fig5();
  if (name == "fig6") return fig6();
  if (name == "fig7") return fig7();
  if (name == "fig8") return fig8();
  if (name == "fig9") return fig9();
  if (name == "fig11") return fig11();
  if (name == "limit-fixed") return limit_fixed();
  if (name == "limit-continuum") return limit_continuum();
  throw ConfigError(fmt::format("preset: unknown name \"{}\" (known: {})", name,
                                fmt::join(preset_names(), ", ")));
}

}  // namespace layercache
