// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/core.h>

#include "analysis.hpp"
#include "asymptotic.hpp"
#include "catalog.hpp"
#include "experiment.hpp"
#include "oracles.hpp"
#include "policies.hpp"
#include "seeding.hpp"
#include "sim.hpp"
#include "workload.hpp"

using namespace layercache;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// Standard error of the mean of xs.
double std_error(const std::vector<double>& xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

// Some i < j < k with a strict dip or a strict peak at j.
bool non_monotone(const std::vector<double>& h, double eps = 1e-9) {
  const std::size_t n = h.size();
  for (std::size_t j = 1; j + 1 < n; ++j) {
    double lo_left = h[0], hi_left = h[0], lo_right = h[j + 1], hi_right = h[j + 1];
    for (std::size_t i = 0; i < j; ++i) {
      lo_left = std::min(lo_left, h[i]);
      hi_left = std::max(hi_left, h[i]);
    }
    for (std::size_t k = j + 1; k < n; ++k) {
      lo_right = std::min(lo_right, h[k]);
      hi_right = std::max(hi_right, h[k]);
    }
    if (hi_left > h[j] + eps && hi_right > h[j] + eps) return true;
    if (lo_left < h[j] - eps && lo_right < h[j] - eps) return true;
  }
  return false;
}

std::vector<Catalog> preset_catalogs(const ExperimentConfig& config) {
  std::vector<Catalog> out;
  for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
    out.push_back(build_catalog(config.scenarios[i], config.seed, i));
  }
  return out;
}

std::vector<ScenarioCatalog> scenario_catalogs(const ExperimentConfig& config) {
  std::vector<ScenarioCatalog> out;
  const auto catalogs = preset_catalogs(config);
  for (std::size_t i = 0; i < catalogs.size(); ++i) out.push_back({config.scenarios[i].id, catalogs[i]});
  return out;
}

int layer_misses(Policy& policy, const Trace& trace) {
  int total = 0;
  for (const auto& r : trace.entries) {
    total += static_cast<int>(r.version + 1 - policy.access(r).layers_present);
  }
  return total;
}

Outcome approximation_accuracy() {
  const auto config = figure_preset("fig2");
  const auto catalog = build_catalog(config.scenarios[0], config.seed, 0);
  // Every other point of the preset grid.
  std::vector<double> grid;
  for (std::size_t i = 1; i < config.capacities.size(); i += 2) grid.push_back(config.capacities[i]);
  const std::size_t n = 5000000;
  const auto trace = sample_trace(catalog.popularity(), n, trace_seeds(config)[0]);
  const std::size_t ranks[] = {0, 4, 9, 14};
  double worst = 0.0;
  std::string where;
  std::size_t cells = 0;
  for (double B : grid) {
    const auto sim = run_simulation("llru", catalog, B, trace);
    const auto approx = solve_characteristic_time(catalog, B, config.clock);
    for (std::size_t d : ranks) {
      for (std::size_t l = 0; l < catalog.versions(); ++l) {
        const auto h = sim.layer_hit_prob(d, l);
        if (!h) continue;
        ++cells;
        const double err = std::abs(*h - approx.hit_prob(d, l));
        if (err > worst) {
          worst = err;
          where = fmt::format("B={:g}, rank {}, layer {}", B, d + 1, l + 1);
        }
      }
    }
  }
  return {worst <= 0.02 && grid.size() == 10,
          fmt::format("max |sim - approx| = {:.4f} at {} over {} cells, {} budgets (tol 0.02)", worst,
                      where, cells, grid.size())};
}

Outcome closed_forms() {
  const auto c = oracle::make_catalog(2, 1, {1, 1}, {1, 1});
  double worst = 0.0;
  for (ClockMode mode : {ClockMode::kDiscrete, ClockMode::kPoisson}) {
    const auto s = solve_characteristic_time(c, 1.0, mode);
    for (std::size_t d = 0; d < 2; ++d) worst = std::max(worst, std::abs(s.hit_prob(d, 0) - 0.5));
  }
  FixedVersionModel uniform{Shape::uniform(), 1, [](std::size_t, double) { return 1.0; },
                            [](double, std::size_t) { return 1.0; }};
  double worst_limit = 0.0;
  for (double b : {0.1, 0.5, 0.9}) {
    const auto limit = asymptotic_hit_fixed_versions(uniform, b);
    for (int i = 0; i <= 100; ++i) {
      worst_limit = std::max(worst_limit, std::abs(limit.hit_prob(i / 100.0, 0) - b));
    }
  }
  return {worst <= 1e-9 && worst_limit <= 1e-6,
          fmt::format("two-unit max err {:.2e} (tol 1e-9), uniform limit max |h - b| {:.2e} (tol 1e-6)",
                      worst, worst_limit)};
}

Outcome static_oracle() {
  std::mt19937_64 rng(derive_seed(2024, SeedStream::kMonteCarlo, 3));
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = oracle::random_catalog(rng, 1 + rng() % 6, 1 + rng() % 3, 5);
    double total = 0.0;
    for (std::size_t d = 0; d < c.objects(); ++d) total += c.lr_prefix(d, c.versions());
    const double B = std::uniform_real_distribution<double>(0.0, total)(rng);
    if (static_optimal(c, B, 1.0).value != oracle::static_optimum(c, B)) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} of 200 instances differ from exhaustive enumeration", mismatches)};
}

Outcome offline_optimality() {
  std::mt19937_64 rng(derive_seed(2024, SeedStream::kMonteCarlo, 4));
  int not_optimal = 0, worse_than_online = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t D = 1 + rng() % 3, V = 1 + rng() % 2, B = 1 + rng() % 3, n = 1 + rng() % 12;
    std::vector<double> ones(D * V, 1.0);
    const auto c = oracle::make_catalog(D, V, ones, ones);
    Trace trace;
    for (std::size_t i = 0; i < n; ++i) {
      trace.entries.push_back({static_cast<std::uint32_t>(rng() % D), static_cast<std::uint32_t>(rng() % V)});
    }
    LayeredBelady belady(c, static_cast<double>(B), trace);
    LayeredLru lru(c, static_cast<double>(B));
    LayeredLfu lfu(c, static_cast<double>(B));
    const int mb = layer_misses(belady, trace);
    if (mb != oracle::OfflineMinimum(D, V, B, trace).solve()) ++not_optimal;
    if (mb > layer_misses(lru, trace) || mb > layer_misses(lfu, trace)) ++worse_than_online;
  }
  return {not_optimal == 0 && worse_than_online == 0,
          fmt::format("layer misses: {} of 100 differ from the exhaustive minimum, {} exceed llru or llfu",
                      not_optimal, worse_than_online)};
}

Outcome policy_ordering() {
  auto config = figure_preset("fig4");
  config.requests = 1000000;
  config.replications = 5;
  const auto scenarios = scenario_catalogs(config);
  const auto& catalog = scenarios[0].catalog;
  const std::vector<std::string> online{"lbelady", "llfu", "llru"};
  const auto seeds = trace_seeds(config);
  const auto cells = sweep(online, scenarios, config.capacities, config.requests, seeds);
  std::map<std::pair<double, std::string>, double> rate;
  for (const auto& cell : cells) rate[{cell.capacity, cell.policy}] = cell.summary.mean_hit_rate;
  const double total = catalog.popularity().total_rate;
  const double res = default_resolution(catalog);
  int violations = 0;
  double worst_gap = 0.0;
  for (double B : config.capacities) {
    const double belady = rate[{B, "lbelady"}], lfu = rate[{B, "llfu"}], lru = rate[{B, "llru"}];
    const double opt = static_optimal(catalog, B, res).value / total;
    worst_gap = std::max(worst_gap, std::abs(lfu - opt));
    if (!(belady >= lfu - 0.01 && lfu - 0.01 >= lru - 0.02 && std::abs(lfu - opt) <= 0.02)) ++violations;
  }
  return {violations == 0,
          fmt::format("{} of {} budgets violate the ordering; max |llfu - static-opt| = {:.4f} (tol 0.02)",
                      violations, config.capacities.size(), worst_gap)};
}

Outcome lr_mr_crossover() {
  auto config = figure_preset("fig3b");
  const auto scenarios = scenario_catalogs(config);
  const double B = config.capacities.at(0);
  const std::vector<std::string> online{"llru", "mrlru", "hlru"};
  const auto cells = sweep(online, scenarios, config.capacities, config.requests, trace_seeds(config));
  std::map<std::pair<std::string, std::string>, double> simulated;
  for (const auto& cell : cells) simulated[{cell.scenario_id, cell.policy}] = cell.summary.mean_hit_rate;

  bool low_overhead_ok = true, crossover = false;
  int hlfu_violations = 0;
  double worst_hlfu = 0.0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& spec = config.scenarios[i];
    const auto& c = scenarios[i].catalog;
    const double lr = solve_characteristic_time(c, B, config.clock).hit_rate;
    const double mr = mr_approximation(c, B, config.clock).hit_rate;
    const double alpha = spec.split.alpha;
    if (spec.sizes.overhead == 5.0 && lr < mr) low_overhead_ok = false;
    if (spec.sizes.overhead == 25.0 && (alpha <= 0.2 + 1e-9 || alpha >= 0.8 - 1e-9) && mr >= lr) crossover = true;
    const double hlfu = hlfu_static_placement(c, B).value / c.popularity().total_rate;
    double best_other = std::max(lr, mr);
    for (const auto& p : online) best_other = std::max(best_other, simulated[{spec.id, p}]);
    worst_hlfu = std::max(worst_hlfu, best_other - hlfu);
    if (hlfu < best_other - 0.01) ++hlfu_violations;
  }
  return {low_overhead_ok && crossover && hlfu_violations == 0,
          fmt::format("o=5 llru >= mrlru at every alpha: {}; o=25 skewed crossover: {}; "
                      "hlfu-static below another policy by > 0.01 at {} points (max shortfall {:.4f})",
                      low_overhead_ok ? "yes" : "no", crossover ? "yes" : "no", hlfu_violations,
                      std::max(0.0, worst_hlfu))};
}

Outcome alpha_non_monotone() {
  const auto config = figure_preset("fig6");
  const auto catalogs = preset_catalogs(config);
  std::vector<std::string> found;
  for (double B : config.capacities) {
    std::vector<double> h;
    for (const auto& c : catalogs) h.push_back(solve_characteristic_time(c, B, config.clock).hit_rate);
    if (non_monotone(h)) found.push_back(fmt::format("{:g}", B));
  }
  std::string list;
  for (const auto& b : found) list += (list.empty() ? "" : ",") + b;
  return {!found.empty(), fmt::format("non-monotone approximation curve for B in {{{}}} of {} budgets",
                                      list, config.capacities.size())};
}

Outcome per_layer_monotone() {
  auto config = figure_preset("fig6");
  config.replications = 5;
  const auto scenarios = scenario_catalogs(config);
  const auto seeds = trace_seeds(config);
  const std::vector<std::string> policy{"llru"};
  const auto cells = sweep(policy, scenarios, config.capacities, config.requests, seeds);
  // (B, object, layer) -> per-alpha mean and standard error across seeds.
  int violations = 0, comparisons = 0;
  for (double B : config.capacities) {
    for (std::size_t d : {std::size_t{0}, std::size_t{9}}) {
      for (std::size_t l : {std::size_t{0}, std::size_t{1}}) {
        std::vector<double> m, se;
        for (const auto& cell : cells) {
          if (cell.capacity != B) continue;
          std::vector<double> per_seed;
          for (const auto& run : cell.summary.runs) per_seed.push_back(run.layer_hit_prob(d, l).value_or(0.0));
          m.push_back(mean(per_seed));
          se.push_back(std_error(per_seed));
        }
        // Layer 1 should not fall as alpha grows; layer 2 should not rise.
        const double sign = l == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
          for (std::size_t j = i + 1; j < m.size(); ++j) {
            ++comparisons;
            const double slack = 3.0 * std::hypot(se[i], se[j]);
            if (sign * (m[j] - m[i]) < -slack) ++violations;
          }
        }
      }
    }
  }
  return {violations == 0, fmt::format("{} of {} ordered alpha pairs break the trend by more than 3 SE",
                                       violations, comparisons)};
}

Outcome variance_bound_check() {
  const auto config = figure_preset("fig2");
  const auto catalog = build_catalog(config.scenarios[0], config.seed, 0);
  double delta_max = 0.0;
  for (double x : catalog.layer_sizes().values()) delta_max = std::max(delta_max, x);
  const double bound = variance_bound(catalog.objects(), catalog.versions(), delta_max);
  const std::size_t n = 10000;
  const boost::math::chi_squared chi(static_cast<double>(n - 1));
  const double lower_q = boost::math::quantile(chi, 0.01);
  double worst_ratio = 0.0;
  std::string detail;
  std::uint64_t index = 0;
  for (double B : {config.capacities[3], config.capacities[9], config.capacities[15]}) {
    const auto s = solve_characteristic_time(catalog, B, ClockMode::kDiscrete);
    const auto t = static_cast<std::size_t>(std::llround(s.characteristic_time));
    const auto sample = sample_working_set_variance(catalog, t, n, derive_seed(config.seed, SeedStream::kMonteCarlo, index++));
    const double ucb = (n - 1) * sample.variance / lower_q;
    if (ucb / bound > worst_ratio) {
      worst_ratio = ucb / bound;
      detail = fmt::format("B={:g}, t={}: variance {:.1f}, 99% UCB {:.1f}", B, t, sample.variance, ucb);
    }
  }
  return {worst_ratio <= 1.0,
          fmt::format("bound {:.4g}; largest UCB/bound {:.3g} ({})", bound, worst_ratio, detail)};
}

Outcome limit_convergence() {
  const auto spec = figure_preset("limit-fixed").asymptotic;
  FixedVersionModel model;
  model.popularity = make_shape(spec.popularity);
  model.versions = spec.version_weights.size();
  model.version_weight = [w = spec.version_weights](std::size_t v, double) { return w[v]; };
  model.layer_size = [s = spec.layer_sizes](double, std::size_t l) { return s[l]; };
  const bool shape_ok = model.versions == 4 &&
                        std::all_of(spec.layer_sizes.begin(), spec.layer_sizes.end(),
                                    [](double s) { return s == 0.25; });
  bool pass = shape_ok;
  std::string detail;
  for (double b : spec.b) {
    const auto limit = asymptotic_hit_fixed_versions(model, b, spec.quad_tol);
    std::vector<double> gaps;
    for (std::size_t D : {50u, 200u, 1000u}) {
      const auto catalog = fixed_version_catalog(model, D);
      const auto finite = solve_characteristic_time(catalog, b * static_cast<double>(D), ClockMode::kDiscrete);
      double gap = 0.0;
      for (std::size_t d = 0; d < D; ++d) {
        const double x = (d + 1.0) / static_cast<double>(D);
        for (std::size_t l = 0; l < model.versions; ++l) {
          gap = std::max(gap, std::abs(finite.hit_prob(d, l) - limit.hit_prob(x, l)));
        }
      }
      gaps.push_back(gap);
    }
    pass = pass && gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] <= 0.05;
    detail += fmt::format("{}b={:g}: {:.4f} > {:.4f} > {:.4f}", detail.empty() ? "" : "; ", b, gaps[0],
                          gaps[1], gaps[2]);
  }
  return {pass, "max gap at D = 50, 200, 1000 (tol 0.05 at 1000): " + detail};
}

Outcome version_sweep() {
  const auto config = figure_preset("fig11");
  const auto catalogs = preset_catalogs(config);
  // (m, n) -> hit rate per V, per budget.
  std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < config.scenarios.size(); ++i) {
    groups[{config.scenarios[i].split.m, config.scenarios[i].sizes.n}].push_back(i);
  }
  int decreasing = 0, increasing = 0, non_mono = 0, curves = 0;
  for (auto& [mn, idx] : groups) {
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return config.scenarios[a].versions < config.scenarios[b].versions; });
    for (double B : config.capacities) {
      std::vector<double> h;
      for (std::size_t i : idx) h.push_back(solve_characteristic_time(catalogs[i], B, config.clock).hit_rate);
      ++curves;
      bool dec = true, inc = true;
      for (std::size_t v = 0; v + 1 < h.size(); ++v) {
        dec = dec && h[v + 1] < h[v];
        inc = inc && h[v + 1] > h[v];
      }
      if (dec) ++decreasing;
      if (inc) ++increasing;
      if (non_monotone(h)) ++non_mono;
    }
  }
  return {decreasing > 0 && non_mono > 0 && groups.size() == 9,
          fmt::format("over {} (m, n, B) curves with V = 1..8: {} strictly decreasing, {} non-monotone, "
                      "{} strictly increasing",
                      curves, decreasing, non_mono, increasing)};
}

Outcome invariant_fuzz() {
  std::mt19937_64 rng(derive_seed(2024, SeedStream::kMonteCarlo, 12));
  const std::size_t steps = 100000;
  std::string failure;
  const auto fail = [&](std::string msg) {
    if (failure.empty()) failure = std::move(msg);
  };

  for (int trial = 0; trial < 4 && failure.empty(); ++trial) {
    const std::size_t D = 5 + rng() % 20, V = 1 + rng() % 4;
    auto c = oracle::random_catalog(rng, D, V, 6);
    if (trial % 2 == 1) {
      // Fractional sizes; MR sizes scaled to stay hybrid-feasible.
      Table<double> delta = c.layer_sizes(), mr = *c.mr_sizes();
      for (auto& x : delta.values()) x *= 0.37;
      for (auto& x : mr.values()) x *= 0.37;
      c = Catalog(delta, c.rates(), mr);
    }
    double total = 0.0;
    for (std::size_t d = 0; d < D; ++d) total += c.lr_prefix(d, V);
    const double B = std::uniform_real_distribution<double>(0.05, 0.6)(rng) * total;
    const auto trace = sample_trace(c.popularity(), steps, rng());
    for (const auto& name : {"llru", "llfu", "lbelady", "mrlru", "hlru"}) {
      auto policy = make_policy(name, c, B, &trace);
      auto* lfu = dynamic_cast<LayeredLfu*>(policy.get());
      for (std::size_t t = 0; t < steps && failure.empty(); ++t) {
        const auto& r = trace.entries[t];
        Table<std::uint64_t> before;
        if (lfu) before = lfu->frequencies().counts();
        policy->access(r);
        try {
          policy->check_invariants();
        } catch (const std::exception& e) {
          fail(fmt::format("{} step {}: {}", name, t, e.what()));
        }
        const auto& state = policy->state();
        if (state.occupancy() > B * (1 + 1e-9)) fail(fmt::format("{} step {}: occupancy over B", name, t));
        for (std::size_t d = 0; d < D; ++d) {
          if (state.lr_layers(d) > V) fail(fmt::format("{} step {}: prefix longer than V", name, t));
        }
        if (lfu) {
          const auto& after = lfu->frequencies();
          for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t l = 0; l < V; ++l) {
              const std::uint64_t expect = before(d, l) + (d == r.object && l <= r.version ? 1 : 0);
              if (after.count(d, l) != expect) fail(fmt::format("llfu step {}: count drift", t));
              if (l > 0 && after.count(d, l) > after.count(d, l - 1)) {
                fail(fmt::format("llfu step {}: higher layer counted more", t));
              }
            }
          }
        }
      }
    }
  }

  // V = 1 collapse to textbook policies.
  int collapse_runs = 0;
  for (int trial = 0; trial < 3 && failure.empty(); ++trial) {
    const std::size_t D = 10 + rng() % 20;
    std::vector<double> size(D), rate(D);
    for (std::size_t d = 0; d < D; ++d) {
      size[d] = 1 + rng() % 5;
      rate[d] = 1 + rng() % 100;
    }
    const Catalog c(Table<double>(D, 1, size), Table<double>(D, 1, rate), Table<double>(D, 1, size));
    double total = 0.0;
    for (double s : size) total += s;
    const double B = std::floor(0.3 * total);
    const auto trace = sample_trace(c.popularity(), steps, rng());
    const auto textbook = [&](const std::string& name) -> std::vector<bool> {
      std::vector<bool> hits;
      if (name == "llfu") {
        oracle::TextbookLfu p(size, B);
        for (const auto& r : trace.entries) hits.push_back(p.access(r.object));
      } else if (name == "lbelady") {
        oracle::TextbookBelady p(size, B, trace);
        for (const auto& r : trace.entries) hits.push_back(p.access(r.object));
      } else {
        oracle::TextbookLru p(size, B);
        for (const auto& r : trace.entries) hits.push_back(p.access(r.object));
      }
      return hits;
    };
    for (const auto& name : {"llru", "llfu", "lbelady", "mrlru", "hlru"}) {
      auto policy = make_policy(name, c, B, &trace);
      const auto expected = textbook(name);
      for (std::size_t t = 0; t < steps; ++t) {
        if (policy->access(trace.entries[t]).hit != expected[t]) {
          fail(fmt::format("V=1 {} differs from its textbook policy at step {}", name, t));
          break;
        }
      }
      ++collapse_runs;
    }
  }
  if (!failure.empty()) return {false, failure};
  return {true, fmt::format("4 random catalogs x 5 policies x {} steps clean; {} V=1 runs match textbook "
                            "hit sequences",
                            steps, collapse_runs)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks the acceptance criteria and prints one line per criterion."};
  std::vector<int> known_red;
  app.add_option("--known-red", known_red,
                 "criteria recorded as unattainable; exit 0 only if exactly these fail")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int number;
    const char* title;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "approximation accuracy", approximation_accuracy},
      {2, "closed-form fixed points", closed_forms},
      {3, "static optimal oracle", static_oracle},
      {4, "offline optimality at unit sizes", offline_optimality},
      {5, "policy ordering", policy_ordering},
      {6, "LR vs MR crossover", lr_mr_crossover},
      {7, "non-monotone hit rate in alpha", alpha_non_monotone},
      {8, "per-layer monotonicity in alpha", per_layer_monotone},
      {9, "working-set variance bound", variance_bound_check},
      {10, "fixed-version limit convergence", limit_convergence},
      {11, "version-sweep regimes", version_sweep},
      {12, "invariant fuzz", invariant_fuzz},
  };
  std::set<int> failed;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) failed.insert(c.number);
    fmt::print("{} criterion {:>2} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", c.number, c.title, o.detail,
               secs);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed.size(), criteria.size());
  const std::set<int> expected(known_red.begin(), known_red.end());
  if (expected.empty()) return failed.empty() ? 0 : 1;
  for (int n : expected) {
    if (!failed.contains(n)) fmt::print("criterion {} is listed as known red but passed\n", n);
  }
  for (int n : failed) {
    if (!expected.contains(n)) fmt::print("criterion {} failed and is not listed as known red\n", n);
  }
  return failed == expected ? 0 : 1;
}
