#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "experiment.hpp"
#include "policies.hpp"
#include "seeding.hpp"
#include "workload.hpp"

namespace layercache {

using nlohmann::json;

namespace {

const std::set<std::string> kSplitRules{"uniform-decreasing", "two",        "two-alternating",
                                        "three",              "parametric", "single"};
const std::set<std::string> kSizeRules{"random-composition", "two-layer",   "three-layer",
                                       "parametric",         "mr-overhead", "unit"};

// Collects type problems while reading a JSON object; unknown keys are
// reported too so typos do not silently fall back to defaults.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& problems)
      : obj_(obj), path_(std::move(path)), problems_(problems) {
    if (!obj_.is_object()) problem(path_, "must be an object");
  }
  ~Reader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) problem(field(key), "unknown field");
    }
  }
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  template <class T>
  void get(const char* key, T& out, bool required = false) {
    seen_.insert(key);
    if (!obj_.is_object()) return;
    const auto it = obj_.find(key);
    if (it == obj_.end()) {
      if (required) problem(field(key), "is required");
      return;
    }
    try {
      if constexpr (std::is_floating_point_v<T>) {
        if (!it->is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
      }
      out = it->template get<T>();
    } catch (const std::exception& e) {
      problem(field(key), e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    if (!obj_.is_object()) return nullptr;
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }

 private:
  void problem(const std::string& where, std::string_view what) {
    problems_.push_back(fmt::format("{}: {}", where, what));
  }

  const json& obj_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void read_shape(const json& node, const std::string& path, ShapeSpec& out,
                std::vector<std::string>& problems) {
  Reader r(node, path, problems);
  r.get("kind", out.kind);
  r.get("param", out.param);
}

void read_scenario(const json& node, const std::string& path, ScenarioSpec& s,
                   std::vector<std::string>& problems) {
  Reader r(node, path, problems);
  r.get("id", s.id, true);
  r.get("objects", s.objects);
  r.get("versions", s.versions);
  r.get("zipf", s.zipf);
  r.get("catalog_file", s.catalog_file);
  if (const auto* split = r.child("split")) {
    Reader sr(*split, r.field("split"), problems);
    sr.get("rule", s.split.rule);
    sr.get("alpha", s.split.alpha);
    sr.get("zeta", s.split.zeta);
    sr.get("eta", s.split.eta);
    sr.get("m", s.split.m);
  }
  if (const auto* sizes = r.child("sizes")) {
    Reader zr(*sizes, r.field("sizes"), problems);
    zr.get("rule", s.sizes.rule);
    zr.get("total", s.sizes.total);
    zr.get("rho", s.sizes.rho);
    zr.get("kappa", s.sizes.kappa);
    zr.get("n", s.sizes.n);
    zr.get("beta", s.sizes.beta);
    zr.get("overhead", s.sizes.overhead);
  }
}

void read_asymptotic(const json& node, AsymptoticSpec& a, std::vector<std::string>& problems) {
  Reader r(node, "asymptotic", problems);
  r.get("model", a.model);
  if (const auto* p = r.child("popularity")) read_shape(*p, "asymptotic.popularity", a.popularity, problems);
  if (const auto* g = r.child("version_shape")) {
    read_shape(*g, "asymptotic.version_shape", a.version_shape, problems);
  }
  r.get("version_weights", a.version_weights);
  r.get("layer_sizes", a.layer_sizes);
  r.get("layer_size", a.layer_size);
  r.get("layer_mass", a.layer_mass);
  r.get("b", a.b);
  r.get("points", a.points);
  r.get("finite_objects", a.finite_objects);
  r.get("finite_versions", a.finite_versions);
  r.get("quad_tol", a.quad_tol);
}

json shape_to_json(const ShapeSpec& s) { return {{"kind", s.kind}, {"param", s.param}}; }

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void check_scenario(const ScenarioSpec& s, const std::string& p, std::vector<std::string>& out) {
  const auto bad = [&](std::string_view f, std::string msg) {
    out.push_back(fmt::format("{}.{}: {}", p, f, msg));
  };
  if (s.id.empty()) bad("id", "must be non-empty");
  if (!s.catalog_file.empty()) return;
  if (s.objects == 0) bad("objects", "must be >= 1");
  if (s.versions == 0) bad("versions", "must be >= 1");
  if (s.versions > 255) bad("versions", "must be <= 255");
  if (!(s.zipf >= 0.0) || !std::isfinite(s.zipf)) bad("zipf", fmt::format("must be >= 0, got {}", s.zipf));

  const auto need_versions = [&](std::string_view f, std::size_t v) {
    if (s.versions != v) bad(f, fmt::format("rule needs versions = {}, got {}", v, s.versions));
  };
  const auto& sp = s.split;
  if (!kSplitRules.contains(sp.rule)) {
    bad("split.rule", fmt::format("unknown rule \"{}\"", sp.rule));
  } else if (sp.rule == "two" || sp.rule == "two-alternating") {
    need_versions("split.rule", 2);
    if (!in_unit(sp.alpha)) bad("split.alpha", fmt::format("must be in [0, 1], got {}", sp.alpha));
  } else if (sp.rule == "three") {
    need_versions("split.rule", 3);
    if (!in_unit(sp.zeta)) bad("split.zeta", fmt::format("must be in [0, 1], got {}", sp.zeta));
    if (!in_unit(sp.eta)) bad("split.eta", fmt::format("must be in [0, 1], got {}", sp.eta));
    if (sp.zeta + sp.eta > 1.0 + 1e-12) {
      bad("split.eta", fmt::format("zeta + eta must be <= 1, got {}", sp.zeta + sp.eta));
    }
  } else if (sp.rule == "parametric") {
    if (!std::isfinite(sp.m)) bad("split.m", "must be finite");
  } else if (sp.rule == "single") {
    need_versions("split.rule", 1);
  }

  const auto& sz = s.sizes;
  if (!kSizeRules.contains(sz.rule)) {
    bad("sizes.rule", fmt::format("unknown rule \"{}\"", sz.rule));
  } else if (sz.rule == "random-composition") {
    if (!(sz.total >= static_cast<double>(s.versions)) || sz.total != std::floor(sz.total)) {
      bad("sizes.total", fmt::format("must be an integer >= versions, got {}", sz.total));
    }
  } else if (sz.rule == "two-layer") {
    need_versions("sizes.rule", 2);
    if (!in_unit(sz.rho)) bad("sizes.rho", fmt::format("must be in [0, 1], got {}", sz.rho));
  } else if (sz.rule == "three-layer") {
    need_versions("sizes.rule", 3);
    if (!in_unit(sz.rho)) bad("sizes.rho", fmt::format("must be in [0, 1], got {}", sz.rho));
    if (!in_unit(sz.kappa)) bad("sizes.kappa", fmt::format("must be in [0, 1], got {}", sz.kappa));
    if (sz.rho + sz.kappa > 1.0 + 1e-12) {
      bad("sizes.kappa", fmt::format("rho + kappa must be <= 1, got {}", sz.rho + sz.kappa));
    }
  } else if (sz.rule == "parametric") {
    if (!std::isfinite(sz.n)) bad("sizes.n", "must be finite");
  } else if (sz.rule == "mr-overhead") {
    need_versions("sizes.rule", 2);
    if (!(sz.beta > 0.0 && sz.beta < 1.0)) bad("sizes.beta", fmt::format("must be in (0, 1), got {}", sz.beta));
    if (!(sz.overhead >= 0.0) || !std::isfinite(sz.overhead)) {
      bad("sizes.overhead", fmt::format("must be >= 0, got {}", sz.overhead));
    }
  }
}

void check_asymptotic(const AsymptoticSpec& a, std::vector<std::string>& out) {
  const auto bad = [&](std::string_view f, std::string msg) {
    out.push_back(fmt::format("asymptotic.{}: {}", f, msg));
  };
  const auto check_shape = [&](std::string_view f, const ShapeSpec& s) {
    try {
      make_shape(s);
    } catch (const Error& e) {
      bad(f, e.what());
    }
  };
  check_shape("popularity", a.popularity);
  if (a.model == "fixed-versions") {
    if (a.version_weights.empty()) bad("version_weights", "must be non-empty");
    double sum = 0.0;
    for (double g : a.version_weights) {
      if (!(g >= 0.0)) bad("version_weights", "entries must be >= 0");
      sum += g;
    }
    if (std::abs(sum - 1.0) > 1e-9) bad("version_weights", fmt::format("must sum to 1, got {}", sum));
    if (a.layer_sizes.size() != a.version_weights.size()) {
      bad("layer_sizes", "must have one entry per version weight");
    }
    for (double s : a.layer_sizes) {
      if (!(s >= 0.0) || !std::isfinite(s)) bad("layer_sizes", "entries must be finite and >= 0");
    }
  } else if (a.model == "continuum") {
    check_shape("version_shape", a.version_shape);
    if (!(a.layer_size > 0.0) || !std::isfinite(a.layer_size)) bad("layer_size", "must be positive");
    if (a.layer_mass != "suffix" && a.layer_mass != "density") {
      bad("layer_mass", fmt::format("must be suffix or density, got \"{}\"", a.layer_mass));
    }
    if (a.finite_versions == 0) bad("finite_versions", "must be >= 1");
  } else {
    bad("model", fmt::format("must be fixed-versions or continuum, got \"{}\"", a.model));
  }
  if (a.b.empty()) bad("b", "must list at least one value");
  for (double b : a.b) {
    if (!(b > 0.0)) bad("b", fmt::format("entries must be positive, got {}", b));
  }
  if (a.points == 0) bad("points", "must be >= 1");
  for (auto d : a.finite_objects) {
    if (d == 0) bad("finite_objects", "entries must be >= 1");
  }
  if (!(a.quad_tol > 0.0)) bad("quad_tol", "must be positive");
}

}  // namespace

Shape make_shape(const ShapeSpec& spec) {
  if (spec.kind == "uniform") return Shape::uniform();
  if (spec.kind == "power") return Shape::power(spec.param);
  if (spec.kind == "log") return Shape::logarithmic(spec.param);
  throw ConfigError(fmt::format("kind: unknown shape \"{}\"", spec.kind));
}

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kSimulate: return "simulate";
    case RunMode::kApprox: return "approx";
    case RunMode::kAsymptotic: return "asymptotic";
    case RunMode::kCompare: break;
  }
  return "compare";
}

std::optional<RunMode> run_mode_from_string(std::string_view name) {
  if (name == "simulate") return RunMode::kSimulate;
  if (name == "approx") return RunMode::kApprox;
  if (name == "asymptotic") return RunMode::kAsymptotic;
  if (name == "compare") return RunMode::kCompare;
  return std::nullopt;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> out;
  const auto bad = [&](std::string_view f, std::string msg) {
    out.push_back(fmt::format("{}: {}", f, msg));
  };
  if (c.name.empty()) bad("name", "must be non-empty");
  if (c.output.empty()) bad("output", "must be non-empty");
  if (c.mode == RunMode::kAsymptotic) {
    check_asymptotic(c.asymptotic, out);
    return out;
  }

  if (c.scenarios.empty()) bad("scenarios", "must list at least one scenario");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < c.scenarios.size(); ++i) {
    check_scenario(c.scenarios[i], fmt::format("scenarios[{}]", i), out);
    if (!c.scenarios[i].id.empty() && !ids.insert(c.scenarios[i].id).second) {
      bad(fmt::format("scenarios[{}].id", i), fmt::format("duplicate id \"{}\"", c.scenarios[i].id));
    }
  }

  if (c.policies.empty()) bad("policies", "must list at least one policy");
  for (std::size_t i = 0; i < c.policies.size(); ++i) {
    const auto& p = c.policies[i];
    const auto where = fmt::format("policies[{}]", i);
    if (!is_policy_name(p)) {
      bad(where, fmt::format("unknown policy \"{}\"", p));
      continue;
    }
    if (c.mode == RunMode::kApprox && p != "llru" && p != "mrlru") {
      bad(where, fmt::format("approx mode supports llru and mrlru, got \"{}\"", p));
    }
    if (policy_needs_mr_sizes(p)) {
      for (std::size_t s = 0; s < c.scenarios.size(); ++s) {
        const auto& sc = c.scenarios[s];
        if (sc.catalog_file.empty() && sc.sizes.rule != "mr-overhead") {
          bad(where, fmt::format("\"{}\" needs MR sizes, scenario \"{}\" has none", p, sc.id));
        }
      }
    }
  }

  if (c.capacities.empty()) bad("capacities", "must list at least one budget");
  for (std::size_t i = 0; i < c.capacities.size(); ++i) {
    const double b = c.capacities[i];
    const bool analytic = c.mode == RunMode::kApprox;
    if (!std::isfinite(b) || b < 0.0 || (analytic && b == 0.0)) {
      bad(fmt::format("capacities[{}]", i),
          fmt::format("must be finite and {} 0, got {}", analytic ? ">" : ">=", b));
    }
  }
  const bool simulated = c.mode == RunMode::kSimulate || c.mode == RunMode::kCompare;
  if (simulated) {
    if (c.requests == 0) bad("requests", "must be >= 1");
    if (c.seeds.empty() && c.replications == 0) bad("replications", "must be >= 1");
    if (!(c.warmup_fraction >= 0.0 && c.warmup_fraction < 1.0)) {
      bad("warmup_fraction", fmt::format("must be in [0, 1), got {}", c.warmup_fraction));
    }
  }
  if (!(c.resolution >= 0.0) || !std::isfinite(c.resolution)) {
    bad("resolution", fmt::format("must be >= 0, got {}", c.resolution));
  }
  return out;
}

ExperimentConfig config_from_json(const json& doc) {
  std::vector<std::string> problems;
  ExperimentConfig c;
  {
    Reader r(doc, "", problems);
    r.get("name", c.name);
    std::string mode;
    r.get("mode", mode, true);
    if (!mode.empty()) {
      if (const auto m = run_mode_from_string(mode)) {
        c.mode = *m;
      } else {
        problems.push_back(fmt::format("mode: unknown mode \"{}\"", mode));
      }
    }
    r.get("seed", c.seed);
    if (const auto* scenarios = r.child("scenarios")) {
      if (!scenarios->is_array()) {
        problems.emplace_back("scenarios: must be an array");
      } else {
        for (std::size_t i = 0; i < scenarios->size(); ++i) {
          c.scenarios.emplace_back();
          read_scenario((*scenarios)[i], fmt::format("scenarios[{}]", i), c.scenarios.back(), problems);
        }
      }
    }
    r.get("policies", c.policies);
    r.get("capacities", c.capacities);
    r.get("requests", c.requests);
    r.get("replications", c.replications);
    r.get("seeds", c.seeds);
    r.get("warmup_fraction", c.warmup_fraction);
    std::string clock;
    r.get("clock", clock);
    if (!clock.empty()) {
      try {
        c.clock = clock_mode_from_string(clock);
      } catch (const ConfigError&) {
        problems.push_back(fmt::format("clock: unknown clock mode \"{}\"", clock));
      }
    }
    r.get("resolution", c.resolution);
    r.get("lfu_decay_threshold", c.lfu_decay_threshold);
    r.get("approx_overlay", c.approx_overlay);
    r.get("output", c.output);
    if (const auto* a = r.child("asymptotic")) read_asymptotic(*a, c.asymptotic, problems);
  }
  // Fields that failed to parse keep their defaults, so range checks still
  // report on everything else.
  for (auto& p : validate_config(c)) problems.push_back(std::move(p));
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json scenarios = json::array();
  for (const auto& s : c.scenarios) {
    json node = {{"id", s.id},
                 {"objects", s.objects},
                 {"versions", s.versions},
                 {"zipf", s.zipf},
                 {"split",
                  {{"rule", s.split.rule},
                   {"alpha", s.split.alpha},
                   {"zeta", s.split.zeta},
                   {"eta", s.split.eta},
                   {"m", s.split.m}}},
                 {"sizes",
                  {{"rule", s.sizes.rule},
                   {"total", s.sizes.total},
                   {"rho", s.sizes.rho},
                   {"kappa", s.sizes.kappa},
                   {"n", s.sizes.n},
                   {"beta", s.sizes.beta},
                   {"overhead", s.sizes.overhead}}}};
    if (!s.catalog_file.empty()) node["catalog_file"] = s.catalog_file;
    scenarios.push_back(std::move(node));
  }
  const auto& a = c.asymptotic;
  json doc = {{"name", c.name},
              {"mode", to_string(c.mode)},
              {"seed", c.seed},
              {"scenarios", std::move(scenarios)},
              {"policies", c.policies},
              {"capacities", c.capacities},
              {"requests", c.requests},
              {"replications", c.replications},
              {"seeds", c.seeds},
              {"warmup_fraction", c.warmup_fraction},
              {"clock", to_string(c.clock)},
              {"resolution", c.resolution},
              {"lfu_decay_threshold", c.lfu_decay_threshold},
              {"approx_overlay", c.approx_overlay},
              {"output", c.output},
              {"asymptotic",
               {{"model", a.model},
                {"popularity", shape_to_json(a.popularity)},
                {"version_shape", shape_to_json(a.version_shape)},
                {"version_weights", a.version_weights},
                {"layer_sizes", a.layer_sizes},
                {"layer_size", a.layer_size},
                {"layer_mass", a.layer_mass},
                {"b", a.b},
                {"points", a.points},
                {"finite_objects", a.finite_objects},
                {"finite_versions", a.finite_versions},
                {"quad_tol", a.quad_tol}}}};
  return doc;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: not valid JSON ({})", path, e.what()));
  }
  return config_from_json(doc);
}

Catalog build_catalog(const ScenarioSpec& s, std::uint64_t seed, std::size_t index) {
  if (!s.catalog_file.empty()) return load_catalog(s.catalog_file);
  const std::size_t D = s.objects;
  const std::size_t V = s.versions;
  Rng split_rng(derive_seed(seed, SeedStream::kCatalog, 2 * index));
  Rng size_rng(derive_seed(seed, SeedStream::kCatalog, 2 * index + 1));
  const auto q = zipf_object_popularity(D, s.zipf);

  Table<double> rate(D, V);
  const auto parametric = s.split.rule == "parametric"
                              ? parametric_version_popularity(V, s.split.m)
                              : std::vector<double>{};
  for (std::size_t d = 0; d < D; ++d) {
    std::vector<double> row;
    const auto& rule = s.split.rule;
    if (rule == "uniform-decreasing") {
      row = split_versions_uniform_decreasing(q[d], V, split_rng);
    } else if (rule == "two") {
      row = split_versions_two(q[d], s.split.alpha);
    } else if (rule == "two-alternating") {
      // One-based odd objects are zero-based even ones.
      row = split_versions_two(q[d], d % 2 == 0 ? s.split.alpha : 0.5);
    } else if (rule == "three") {
      row = split_versions_three(q[d], s.split.zeta, s.split.eta);
    } else if (rule == "parametric") {
      row.resize(V);
      for (std::size_t v = 0; v < V; ++v) row[v] = q[d] * parametric[v];
    } else if (rule == "single") {
      row = {q[d]};
    } else {
      throw ConfigError(fmt::format("split.rule: unknown rule \"{}\"", rule));
    }
    for (std::size_t v = 0; v < V; ++v) rate(d, v) = row.at(v);
  }

  Table<double> layers(D, V);
  std::optional<Table<double>> mr;
  const auto& rule = s.sizes.rule;
  for (std::size_t d = 0; d < D; ++d) {
    std::vector<double> row;
    if (rule == "random-composition") {
      row = random_layer_sizes(V, static_cast<std::uint64_t>(s.sizes.total), size_rng);
    } else if (rule == "two-layer") {
      row = {s.sizes.rho, 1.0 - s.sizes.rho};
    } else if (rule == "three-layer") {
      row = {s.sizes.rho, s.sizes.kappa, std::max(0.0, 1.0 - s.sizes.rho - s.sizes.kappa)};
    } else if (rule == "parametric") {
      row = parametric_layer_sizes(V, s.sizes.n);
    } else if (rule == "mr-overhead") {
      const std::vector<double> mr_sizes{s.sizes.beta, 1.0};
      row = apply_overhead(mr_sizes, s.sizes.overhead);
      if (!mr) mr.emplace(D, V);
      for (std::size_t v = 0; v < V; ++v) (*mr)(d, v) = mr_sizes[v];
    } else if (rule == "unit") {
      row.assign(V, 1.0);
    } else {
      throw ConfigError(fmt::format("sizes.rule: unknown rule \"{}\"", rule));
    }
    for (std::size_t l = 0; l < V; ++l) layers(d, l) = row.at(l);
  }
  return Catalog(std::move(layers), std::move(rate), std::move(mr));
}

std::vector<std::uint64_t> trace_seeds(const ExperimentConfig& config) {
  if (!config.seeds.empty()) return config.seeds;
  std::vector<std::uint64_t> seeds(config.replications);
  for (std::size_t r = 0; r < seeds.size(); ++r) {
    seeds[r] = derive_seed(config.seed, SeedStream::kTrace, r);
  }
  return seeds;
}

}  // namespace layercache
