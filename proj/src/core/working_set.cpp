#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "analysis.hpp"
#include "workload.hpp"

namespace layercache {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Doubling stops here; beyond it every term is 1 to double precision.
constexpr double kMaxTime = 1e200;
constexpr int kMaxBisections = 400;

// Probability that a unit has been requested by time t.
double touched(double prob, double t, ClockMode mode) noexcept {
  if (prob <= 0.0) return 0.0;
  if (mode == ClockMode::kPoisson) return t <= 0.0 ? 0.0 : -std::expm1(-prob * t);
  if (t <= 1.0) return 0.0;
  if (prob >= 1.0) return 1.0;
  return -std::expm1((t - 1.0) * std::log1p(-prob));
}

struct UnitSet {
  std::vector<double> size;
  std::vector<double> prob;
  std::vector<std::uint8_t> included;

  double working_set(double t, ClockMode mode) const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < size.size(); ++i) {
      if (included[i]) sum += size[i] * touched(prob[i], t, mode);
    }
    return sum;
  }

  double reachable() const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < size.size(); ++i) {
      if (included[i] && prob[i] > 0.0) sum += size[i];
    }
    return sum;
  }
};

struct FixedPoint {
  double time = kInf;
  double residual = 0.0;
};

FixedPoint solve(const UnitSet& units, double capacity, ClockMode mode, double tol) {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) {
    throw InvalidArgument("working-set approximation: capacity must be positive and finite");
  }
  if (!(tol > 0.0)) throw InvalidArgument("working-set approximation: tolerance must be positive");
  if (capacity >= units.reachable()) return {};

  double lo = mode == ClockMode::kDiscrete ? 1.0 : 0.0;
  double hi = mode == ClockMode::kDiscrete ? 2.0 : 1.0;
  while (units.working_set(hi, mode) < capacity) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxTime) return {kInf, capacity - units.working_set(lo, mode)};
  }
  for (int i = 0; i < kMaxBisections && hi - lo > tol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (units.working_set(mid, mode) < capacity) lo = mid; else hi = mid;
  }
  const double t = 0.5 * (lo + hi);
  return {t, std::abs(capacity - units.working_set(t, mode))};
}

UnitSet layer_units(const Catalog& catalog, ClockMode mode) {
  const auto& pop = catalog.popularity();
  const auto& prob = mode == ClockMode::kDiscrete ? pop.layer_prob : pop.layer_rate;
  UnitSet units;
  const auto sizes = catalog.layer_sizes().values();
  units.size.assign(sizes.begin(), sizes.end());
  units.prob.assign(prob.values().begin(), prob.values().end());
  units.included.assign(units.size.size(), 1);
  return units;
}

ApproxSolution finish(const Catalog& catalog, UnitSet units, double capacity, ClockMode mode,
                      bool layered, FixedPoint fp) {
  const std::size_t D = catalog.objects();
  const std::size_t V = catalog.versions();
  ApproxSolution out;
  out.capacity = capacity;
  out.mode = mode;
  out.layered = layered;
  out.characteristic_time = fp.time;
  out.residual = fp.residual;
  out.unit_prob = Table<double>(D, V, std::move(units.prob));
  out.unit_size = Table<double>(D, V, std::move(units.size));
  out.hit_prob = Table<double>(D, V, 0.0);
  const auto& q = catalog.popularity().version_prob;
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t l = 0; l < V; ++l) {
      const double p = out.unit_prob(d, l);
      out.hit_prob(d, l) = p <= 0.0 ? 0.0 : out.unbounded() ? 1.0 : touched(p, fp.time, mode);
      out.hit_rate += q(d, l) * out.hit_prob(d, l);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(ClockMode mode) {
  return mode == ClockMode::kDiscrete ? "discrete" : "poisson";
}

ClockMode clock_mode_from_string(std::string_view name) {
  if (name == "discrete" || name == "discrete-bernoulli") return ClockMode::kDiscrete;
  if (name == "poisson" || name == "continuous-poisson") return ClockMode::kPoisson;
  throw ConfigError(fmt::format("unknown clock mode \"{}\"", name));
}

double expected_working_set(const Catalog& catalog, double t, ClockMode mode) {
  return layer_units(catalog, mode).working_set(t, mode);
}

ApproxSolution solve_characteristic_time(const Catalog& catalog, double capacity, ClockMode mode,
                                         double tol) {
  auto units = layer_units(catalog, mode);
  const auto fp = solve(units, capacity, mode, tol);
  return finish(catalog, std::move(units), capacity, mode, true, fp);
}

PerUnitSolution per_unit_characteristic_time(const Catalog& catalog, double capacity,
                                             std::size_t d, std::size_t l, ClockMode mode,
                                             double tol) {
  if (d >= catalog.objects() || l >= catalog.versions()) {
    throw InvalidArgument("per_unit_characteristic_time: index out of range");
  }
  auto units = layer_units(catalog, mode);
  const std::size_t V = catalog.versions();
  for (std::size_t k = l; k < V; ++k) units.included[d * V + k] = 0;
  const auto fp = solve(units, capacity, mode, tol);
  const double p = units.prob[d * V + l];
  PerUnitSolution out;
  out.characteristic_time = fp.time;
  out.hit_prob = p <= 0.0 ? 0.0 : fp.time == kInf ? 1.0 : touched(p, fp.time, mode);
  return out;
}

ApproxSolution mr_approximation(const Catalog& catalog, double capacity, ClockMode mode,
                                double tol) {
  if (!catalog.has_mr_sizes()) throw ConfigError("mr_size: MR approximation needs MR sizes");
  const auto& pop = catalog.popularity();
  UnitSet units;
  const auto sizes = catalog.mr_sizes()->values();
  units.size.assign(sizes.begin(), sizes.end());
  const auto probs = mode == ClockMode::kDiscrete ? pop.version_prob.values() : catalog.rates().values();
  units.prob.assign(probs.begin(), probs.end());
  units.included.assign(units.size.size(), 1);
  const auto fp = solve(units, capacity, mode, tol);
  return finish(catalog, std::move(units), capacity, mode, false, fp);
}

void write_approx_csv(const ApproxSolution& solution, std::ostream& out) {
  fmt::print(out, "# B={:.10g},mode={},t_star={:.10g},residual={:.10g}\n", solution.capacity,
             to_string(solution.mode), solution.characteristic_time, solution.residual);
  fmt::print(out, "d,{},p,delta,hit_prob\n", solution.layered ? "l" : "v");
  for (std::size_t d = 0; d < solution.hit_prob.rows(); ++d) {
    for (std::size_t l = 0; l < solution.hit_prob.cols(); ++l) {
      fmt::print(out, "{},{},{:.10g},{:.10g},{:.10g}\n", d + 1, l + 1, solution.unit_prob(d, l),
                 solution.unit_size(d, l), solution.hit_prob(d, l));
    }
  }
}

double variance_bound(std::size_t objects, std::size_t versions, double delta_max) {
  if (objects == 0 || versions == 0) throw InvalidArgument("variance_bound: D, V must be >= 1");
  if (!(delta_max > 0.0)) throw InvalidArgument("variance_bound: delta_max must be positive");
  const double dv = static_cast<double>(objects) * static_cast<double>(versions);
  return (dv / 4.0 + dv * static_cast<double>(versions - 1)) * delta_max * delta_max;
}

WorkingSetSample sample_working_set_variance(const Catalog& catalog, std::size_t t,
                                             std::size_t replications, std::uint64_t seed) {
  if (replications < 2) throw InvalidArgument("working-set sampling needs >= 2 replications");
  if (t < 1) throw InvalidArgument("working-set sampling: t must be >= 1");
  const auto weights = catalog.popularity().version_prob.values();
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  Rng rng(seed);
  const std::size_t D = catalog.objects();
  const std::size_t V = catalog.versions();
  std::vector<std::uint32_t> top(D);

  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < replications; ++r) {
    std::fill(top.begin(), top.end(), 0);
    for (std::size_t slot = 1; slot < t; ++slot) {
      const auto cell = pick(rng);
      auto& layers = top[cell / V];
      layers = std::max<std::uint32_t>(layers, static_cast<std::uint32_t>(cell % V + 1));
    }
    double size = 0.0;
    for (std::size_t d = 0; d < D; ++d) size += catalog.lr_prefix(d, top[d]);
    const double delta = size - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (size - mean);
  }
  return {t, replications, mean, m2 / static_cast<double>(replications - 1)};
}

}  // namespace layercache
