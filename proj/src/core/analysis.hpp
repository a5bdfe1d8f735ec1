#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string_view>

#include "catalog.hpp"

namespace layercache {

// Discrete: time slots with one Bernoulli(p) request per unit per slot.
// Poisson: continuous time with per-unit rates gamma.
enum class ClockMode { kDiscrete, kPoisson };

std::string_view to_string(ClockMode mode);
ClockMode clock_mode_from_string(std::string_view name);

// Working-set (characteristic time) approximation of an LRU-type cache.
struct ApproxSolution {
  double capacity = 0.0;
  ClockMode mode = ClockMode::kDiscrete;
  // +inf when the whole requested catalog fits.
  double characteristic_time = std::numeric_limits<double>::infinity();
  double residual = 0.0;  // |B - expected working set at t*|
  bool layered = true;    // rows are LR layers (true) or MR versions (false)
  Table<double> unit_prob;  // p(d,l) (discrete) or gamma(d,l) (Poisson) per unit
  Table<double> unit_size;  // delta(d,l) or s_MR(d,v)
  Table<double> hit_prob;   // h per unit
  // Request-weighted hit ratio sum_{d,v} q(d,v) h(d,v); with LR, version v
  // hits exactly when layer v does.
  double hit_rate = 0.0;

  bool unbounded() const noexcept { return characteristic_time == std::numeric_limits<double>::infinity(); }
};

// Expected LR working-set size at time t: sum delta(d,l) (1 - (1-p)^(t-1))
// (discrete) or sum delta(d,l) (1 - exp(-gamma t)) (Poisson).
double expected_working_set(const Catalog& catalog, double t, ClockMode mode);

// Solves B = expected_working_set(t*) by doubling then bisection to relative
// tolerance `tol` on t*, and evaluates the per-layer hit probabilities.
ApproxSolution solve_characteristic_time(const Catalog& catalog, double capacity, ClockMode mode,
                                         double tol = 1e-9);

struct PerUnitSolution {
  double characteristic_time = std::numeric_limits<double>::infinity();
  double hit_prob = 0.0;
};

// Fixed point with layers l.. of object d excluded from the working set,
// and the resulting hit probability of layer (d, l).
PerUnitSolution per_unit_characteristic_time(const Catalog& catalog, double capacity,
                                             std::size_t d, std::size_t l,
                                             ClockMode mode = ClockMode::kDiscrete,
                                             double tol = 1e-9);

// Same machinery with every MR version as an independent unit of size
// s_MR(d, v) requested with probability q(d, v).
ApproxSolution mr_approximation(const Catalog& catalog, double capacity, ClockMode mode,
                                double tol = 1e-9);

// CSV: a "# B=..,mode=..,t_star=..,residual=.." line, then columns
// d,l,p,delta,hit_prob with one-based indices.
void write_approx_csv(const ApproxSolution& solution, std::ostream& out);

// (D V / 4 + D V (V - 1)) delta_max^2
double variance_bound(std::size_t objects, std::size_t versions, double delta_max);

struct WorkingSetSample {
  std::size_t horizon = 0;  // t: the working set covers t-1 request slots
  std::size_t replications = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
};

// Monte Carlo of the LR working set after t-1 IRM requests. A request for
// (d, v) touches every layer <= v, so per replication the working set is the
// LR size of the highest version requested for each object.
WorkingSetSample sample_working_set_variance(const Catalog& catalog, std::size_t t,
                                             std::size_t replications, std::uint64_t seed);

}  // namespace layercache
