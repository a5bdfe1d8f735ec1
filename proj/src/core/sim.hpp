#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "policies.hpp"
#include "workload.hpp"

namespace layercache {

// Hit statistics of one trace replay.
struct SimReport {
  std::string policy;
  double capacity = 0.0;
  std::uint64_t seed = 0;
  std::size_t trace_length = 0;  // N, including warmup
  std::size_t warmup = 0;        // leading requests not counted
  Table<std::uint64_t> requests;  // per (d, v)
  Table<std::uint64_t> hits;
  // Presence hits: a request for v counts a request for every layer l <= v
  // and a hit for each of those layers resident before the access.
  Table<std::uint64_t> layer_requests;
  Table<std::uint64_t> layer_hits;
  std::uint64_t bypassed = 0;
  double bytes_evicted = 0.0;

  SimReport() = default;
  SimReport(std::string policy, double capacity, std::size_t objects, std::size_t versions);

  std::uint64_t total_requests() const noexcept;
  std::uint64_t total_hits() const noexcept;
  // Hits over counted requests; 0 for an empty report.
  double hit_rate() const noexcept;
  // Absent when the cell saw no requests.
  std::optional<double> hit_prob(std::size_t d, std::size_t v) const;
  std::optional<double> layer_hit_prob(std::size_t d, std::size_t l) const;

  // Adds the counts of `other` (same shape).
  void merge(const SimReport& other);
};

struct SimOptions {
  double warmup_fraction = 0.0;
  PolicyOptions policy;
  // Run Policy::check_invariants every this many requests (0 = never).
  std::size_t check_every = 0;
};

// Cold-start replay of `trace` through a fresh policy.
SimReport run_simulation(std::string_view policy, const Catalog& catalog, double capacity,
                         const Trace& trace, const SimOptions& options = {});

// Replays `trace` through an existing policy.
SimReport run_policy(Policy& policy, const Catalog& catalog, const Trace& trace,
                     const SimOptions& options = {});

struct ReplicationSummary {
  std::string policy;
  double capacity = 0.0;
  std::size_t replications = 0;
  double mean_hit_rate = 0.0;
  // Absent with a single replication.
  std::optional<double> stderr_hit_rate;
  SimReport combined;            // counts summed over replications
  std::vector<SimReport> runs;   // one per seed, in seed order
};

ReplicationSummary summarize(std::vector<SimReport> runs);

// One independent trace of length N per seed; runs may execute concurrently.
ReplicationSummary replicate(std::string_view policy, const Catalog& catalog, double capacity,
                             std::size_t n, std::span<const std::uint64_t> seeds,
                             const SimOptions& options = {});

struct SweepCell {
  std::string scenario_id;
  std::string policy;
  double capacity = 0.0;
  ReplicationSummary summary;
};

struct ScenarioCatalog {
  std::string id;
  Catalog catalog;
};

// Cartesian sweep over scenarios x capacities x policies. Every cell of a
// scenario replays the same trace per seed (common random numbers), so
// differences between policies and budgets are not sampling noise.
std::vector<SweepCell> sweep(std::span<const std::string> policies,
                             std::span<const ScenarioCatalog> scenarios,
                             std::span<const double> capacities, std::size_t n,
                             std::span<const std::uint64_t> seeds,
                             const SimOptions& options = {});

// Worker count: LAYERCACHE_WORKERS if set to a positive integer, else the
// hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count) on worker_count() threads and rethrows
// the first exception.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace layercache
