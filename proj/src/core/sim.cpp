#include "sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

namespace layercache {

SimReport::SimReport(std::string policy_name, double capacity_, std::size_t objects,
                     std::size_t versions)
    : policy(std::move(policy_name)),
      capacity(capacity_),
      requests(objects, versions, 0),
      hits(objects, versions, 0),
      layer_requests(objects, versions, 0),
      layer_hits(objects, versions, 0) {}

std::uint64_t SimReport::total_requests() const noexcept {
  std::uint64_t sum = 0;
  for (auto r : requests.values()) sum += r;
  return sum;
}

std::uint64_t SimReport::total_hits() const noexcept {
  std::uint64_t sum = 0;
  for (auto h : hits.values()) sum += h;
  return sum;
}

double SimReport::hit_rate() const noexcept {
  const auto n = total_requests();
  return n == 0 ? 0.0 : static_cast<double>(total_hits()) / static_cast<double>(n);
}

std::optional<double> SimReport::hit_prob(std::size_t d, std::size_t v) const {
  const auto n = requests.at(d, v);
  if (n == 0) return std::nullopt;
  return static_cast<double>(hits(d, v)) / static_cast<double>(n);
}

std::optional<double> SimReport::layer_hit_prob(std::size_t d, std::size_t l) const {
  const auto n = layer_requests.at(d, l);
  if (n == 0) return std::nullopt;
  return static_cast<double>(layer_hits(d, l)) / static_cast<double>(n);
}

void SimReport::merge(const SimReport& other) {
  if (other.requests.rows() != requests.rows() || other.requests.cols() != requests.cols()) {
    throw InvalidArgument("SimReport::merge: shape mismatch");
  }
  const auto add = [](Table<std::uint64_t>& into, const Table<std::uint64_t>& from) {
    auto dst = into.values();
    auto src = from.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  };
  add(requests, other.requests);
  add(hits, other.hits);
  add(layer_requests, other.layer_requests);
  add(layer_hits, other.layer_hits);
  bypassed += other.bypassed;
  bytes_evicted += other.bytes_evicted;
  trace_length += other.trace_length;
  warmup += other.warmup;
}

SimReport run_policy(Policy& policy, const Catalog& catalog, const Trace& trace,
                     const SimOptions& options) {
  if (!(options.warmup_fraction >= 0.0 && options.warmup_fraction < 1.0)) {
    throw InvalidArgument("warmup_fraction must be in [0, 1)");
  }
  const std::size_t D = catalog.objects();
  const std::size_t V = catalog.versions();
  SimReport report(std::string(policy.name()), policy.state().capacity(), D, V);
  report.trace_length = trace.size();
  report.warmup = static_cast<std::size_t>(options.warmup_fraction * static_cast<double>(trace.size()));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Request r = trace.entries[i];
    if (r.object >= D || r.version >= V) throw InvalidArgument("trace request outside the catalog");
    const auto result = policy.access(r);
    if (options.check_every != 0 && (i + 1) % options.check_every == 0) policy.check_invariants();
    if (i < report.warmup) continue;
    ++report.requests(r.object, r.version);
    if (result.hit) ++report.hits(r.object, r.version);
    for (std::size_t l = 0; l <= r.version; ++l) {
      ++report.layer_requests(r.object, l);
      if (l < result.layers_present) ++report.layer_hits(r.object, l);
    }
    if (result.bypassed) ++report.bypassed;
    report.bytes_evicted += result.bytes_evicted;
  }
  return report;
}

SimReport run_simulation(std::string_view policy, const Catalog& catalog, double capacity,
                         const Trace& trace, const SimOptions& options) {
  auto instance = make_policy(policy, catalog, capacity, &trace, options.policy);
  return run_policy(*instance, catalog, trace, options);
}

ReplicationSummary summarize(std::vector<SimReport> runs) {
  if (runs.empty()) throw InvalidArgument("summarize: no replications");
  ReplicationSummary out;
  out.policy = runs.front().policy;
  out.capacity = runs.front().capacity;
  out.replications = runs.size();
  out.combined = runs.front();
  for (std::size_t i = 1; i < runs.size(); ++i) out.combined.merge(runs[i]);
  double sum = 0.0;
  for (const auto& r : runs) sum += r.hit_rate();
  const double n = static_cast<double>(runs.size());
  out.mean_hit_rate = sum / n;
  if (runs.size() >= 2) {
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.hit_rate() - out.mean_hit_rate) * (r.hit_rate() - out.mean_hit_rate);
    out.stderr_hit_rate = std::sqrt(ss / (n - 1.0) / n);
  }
  out.runs = std::move(runs);
  return out;
}

ReplicationSummary replicate(std::string_view policy, const Catalog& catalog, double capacity,
                             std::size_t n, std::span<const std::uint64_t> seeds,
                             const SimOptions& options) {
  if (seeds.empty()) throw InvalidArgument("replicate: at least one seed is required");
  if (!is_policy_name(policy)) throw ConfigError(fmt::format("unknown policy \"{}\"", policy));
  std::vector<SimReport> runs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    const auto trace = sample_trace(catalog.popularity(), n, seeds[i]);
    runs[i] = run_simulation(policy, catalog, capacity, trace, options);
    runs[i].seed = seeds[i];
  });
  return summarize(std::move(runs));
}

std::vector<SweepCell> sweep(std::span<const std::string> policies,
                             std::span<const ScenarioCatalog> scenarios,
                             std::span<const double> capacities, std::size_t n,
                             std::span<const std::uint64_t> seeds, const SimOptions& options) {
  if (seeds.empty()) throw InvalidArgument("sweep: at least one seed is required");
  for (const auto& p : policies) {
    if (!is_policy_name(p)) throw ConfigError(fmt::format("unknown policy \"{}\"", p));
  }
  std::vector<SweepCell> cells;
  const std::size_t per_scenario = capacities.size() * policies.size();
  for (const auto& scenario : scenarios) {
    std::vector<Trace> traces(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t s) {
      traces[s] = sample_trace(scenario.catalog.popularity(), n, seeds[s]);
    });
    std::vector<SimReport> reports(per_scenario * seeds.size());
    parallel_for(reports.size(), [&](std::size_t task) {
      const std::size_t s = task % seeds.size();
      const std::size_t cell = task / seeds.size();
      const double capacity = capacities[cell / policies.size()];
      const auto& policy = policies[cell % policies.size()];
      reports[task] = run_simulation(policy, scenario.catalog, capacity, traces[s], options);
      reports[task].seed = seeds[s];
    });
    for (std::size_t cell = 0; cell < per_scenario; ++cell) {
      std::vector<SimReport> runs(std::make_move_iterator(reports.begin() + cell * seeds.size()),
                                  std::make_move_iterator(reports.begin() + (cell + 1) * seeds.size()));
      cells.push_back({scenario.id, policies[cell % policies.size()],
                       capacities[cell / policies.size()], summarize(std::move(runs))});
    }
  }
  return cells;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("LAYERCACHE_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace layercache
