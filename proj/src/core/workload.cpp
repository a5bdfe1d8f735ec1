#include "workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

namespace layercache {

std::vector<double> zipf_object_popularity(std::size_t objects, double exponent) {
  if (objects == 0) throw InvalidArgument("zipf: need at least one object");
  if (!(exponent >= 0.0)) throw InvalidArgument("zipf: exponent must be >= 0");
  std::vector<double> q(objects);
  for (std::size_t d = 0; d < objects; ++d) q[d] = std::pow(static_cast<double>(d + 1), -exponent);
  const double norm = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& x : q) x /= norm;
  return q;
}

std::vector<double> split_versions_from_cuts(double q_d, std::vector<double> cuts) {
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> parts;
  parts.reserve(cuts.size() + 1);
  double previous = 0.0;
  for (double c : cuts) {
    if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("split: cut points must lie in (0,1)");
    parts.push_back((c - previous) * q_d);
    previous = c;
  }
  parts.push_back((1.0 - previous) * q_d);
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return parts;
}

std::vector<double> split_versions_uniform_decreasing(double q_d, std::size_t versions, Rng& rng) {
  if (!(q_d > 0.0)) throw InvalidArgument("split: q_d must be positive");
  if (versions == 0) throw InvalidArgument("split: need at least one version");
  // Open interval: reject exact zeros so every part stays positive.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cuts;
  cuts.reserve(versions - 1);
  while (cuts.size() + 1 < versions) {
    const double u = unit(rng);
    if (u > 0.0) cuts.push_back(u);
  }
  return split_versions_from_cuts(q_d, std::move(cuts));
}

std::vector<double> split_versions_two(double q_d, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must be in [0,1]");
  return {alpha * q_d, (1.0 - alpha) * q_d};
}

std::vector<double> split_versions_three(double q_d, double zeta, double eta) {
  if (!(zeta >= 0.0 && eta >= 0.0 && zeta + eta <= 1.0 + 1e-12)) {
    throw InvalidArgument("zeta, eta must be >= 0 with zeta + eta <= 1");
  }
  return {zeta * q_d, eta * q_d, std::max(0.0, 1.0 - zeta - eta) * q_d};
}

std::vector<double> parametric_version_popularity(std::size_t versions, double m) {
  if (versions == 0) throw InvalidArgument("need at least one version");
  std::vector<double> w(versions);
  for (std::size_t v = 0; v < versions; ++v) {
    w[v] = std::pow(static_cast<double>(versions - v), m);
  }
  const double norm = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= norm;
  return w;
}

std::vector<double> parametric_layer_sizes(std::size_t versions, double n) {
  if (versions == 0) throw InvalidArgument("need at least one version");
  std::vector<double> w(versions);
  for (std::size_t l = 0; l < versions; ++l) w[l] = std::pow(static_cast<double>(l + 1), n);
  const double norm = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= norm;
  return w;
}

std::vector<double> composition_from_cuts(std::uint64_t total, std::vector<std::uint64_t> cuts) {
  std::sort(cuts.begin(), cuts.end());
  if (std::adjacent_find(cuts.begin(), cuts.end()) != cuts.end()) {
    throw InvalidArgument("composition: cut points must be distinct");
  }
  std::vector<double> parts;
  parts.reserve(cuts.size() + 1);
  std::uint64_t previous = 0;
  for (auto c : cuts) {
    if (c == 0 || c >= total) throw InvalidArgument("composition: cut points must be in 1..total-1");
    parts.push_back(static_cast<double>(c - previous));
    previous = c;
  }
  parts.push_back(static_cast<double>(total - previous));
  return parts;
}

std::vector<double> random_layer_sizes(std::size_t versions, std::uint64_t total, Rng& rng) {
  if (versions == 0) throw InvalidArgument("need at least one version");
  if (total < versions) {
    throw InvalidArgument(fmt::format("random_layer_sizes: total {} < versions {}", total, versions));
  }
  std::vector<std::uint64_t> cuts;
  cuts.reserve(versions - 1);
  std::vector<std::uint64_t> pool(total - 1);
  std::iota(pool.begin(), pool.end(), std::uint64_t{1});
  std::sample(pool.begin(), pool.end(), std::back_inserter(cuts),
              static_cast<std::ptrdiff_t>(versions - 1), rng);
  return composition_from_cuts(total, std::move(cuts));
}

Trace sample_trace(const DerivedPopularity& popularity, std::size_t n, std::uint64_t seed,
                   bool timestamps) {
  if (n == 0) throw InvalidArgument("sample_trace: N must be >= 1");
  const auto& q = popularity.version_prob;
  const auto weights = q.values();
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  Rng rng(seed);
  Trace trace;
  trace.entries.reserve(n);
  const auto V = q.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const auto cell = pick(rng);
    trace.entries.push_back(
        {static_cast<std::uint32_t>(cell / V), static_cast<std::uint32_t>(cell % V)});
  }
  if (timestamps) {
    // Separate stream so the request sequence is identical with or without times.
    Rng clock(seed ^ 0xA5A5A5A5A5A5A5A5ULL);
    std::exponential_distribution<double> gap(popularity.total_rate);
    trace.times.reserve(n);
    double now = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      now += gap(clock);
      trace.times.push_back(now);
    }
  }
  return trace;
}

void save_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file " + path);
  for (const auto& r : trace.entries) out << r.object + 1 << ',' << r.version + 1 << '\n';
}

Trace load_trace(const std::string& path, std::size_t objects, std::size_t versions) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file " + path);
  Trace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    long long d = 0;
    long long v = 0;
    char comma = 0;
    if (!(fields >> d >> comma >> v) || comma != ',') {
      throw ConfigError(fmt::format("{}:{}: expected \"d,v\"", path, lineno));
    }
    if (d < 1 || v < 1 || static_cast<std::size_t>(d) > objects ||
        static_cast<std::size_t>(v) > versions) {
      throw ConfigError(fmt::format("{}:{}: request ({}, {}) out of range", path, lineno, d, v));
    }
    trace.entries.push_back(
        {static_cast<std::uint32_t>(d - 1), static_cast<std::uint32_t>(v - 1)});
  }
  return trace;
}

}  // namespace layercache
