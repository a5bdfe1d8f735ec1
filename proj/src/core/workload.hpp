#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "catalog.hpp"

namespace layercache {

using Rng = std::mt19937_64;

// One request for version `version` of object `object` (both zero-based).
struct Request {
  std::uint32_t object = 0;
  std::uint32_t version = 0;
  friend bool operator==(const Request&, const Request&) = default;
};

struct Trace {
  std::vector<Request> entries;
  // Arrival times, only filled when Poisson timestamps were requested.
  std::vector<double> times;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
};

// q(d) proportional to (d+1)^-exponent, normalized.
std::vector<double> zipf_object_popularity(std::size_t objects, double exponent);

// Splits q_d over V versions as a uniform point of the simplex, sorted
// descending. The overload taking explicit cut points in (0,1) is the
// deterministic core of the sampler.
std::vector<double> split_versions_uniform_decreasing(double q_d, std::size_t versions, Rng& rng);
std::vector<double> split_versions_from_cuts(double q_d, std::vector<double> cuts);

std::vector<double> split_versions_two(double q_d, double alpha);
std::vector<double> split_versions_three(double q_d, double zeta, double eta);

// (V-v)^m / sum_i i^m for zero-based v.
std::vector<double> parametric_version_popularity(std::size_t versions, double m);
// (l+1)^n / sum_i i^n for zero-based l.
std::vector<double> parametric_layer_sizes(std::size_t versions, double n);

// Uniform random composition of `total` into V integer parts >= 1.
std::vector<double> random_layer_sizes(std::size_t versions, std::uint64_t total, Rng& rng);
std::vector<double> composition_from_cuts(std::uint64_t total, std::vector<std::uint64_t> cuts);

// N i.i.d. IRM draws from q(d, v). With `timestamps`, arrival times of a
// Poisson process of the catalog's total rate are attached.
Trace sample_trace(const DerivedPopularity& popularity, std::size_t n, std::uint64_t seed,
                   bool timestamps = false);

// Newline-delimited "d,v" records with one-based indices.
void save_trace(const Trace& trace, const std::string& path);
Trace load_trace(const std::string& path, std::size_t objects, std::size_t versions);

}  // namespace layercache
