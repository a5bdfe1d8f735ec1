#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "catalog.hpp"
#include "error.hpp"
#include "oracles.hpp"
#include "workload.hpp"

using namespace layercache;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("zipf popularity") {
  CHECK(zipf_object_popularity(1, 0.8) == std::vector<double>{1.0});
  for (double q : zipf_object_popularity(3, 0.0)) CHECK(q == doctest::Approx(1.0 / 3));
  const auto q = zipf_object_popularity(2, 0.8);
  const double w = std::pow(2.0, -0.8);
  CHECK(q[0] == doctest::Approx(1.0 / (1.0 + w)));
  CHECK(q[1] == doctest::Approx(w / (1.0 + w)));
  CHECK_THROWS_AS(zipf_object_popularity(0, 0.8), InvalidArgument);
}

TEST_CASE("uniform decreasing split") {
  Rng rng(1);
  CHECK(split_versions_uniform_decreasing(0.4, 1, rng) == std::vector<double>{0.4});
  const auto two = split_versions_from_cuts(2.0, {0.3});
  CHECK(two[0] == doctest::Approx(1.4));
  CHECK(two[1] == doctest::Approx(0.6));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng r(seed);
    const auto parts = split_versions_uniform_decreasing(0.05, 4, r);
    REQUIRE(parts.size() == 4);
    CHECK(sum(parts) == doctest::Approx(0.05).epsilon(1e-12));
    for (std::size_t v = 0; v + 1 < parts.size(); ++v) CHECK(parts[v] > parts[v + 1]);
  }
}

TEST_CASE("two- and three-way splits") {
  CHECK(split_versions_two(0.2, 1.0) == std::vector<double>{0.2, 0.0});
  const auto half = split_versions_two(0.2, 0.5);
  CHECK(half[0] == half[1]);
  const auto skew = split_versions_two(1.0, 0.99);
  CHECK(skew[0] == doctest::Approx(0.99));
  CHECK(skew[1] == doctest::Approx(0.01));
  CHECK_THROWS_AS(split_versions_two(1.0, 1.2), InvalidArgument);

  CHECK(split_versions_three(1.0, 1.0, 0.0) == std::vector<double>{1.0, 0.0, 0.0});
  const auto peak = split_versions_three(2.0, 0.8, 0.1);
  CHECK(peak[0] == doctest::Approx(1.6));
  CHECK(peak[1] == doctest::Approx(0.2));
  CHECK(peak[2] == doctest::Approx(0.2));
  for (double x : split_versions_three(1.0, 1.0 / 3, 1.0 / 3)) CHECK(x == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(split_versions_three(1.0, 0.7, 0.5), InvalidArgument);
}

TEST_CASE("parametric profiles") {
  for (double q : parametric_version_popularity(5, 0.0)) CHECK(q == doctest::Approx(0.2));
  auto q = parametric_version_popularity(2, 1.0);
  CHECK(q[0] == doctest::Approx(2.0 / 3));
  CHECK(q[1] == doctest::Approx(1.0 / 3));
  q = parametric_version_popularity(3, 2.0);
  CHECK(q[0] == doctest::Approx(9.0 / 14));
  CHECK(q[1] == doctest::Approx(4.0 / 14));
  CHECK(q[2] == doctest::Approx(1.0 / 14));

  for (double d : parametric_layer_sizes(4, 0.0)) CHECK(d == doctest::Approx(0.25));
  auto delta = parametric_layer_sizes(2, 1.0);
  CHECK(delta[0] == doctest::Approx(1.0 / 3));
  CHECK(delta[1] == doctest::Approx(2.0 / 3));
  delta = parametric_layer_sizes(4, 1.0);
  for (std::size_t l = 0; l < 4; ++l) CHECK(delta[l] == doctest::Approx(0.1 * (l + 1)));

  for (std::size_t V = 1; V <= 8; ++V) {
    for (double m : {0.0, 0.5, 1.0, 2.0}) {
      const auto w = parametric_version_popularity(V, m);
      CHECK(sum(w) == doctest::Approx(1.0));
      for (std::size_t v = 0; v + 1 < V; ++v) CHECK(w[v] >= w[v + 1]);
      const auto s = parametric_layer_sizes(V, m);
      CHECK(sum(s) == doctest::Approx(1.0));
      for (std::size_t l = 0; l + 1 < V; ++l) CHECK(s[l] <= s[l + 1]);
    }
  }
}

TEST_CASE("random layer sizes are compositions") {
  Rng rng(5);
  CHECK(random_layer_sizes(1, 240, rng) == std::vector<double>{240.0});
  CHECK(composition_from_cuts(240, {120, 60, 180}) == std::vector<double>{60, 60, 60, 60});
  CHECK_THROWS_AS(composition_from_cuts(240, {60, 60}), InvalidArgument);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng r(seed);
    const auto parts = random_layer_sizes(4, 240, r);
    REQUIRE(parts.size() == 4);
    CHECK(sum(parts) == 240.0);
    for (double p : parts) {
      CHECK(p >= 1.0);
      CHECK(p == std::floor(p));
    }
  }
  CHECK_THROWS_AS(random_layer_sizes(5, 4, rng), InvalidArgument);
}

TEST_CASE("trace sampling") {
  const auto single = oracle::make_catalog(1, 2, {1, 1}, {0, 1});
  const auto trace = sample_trace(single.popularity(), 50, 9);
  for (const auto& r : trace.entries) CHECK(r == Request{0, 1});

  const auto two = oracle::make_catalog(2, 1, {1, 1}, {1, 1});
  CHECK(sample_trace(two.popularity(), 4, 42).entries == sample_trace(two.popularity(), 4, 42).entries);
  CHECK_THROWS_AS(sample_trace(two.popularity(), 0, 1), InvalidArgument);

  const auto timed = sample_trace(two.popularity(), 100, 42, true);
  CHECK(timed.entries == sample_trace(two.popularity(), 100, 42).entries);
  REQUIRE(timed.times.size() == 100);
  CHECK(std::is_sorted(timed.times.begin(), timed.times.end()));
}

TEST_CASE("empirical frequencies match q (chi-squared at 0.01)") {
  Rng rng(11);
  Table<double> size(20, 3, 1.0), rate(20, 3);
  const auto q = zipf_object_popularity(20, 0.8);
  for (std::size_t d = 0; d < 20; ++d) {
    const auto split = split_versions_uniform_decreasing(q[d], 3, rng);
    for (std::size_t v = 0; v < 3; ++v) rate(d, v) = split[v];
  }
  const Catalog c(size, rate);
  const std::size_t n = 1000000;
  for (std::uint64_t seed : {1u, 2u}) {
    const auto trace = sample_trace(c.popularity(), n, seed);
    Table<double> count(20, 3, 0.0);
    for (const auto& r : trace.entries) count(r.object, r.version) += 1.0;
    double chi2 = 0.0;
    std::size_t within = 0;
    for (std::size_t i = 0; i < 60; ++i) {
      const double p = c.popularity().version_prob.values()[i];
      const double expected = p * n;
      const double diff = count.values()[i] - expected;
      chi2 += diff * diff / expected;
      if (std::abs(diff) <= 3.0 * std::sqrt(n * p * (1 - p))) ++within;
    }
    const boost::math::chi_squared dist(59);
    CHECK(chi2 < boost::math::quantile(dist, 0.99));
    CHECK(within >= 58);
  }
}

TEST_CASE("trace files round trip with one-based indices") {
  const auto c = oracle::make_catalog(3, 2, {1, 1, 1, 1, 1, 1}, {1, 2, 3, 4, 5, 6});
  const auto trace = sample_trace(c.popularity(), 500, 3);
  const auto path = (std::filesystem::temp_directory_path() / "layercache_trace_test.txt").string();
  save_trace(trace, path);
  CHECK(load_trace(path, 3, 2).entries == trace.entries);
  CHECK_THROWS_AS(load_trace(path, 2, 2), ConfigError);
  {
    std::ofstream bad(path);
    bad << "1;2\n";
  }
  CHECK_THROWS_AS(load_trace(path, 3, 2), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_trace(path, 3, 2), IoError);
}
