#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "catalog.hpp"

namespace layercache {

// Increasing shape on [0,1] with cdf(0) = 0, cdf(1) = 1 and its derivative.
struct Shape {
  std::string label;
  std::function<double(double)> cdf;
  std::function<double(double)> density;

  static Shape uniform();
  // x^(1-s), 0 <= s < 1: popularity concentrated near 0 as s grows.
  static Shape power(double s);
  // ln(1 + a x) / ln(1 + a), a > 0: smooth Zipf-like head.
  static Shape logarithmic(double a);
};

// Popularity and size fields for a catalog scaled in D with V fixed:
// q(d, v) = (F(d/D) - F((d-1)/D)) g(v; d/D), delta(d, l) = Delta(d/D, l).
struct FixedVersionModel {
  Shape popularity;  // F
  std::size_t versions = 1;
  // g(v; x) for zero-based v; must sum to 1 over v for every x.
  std::function<double(std::size_t, double)> version_weight;
  // Delta(x, l) for zero-based l.
  std::function<double(double, std::size_t)> layer_size;

  double layer_mass(double x, std::size_t l) const;  // sum_{v >= l} g(v; x)
  void validate() const;
};

// Scaled in both D and V: q(d, v) = (F(d/D) - F((d-1)/D)) (G(v/V) - G((v-1)/V)),
// delta(d, l) = Delta(d/D, l/V).
struct ContinuumModel {
  Shape popularity;  // F
  Shape version;     // G
  std::function<double(double, double)> layer_size;  // Delta(x, y)

  void validate() const;
};

// Exponent used in the (D, V) limit. kSuffix uses the suffix mass 1 - G(y),
// which is what the finite-D, V layer probabilities converge to; kDensity
// uses G'(y).
enum class LayerMass { kSuffix, kDensity };

std::string_view to_string(LayerMass mass);
LayerMass layer_mass_from_string(std::string_view name);

class FixedVersionLimit {
 public:
  FixedVersionLimit(FixedVersionModel model, double b, double tau);
  double b() const noexcept { return b_; }
  double tau() const noexcept { return tau_; }
  // 1 - exp(-tau F'(x) sum_{v >= l} g(v; x)), zero-based l.
  double hit_prob(double x, std::size_t l) const;
  const FixedVersionModel& model() const noexcept { return model_; }

 private:
  FixedVersionModel model_;
  double b_;
  double tau_;
};

class ContinuumLimit {
 public:
  ContinuumLimit(ContinuumModel model, LayerMass mass, double b, double tau);
  double b() const noexcept { return b_; }
  double tau() const noexcept { return tau_; }
  LayerMass mass() const noexcept { return mass_; }
  double hit_prob(double x, double y) const;
  const ContinuumModel& model() const noexcept { return model_; }

 private:
  ContinuumModel model_;
  LayerMass mass_;
  double b_;
  double tau_;
};

// Per-object occupancy of the limit cache at scaled time tau:
// integral of sum_l Delta(x, l) (1 - exp(-tau F'(x) sum_{v >= l} g(v; x))).
double fixed_version_occupancy(const FixedVersionModel& model, double tau, double quad_tol = 1e-8);
double fixed_version_total_mass(const FixedVersionModel& model, double quad_tol = 1e-8);

// Solves occupancy(tau) = b by bracketing and bisection; b must lie strictly
// between 0 and the reachable mass.
FixedVersionLimit asymptotic_hit_fixed_versions(const FixedVersionModel& model, double b,
                                                double quad_tol = 1e-8);

double continuum_occupancy(const ContinuumModel& model, LayerMass mass, double tau,
                           double quad_tol = 1e-8);
double continuum_total_mass(const ContinuumModel& model, double quad_tol = 1e-8);

ContinuumLimit asymptotic_hit_continuum(const ContinuumModel& model, double b,
                                        LayerMass mass = LayerMass::kSuffix,
                                        double quad_tol = 1e-8);

// Finite catalogs sampled from the models; rates are the probabilities q.
Catalog fixed_version_catalog(const FixedVersionModel& model, std::size_t objects);
Catalog continuum_catalog(const ContinuumModel& model, std::size_t objects, std::size_t versions);

}  // namespace layercache
