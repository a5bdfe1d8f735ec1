#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "asymptotic.hpp"
#include "error.hpp"

namespace layercache {

namespace {

constexpr unsigned kMaxDepth = 20;
constexpr double kMaxTau = 1e12;

template <class F>
double integrate(F&& f, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 21>::integrate(f, 0.0, 1.0, kMaxDepth, tol);
}

template <class F>
double integrate2(F&& f, double tol) {
  return integrate([&](double x) { return integrate([&](double y) { return f(x, y); }, tol); },
                   tol);
}

void check_shape(const Shape& s, const char* field) {
  if (!s.cdf || !s.density) throw ConfigError(fmt::format("{}: shape needs cdf and density", field));
  if (std::abs(s.cdf(0.0)) > 1e-12 || std::abs(s.cdf(1.0) - 1.0) > 1e-12) {
    throw ConfigError(fmt::format("{}: shape must satisfy F(0) = 0 and F(1) = 1", field));
  }
}

// tau with occupancy(tau) = b, occupancy increasing from 0.
template <class Occupancy>
double solve_tau(Occupancy&& occupancy, double b, double reachable) {
  if (!(b > 0.0) || !(b < reachable)) {
    throw ConfigError(fmt::format("b: must lie in (0, {:.10g}), got {:.10g}", reachable, b));
  }
  double lo = 0.0;
  double hi = 1.0;
  while (occupancy(hi) < b) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxTau) throw ConfigError("b: too close to the total mass to resolve");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (occupancy(mid) < b) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Shape Shape::uniform() {
  return {"uniform", [](double x) { return x; }, [](double) { return 1.0; }};
}

Shape Shape::power(double s) {
  if (!(s >= 0.0 && s < 1.0)) throw ConfigError("shape.param: power exponent must be in [0, 1)");
  return {fmt::format("power({:g})", s), [s](double x) { return std::pow(x, 1.0 - s); },
          [s](double x) { return (1.0 - s) * std::pow(x, -s); }};
}

Shape Shape::logarithmic(double a) {
  if (!(a > 0.0)) throw ConfigError("shape.param: log shape needs a > 0");
  const double norm = std::log1p(a);
  return {fmt::format("log({:g})", a), [a, norm](double x) { return std::log1p(a * x) / norm; },
          [a, norm](double x) { return a / ((1.0 + a * x) * norm); }};
}

double FixedVersionModel::layer_mass(double x, std::size_t l) const {
  double sum = 0.0;
  for (std::size_t v = l; v < versions; ++v) sum += version_weight(v, x);
  return sum;
}

void FixedVersionModel::validate() const {
  check_shape(popularity, "popularity");
  if (versions == 0) throw ConfigError("versions: must be >= 1");
  if (!version_weight || !layer_size) throw ConfigError("model: g and Delta are required");
  for (int i = 0; i <= 16; ++i) {
    const double x = i / 16.0;
    double sum = 0.0;
    for (std::size_t v = 0; v < versions; ++v) {
      const double g = version_weight(v, x);
      if (!(g >= 0.0)) throw ConfigError("version_weight: must be >= 0");
      sum += g;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError(fmt::format("version_weight: sums to {:.10g} at x = {:g}", sum, x));
    }
  }
}

void ContinuumModel::validate() const {
  check_shape(popularity, "popularity");
  check_shape(version, "version");
  if (!layer_size) throw ConfigError("model: Delta is required");
}

std::string_view to_string(LayerMass mass) {
  return mass == LayerMass::kSuffix ? "suffix" : "density";
}

LayerMass layer_mass_from_string(std::string_view name) {
  if (name == "suffix") return LayerMass::kSuffix;
  if (name == "density") return LayerMass::kDensity;
  throw ConfigError(fmt::format("layer_mass: unknown variant \"{}\"", name));
}

FixedVersionLimit::FixedVersionLimit(FixedVersionModel model, double b, double tau)
    : model_(std::move(model)), b_(b), tau_(tau) {}

double FixedVersionLimit::hit_prob(double x, std::size_t l) const {
  return -std::expm1(-tau_ * model_.popularity.density(x) * model_.layer_mass(x, l));
}

ContinuumLimit::ContinuumLimit(ContinuumModel model, LayerMass mass, double b, double tau)
    : model_(std::move(model)), mass_(mass), b_(b), tau_(tau) {}

double ContinuumLimit::hit_prob(double x, double y) const {
  const double m = mass_ == LayerMass::kSuffix ? 1.0 - model_.version.cdf(y)
                                               : model_.version.density(y);
  return -std::expm1(-tau_ * model_.popularity.density(x) * m);
}

double fixed_version_occupancy(const FixedVersionModel& model, double tau, double quad_tol) {
  return integrate(
      [&](double x) {
        const double fx = model.popularity.density(x);
        double sum = 0.0;
        double mass = 0.0;
        for (std::size_t l = model.versions; l-- > 0;) {
          mass += model.version_weight(l, x);
          sum += model.layer_size(x, l) * -std::expm1(-tau * fx * mass);
        }
        return sum;
      },
      quad_tol);
}

double fixed_version_total_mass(const FixedVersionModel& model, double quad_tol) {
  return integrate(
      [&](double x) {
        double sum = 0.0;
        double mass = 0.0;
        for (std::size_t l = model.versions; l-- > 0;) {
          mass += model.version_weight(l, x);
          if (mass > 0.0) sum += model.layer_size(x, l);
        }
        return sum;
      },
      quad_tol);
}

FixedVersionLimit asymptotic_hit_fixed_versions(const FixedVersionModel& model, double b,
                                                double quad_tol) {
  model.validate();
  const double reachable = fixed_version_total_mass(model, quad_tol);
  const double tau = solve_tau(
      [&](double t) { return fixed_version_occupancy(model, t, quad_tol); }, b, reachable);
  return FixedVersionLimit(model, b, tau);
}

double continuum_occupancy(const ContinuumModel& model, LayerMass mass, double tau,
                           double quad_tol) {
  return integrate2(
      [&](double x, double y) {
        const double m = mass == LayerMass::kSuffix ? 1.0 - model.version.cdf(y)
                                                    : model.version.density(y);
        return model.layer_size(x, y) * -std::expm1(-tau * model.popularity.density(x) * m);
      },
      quad_tol);
}

double continuum_total_mass(const ContinuumModel& model, double quad_tol) {
  return integrate2([&](double x, double y) { return model.layer_size(x, y); }, quad_tol);
}

ContinuumLimit asymptotic_hit_continuum(const ContinuumModel& model, double b, LayerMass mass,
                                        double quad_tol) {
  model.validate();
  const double reachable = continuum_total_mass(model, quad_tol);
  const double tau = solve_tau(
      [&](double t) { return continuum_occupancy(model, mass, t, quad_tol); }, b, reachable);
  return ContinuumLimit(model, mass, b, tau);
}

Catalog fixed_version_catalog(const FixedVersionModel& model, std::size_t objects) {
  model.validate();
  if (objects == 0) throw ConfigError("objects: must be >= 1");
  const std::size_t V = model.versions;
  Table<double> sizes(objects, V);
  Table<double> rates(objects, V);
  const double D = static_cast<double>(objects);
  for (std::size_t i = 0; i < objects; ++i) {
    const double x = static_cast<double>(i + 1) / D;
    const double mass = model.popularity.cdf(x) - model.popularity.cdf(static_cast<double>(i) / D);
    for (std::size_t l = 0; l < V; ++l) {
      sizes(i, l) = model.layer_size(x, l);
      rates(i, l) = mass * model.version_weight(l, x);
    }
  }
  return Catalog(std::move(sizes), std::move(rates));
}

Catalog continuum_catalog(const ContinuumModel& model, std::size_t objects, std::size_t versions) {
  model.validate();
  if (objects == 0 || versions == 0) throw ConfigError("objects, versions: must be >= 1");
  Table<double> sizes(objects, versions);
  Table<double> rates(objects, versions);
  const double D = static_cast<double>(objects);
  const double V = static_cast<double>(versions);
  for (std::size_t i = 0; i < objects; ++i) {
    const double x = static_cast<double>(i + 1) / D;
    const double fmass = model.popularity.cdf(x) - model.popularity.cdf(static_cast<double>(i) / D);
    for (std::size_t l = 0; l < versions; ++l) {
      const double y = static_cast<double>(l + 1) / V;
      sizes(i, l) = model.layer_size(x, y);
      rates(i, l) = fmass * (model.version.cdf(y) - model.version.cdf(static_cast<double>(l) / V));
    }
  }
  return Catalog(std::move(sizes), std::move(rates));
}

}  // namespace layercache
