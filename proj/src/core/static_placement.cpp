#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "policies.hpp"

namespace layercache {

namespace {

// Number of grid cells covering `size`, rounding up except when size is a
// grid multiple up to floating-point noise.
std::size_t cells_up(double size, double resolution) {
  const double q = size / resolution;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(q));
}

std::size_t cells_down(double size, double resolution) {
  const double q = size / resolution;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::floor(q));
}

}  // namespace

Placement static_optimal(const Catalog& catalog, double capacity, double resolution,
                         std::size_t memory_cap_bytes) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InvalidArgument("static_optimal: resolution must be positive");
  }
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
    throw InvalidArgument("static_optimal: capacity must be finite and >= 0");
  }
  const std::size_t D = catalog.objects();
  const std::size_t V = catalog.versions();
  if (V > std::numeric_limits<std::uint8_t>::max()) {
    throw InvalidArgument("static_optimal: at most 255 versions supported");
  }
  const double cells_real = capacity / resolution;
  if (cells_real > 1e12) {
    throw ResourceError("static_optimal: budget grid too large; use a coarser resolution");
  }
  const std::size_t cells = cells_down(capacity, resolution);
  const double table_bytes = static_cast<double>(D) * static_cast<double>(cells + 1) +
                             2.0 * sizeof(double) * static_cast<double>(cells + 1);
  if (table_bytes > static_cast<double>(memory_cap_bytes)) {
    throw ResourceError(fmt::format(
        "static_optimal: DP table needs {:.0f} bytes (cap {}); use a coarser resolution",
        table_bytes, memory_cap_bytes));
  }

  // Option v = cache versions 0..v-1 (v layers); cost and value per option.
  Table<std::size_t> cost(D, V + 1, 0);
  Table<double> value(D, V + 1, 0.0);
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t v = 1; v <= V; ++v) {
      cost(d, v) = cells_up(catalog.lr_prefix(d, v), resolution);
      value(d, v) = value(d, v - 1) + catalog.rate(d, v - 1);
    }
  }

  std::vector<double> best(cells + 1, 0.0);
  std::vector<double> next(cells + 1, 0.0);
  std::vector<std::uint8_t> choice(D * (cells + 1), 0);
  for (std::size_t d = 0; d < D; ++d) {
    std::uint8_t* pick = choice.data() + d * (cells + 1);
    for (std::size_t c = 0; c <= cells; ++c) {
      double top = best[c];
      std::uint8_t arg = 0;
      for (std::size_t v = 1; v <= V; ++v) {
        if (cost(d, v) > c) break;  // costs are non-decreasing in v
        const double candidate = best[c - cost(d, v)] + value(d, v);
        if (candidate > top) {
          top = candidate;
          arg = static_cast<std::uint8_t>(v);
        }
      }
      next[c] = top;
      pick[c] = arg;
    }
    std::swap(best, next);
  }

  Placement placement;
  placement.prefix.assign(D, 0);
  std::size_t c = cells;
  for (std::size_t d = D; d-- > 0;) {
    const std::uint8_t v = choice[d * (cells + 1) + c];
    placement.prefix[d] = v;
    c -= cost(d, v);
  }
  for (std::size_t d = 0; d < D; ++d) {
    placement.value += value(d, placement.prefix[d]);
    placement.size += catalog.lr_prefix(d, placement.prefix[d]);
  }
  return placement;
}

bool HybridPlacement::serves(std::size_t d, std::size_t v) const noexcept {
  const auto& e = entries[d];
  switch (e.form) {
    case HybridForm::kMr: return e.value == v;
    case HybridForm::kLr: return v < e.value;
    case HybridForm::kNone: break;
  }
  return false;
}

HybridPlacement hlfu_static_placement(const Catalog& catalog, double capacity) {
  catalog.require_hybrid_feasible();
  const std::size_t D = catalog.objects();
  const std::size_t V = catalog.versions();
  std::vector<std::pair<std::size_t, std::size_t>> ranked;
  ranked.reserve(D * V);
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t v = 0; v < V; ++v) ranked.emplace_back(d, v);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    return catalog.rate(a.first, a.second) > catalog.rate(b.first, b.second);
  });

  const double slack = 1e-9 * std::max(1.0, capacity);
  HybridPlacement out;
  out.entries.assign(D, {});
  double used = 0.0;
  const auto fits = [&](double extra) { return used + extra <= capacity + slack; };
  for (const auto& [d, v] : ranked) {
    auto& e = out.entries[d];
    switch (e.form) {
      case HybridForm::kNone:
        if (fits(catalog.mr_size(d, v))) {
          used += catalog.mr_size(d, v);
          e = {HybridForm::kMr, static_cast<std::uint32_t>(v)};
        }
        break;
      case HybridForm::kMr: {
        const std::size_t top = std::max<std::size_t>(e.value, v);
        const double extra = catalog.lr_size(d, top) - catalog.mr_size(d, e.value);
        if (fits(extra)) {
          used += extra;
          e = {HybridForm::kLr, static_cast<std::uint32_t>(top + 1)};
        }
        break;
      }
      case HybridForm::kLr:
        if (v >= e.value) {
          const double extra = catalog.lr_prefix(d, v + 1) - catalog.lr_prefix(d, e.value);
          if (fits(extra)) {
            used += extra;
            e.value = static_cast<std::uint32_t>(v + 1);
          }
        }
        break;
    }
  }
  for (std::size_t d = 0; d < D; ++d) {
    const auto& e = out.entries[d];
    if (e.form == HybridForm::kMr) out.size += catalog.mr_size(d, e.value);
    if (e.form == HybridForm::kLr) out.size += catalog.lr_prefix(d, e.value);
    for (std::size_t v = 0; v < V; ++v) {
      if (out.serves(d, v)) out.value += catalog.rate(d, v);
    }
  }
  return out;
}

StaticPolicy::StaticPolicy(const Catalog& catalog, double capacity, const Placement& placement)
    : name_("static-opt"),
      state_(catalog, capacity),
      serves_(catalog.objects(), catalog.versions(), 0) {
  for (std::size_t d = 0; d < catalog.objects(); ++d) {
    state_.set_lr_layers(d, placement.prefix.at(d));
    for (std::size_t v = 0; v < catalog.versions(); ++v) serves_(d, v) = placement.cached(d, v);
  }
}

StaticPolicy::StaticPolicy(const Catalog& catalog, double capacity,
                           const HybridPlacement& placement)
    : name_("hlfu-static"),
      state_(catalog, capacity),
      serves_(catalog.objects(), catalog.versions(), 0) {
  for (std::size_t d = 0; d < catalog.objects(); ++d) {
    const auto& e = placement.entries.at(d);
    if (e.form == HybridForm::kMr) state_.set_mr(d, e.value, true);
    if (e.form == HybridForm::kLr) state_.set_lr_layers(d, e.value);
    for (std::size_t v = 0; v < catalog.versions(); ++v) serves_(d, v) = placement.serves(d, v);
  }
}

AccessResult StaticPolicy::access(Request request) {
  AccessResult result;
  result.hit = serves_(request.object, request.version) != 0;
  result.layers_present =
      std::min<std::uint32_t>(state_.lr_layers(request.object), request.version + 1);
  return result;
}

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names{"llru", "llfu",        "lbelady",   "mrlru",
                                              "hlru", "hlfu-static", "static-opt"};
  return names;
}

bool is_policy_name(std::string_view name) {
  const auto& names = policy_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool policy_needs_mr_sizes(std::string_view name) {
  return name == "mrlru" || name == "hlru" || name == "hlfu-static";
}

double default_resolution(const Catalog& catalog) {
  static constexpr double kSteps[] = {1.0,  0.5,   0.25,  0.2,   0.125, 0.1,
                                      0.05, 0.025, 0.02,  0.01,  0.005, 0.001};
  for (double step : kSteps) {
    bool exact = true;
    for (double s : catalog.layer_sizes().values()) {
      const double q = s / step;
      if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q)) {
        exact = false;
        break;
      }
    }
    if (exact) return step;
  }
  return std::max(catalog.total_lr_size() / double(1 << 20), 1e-6);
}

std::unique_ptr<Policy> make_policy(std::string_view name, const Catalog& catalog,
                                    double capacity, const Trace* trace,
                                    const PolicyOptions& options) {
  if (name == "llru") return std::make_unique<LayeredLru>(catalog, capacity);
  if (name == "llfu") {
    return std::make_unique<LayeredLfu>(catalog, capacity, options.lfu_decay_threshold);
  }
  if (name == "lbelady") {
    if (trace == nullptr) throw InvalidArgument("lbelady needs the full trace");
    return std::make_unique<LayeredBelady>(catalog, capacity, *trace);
  }
  if (name == "mrlru") return std::make_unique<MrLru>(catalog, capacity);
  if (name == "hlru") return std::make_unique<HybridLru>(catalog, capacity);
  if (name == "hlfu-static") {
    return std::make_unique<StaticPolicy>(catalog, capacity,
                                          hlfu_static_placement(catalog, capacity));
  }
  if (name == "static-opt") {
    const double resolution =
        options.resolution > 0.0 ? options.resolution : default_resolution(catalog);
    return std::make_unique<StaticPolicy>(
        catalog, capacity,
        static_optimal(catalog, capacity, resolution, options.memory_cap_bytes));
  }
  throw ConfigError(fmt::format("unknown policy \"{}\"", name));
}

}  // namespace layercache
