#include "layercache/layercache.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "analysis.hpp"
#include "catalog.hpp"
#include "experiment.hpp"
#include "policies.hpp"
#include "sim.hpp"
#include "workload.hpp"

struct lc_catalog {
  layercache::Catalog value;
};
struct lc_trace {
  layercache::Trace value;
};
struct lc_report {
  layercache::SimReport value;
};
struct lc_approx {
  layercache::ApproxSolution value;
};

namespace {

thread_local std::string last_error;

lc_status fail(lc_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body and maps library exceptions onto status codes.
template <class Body>
lc_status guarded(Body&& body) noexcept {
  try {
    body();
    return LC_OK;
  } catch (const layercache::ConfigError& e) {
    return fail(LC_ERROR_VALIDATION, e.what());
  } catch (const layercache::InvalidArgument& e) {
    return fail(LC_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const layercache::IoError& e) {
    return fail(LC_ERROR_IO, e.what());
  } catch (const layercache::ResourceError& e) {
    return fail(LC_ERROR_RESOURCE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(LC_ERROR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LC_ERROR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(LC_ERROR_RUNTIME, e.what());
  } catch (...) {
    return fail(LC_ERROR_RUNTIME, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define LC_REQUIRE(cond, what) \
  if (!(cond)) return fail(LC_ERROR_INVALID_ARGUMENT, what)

layercache::ClockMode clock_mode(lc_clock clock) {
  return clock == LC_CLOCK_POISSON ? layercache::ClockMode::kPoisson
                                   : layercache::ClockMode::kDiscrete;
}

}  // namespace

extern "C" {

const char* lc_last_error(void) { return last_error.c_str(); }

const char* lc_version(void) { return "1.0.0"; }

void lc_string_free(char* s) { std::free(s); }

lc_status lc_catalog_create(size_t objects, size_t versions, const double* layer_size,
                            const double* rate, const double* mr_size, lc_catalog** out) {
  LC_REQUIRE(out != nullptr && layer_size != nullptr && rate != nullptr, "null argument");
  LC_REQUIRE(objects > 0 && versions > 0, "objects and versions must be >= 1");
  return guarded([&] {
    const std::size_t n = objects * versions;
    layercache::Table<double> sizes(objects, versions, std::vector<double>(layer_size, layer_size + n));
    layercache::Table<double> rates(objects, versions, std::vector<double>(rate, rate + n));
    std::optional<layercache::Table<double>> mr;
    if (mr_size != nullptr) mr.emplace(objects, versions, std::vector<double>(mr_size, mr_size + n));
    *out = new lc_catalog{layercache::Catalog(std::move(sizes), std::move(rates), std::move(mr))};
  });
}

lc_status lc_catalog_from_json(const char* json, lc_catalog** out) {
  LC_REQUIRE(json != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new lc_catalog{layercache::catalog_from_json(nlohmann::json::parse(json))};
  });
}

lc_status lc_catalog_load(const char* path, lc_catalog** out) {
  LC_REQUIRE(path != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new lc_catalog{layercache::load_catalog(path)}; });
}

lc_status lc_catalog_to_json(const lc_catalog* catalog, char** out) {
  LC_REQUIRE(catalog != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = copy_string(layercache::catalog_to_json(catalog->value).dump()); });
}

size_t lc_catalog_objects(const lc_catalog* catalog) {
  return catalog == nullptr ? 0 : catalog->value.objects();
}

size_t lc_catalog_versions(const lc_catalog* catalog) {
  return catalog == nullptr ? 0 : catalog->value.versions();
}

void lc_catalog_free(lc_catalog* catalog) { delete catalog; }

lc_status lc_trace_sample(const lc_catalog* catalog, size_t length, uint64_t seed, lc_trace** out) {
  LC_REQUIRE(catalog != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new lc_trace{layercache::sample_trace(catalog->value.popularity(), length, seed)};
  });
}

lc_status lc_trace_load(const char* path, const lc_catalog* catalog, lc_trace** out) {
  LC_REQUIRE(path != nullptr && catalog != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new lc_trace{
        layercache::load_trace(path, catalog->value.objects(), catalog->value.versions())};
  });
}

lc_status lc_trace_save(const lc_trace* trace, const char* path) {
  LC_REQUIRE(trace != nullptr && path != nullptr, "null argument");
  return guarded([&] { layercache::save_trace(trace->value, path); });
}

size_t lc_trace_length(const lc_trace* trace) { return trace == nullptr ? 0 : trace->value.size(); }

lc_status lc_trace_get(const lc_trace* trace, size_t index, uint32_t* object, uint32_t* version) {
  LC_REQUIRE(trace != nullptr && object != nullptr && version != nullptr, "null argument");
  LC_REQUIRE(index < trace->value.size(), "trace index out of range");
  *object = trace->value.entries[index].object;
  *version = trace->value.entries[index].version;
  return LC_OK;
}

void lc_trace_free(lc_trace* trace) { delete trace; }

lc_status lc_simulate(const char* policy, const lc_catalog* catalog, double capacity,
                      const lc_trace* trace, lc_report** out) {
  LC_REQUIRE(policy != nullptr && catalog != nullptr && trace != nullptr && out != nullptr,
             "null argument");
  if (!layercache::is_policy_name(policy)) {
    return fail(LC_ERROR_UNKNOWN_NAME, fmt::format("unknown policy \"{}\"", policy));
  }
  LC_REQUIRE(capacity >= 0.0 && capacity < std::numeric_limits<double>::infinity(),
             "capacity must be finite and >= 0");
  return guarded([&] {
    *out = new lc_report{layercache::run_simulation(policy, catalog->value, capacity, trace->value)};
  });
}

uint64_t lc_report_requests(const lc_report* report) {
  return report == nullptr ? 0 : report->value.total_requests();
}

uint64_t lc_report_hits(const lc_report* report) {
  return report == nullptr ? 0 : report->value.total_hits();
}

double lc_report_hit_rate(const lc_report* report) {
  return report == nullptr ? 0.0 : report->value.hit_rate();
}

lc_status lc_report_version(const lc_report* report, size_t object, size_t version,
                            uint64_t* requests, uint64_t* hits) {
  LC_REQUIRE(report != nullptr && requests != nullptr && hits != nullptr, "null argument");
  return guarded([&] {
    *requests = report->value.requests.at(object, version);
    *hits = report->value.hits.at(object, version);
  });
}

lc_status lc_report_layer(const lc_report* report, size_t object, size_t layer,
                          uint64_t* requests, uint64_t* hits) {
  LC_REQUIRE(report != nullptr && requests != nullptr && hits != nullptr, "null argument");
  return guarded([&] {
    *requests = report->value.layer_requests.at(object, layer);
    *hits = report->value.layer_hits.at(object, layer);
  });
}

void lc_report_free(lc_report* report) { delete report; }

lc_status lc_approx_solve(const lc_catalog* catalog, double capacity, lc_clock clock, double tol,
                          lc_approx** out) {
  LC_REQUIRE(catalog != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new lc_approx{layercache::solve_characteristic_time(
        catalog->value, capacity, clock_mode(clock), tol > 0.0 ? tol : 1e-9)};
  });
}

lc_status lc_approx_solve_mr(const lc_catalog* catalog, double capacity, lc_clock clock,
                             double tol, lc_approx** out) {
  LC_REQUIRE(catalog != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new lc_approx{layercache::mr_approximation(catalog->value, capacity, clock_mode(clock),
                                                      tol > 0.0 ? tol : 1e-9)};
  });
}

double lc_approx_characteristic_time(const lc_approx* approx) {
  return approx == nullptr ? 0.0 : approx->value.characteristic_time;
}

double lc_approx_residual(const lc_approx* approx) {
  return approx == nullptr ? 0.0 : approx->value.residual;
}

double lc_approx_hit_rate(const lc_approx* approx) {
  return approx == nullptr ? 0.0 : approx->value.hit_rate;
}

lc_status lc_approx_hit_prob(const lc_approx* approx, size_t object, size_t index, double* out) {
  LC_REQUIRE(approx != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = approx->value.hit_prob.at(object, index); });
}

lc_status lc_approx_write_csv(const lc_approx* approx, const char* path) {
  LC_REQUIRE(approx != nullptr && path != nullptr, "null argument");
  return guarded([&] {
    std::ofstream file(path);
    if (!file) throw layercache::IoError(fmt::format("cannot write {}", path));
    layercache::write_approx_csv(approx->value, file);
  });
}

void lc_approx_free(lc_approx* approx) { delete approx; }

lc_status lc_static_optimal(const lc_catalog* catalog, double capacity, double resolution,
                            uint32_t* prefix_out, double* value_out) {
  LC_REQUIRE(catalog != nullptr, "null argument");
  return guarded([&] {
    const double res = resolution > 0.0 ? resolution : layercache::default_resolution(catalog->value);
    const auto placement = layercache::static_optimal(catalog->value, capacity, res);
    if (prefix_out != nullptr) std::copy(placement.prefix.begin(), placement.prefix.end(), prefix_out);
    if (value_out != nullptr) *value_out = placement.value;
  });
}

lc_status lc_hlfu_static(const lc_catalog* catalog, double capacity, int* forms_out,
                         uint32_t* values_out, double* value_out) {
  LC_REQUIRE(catalog != nullptr, "null argument");
  return guarded([&] {
    const auto placement = layercache::hlfu_static_placement(catalog->value, capacity);
    for (std::size_t d = 0; d < placement.entries.size(); ++d) {
      if (forms_out != nullptr) forms_out[d] = static_cast<int>(placement.entries[d].form);
      if (values_out != nullptr) values_out[d] = placement.entries[d].value;
    }
    if (value_out != nullptr) *value_out = placement.value;
  });
}

lc_status lc_variance_bound(size_t objects, size_t versions, double delta_max, double* out) {
  LC_REQUIRE(out != nullptr, "null argument");
  return guarded([&] { *out = layercache::variance_bound(objects, versions, delta_max); });
}

lc_status lc_preset_names(char** out) {
  LC_REQUIRE(out != nullptr, "null argument");
  return guarded([&] {
    std::string joined;
    for (const auto& name : layercache::preset_names()) joined += name + "\n";
    *out = copy_string(joined);
  });
}

lc_status lc_config_preset(const char* name, char** json_out) {
  LC_REQUIRE(name != nullptr && json_out != nullptr, "null argument");
  const auto& names = layercache::preset_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    return fail(LC_ERROR_UNKNOWN_NAME, fmt::format("unknown preset \"{}\"", name));
  }
  return guarded([&] {
    *json_out = copy_string(layercache::config_to_json(layercache::figure_preset(name)).dump(2));
  });
}

lc_status lc_config_validate(const char* json, char** problems_out) {
  LC_REQUIRE(json != nullptr, "null argument");
  if (problems_out != nullptr) *problems_out = nullptr;
  try {
    layercache::config_from_json(nlohmann::json::parse(json));
    return LC_OK;
  } catch (const layercache::ConfigError& e) {
    if (problems_out != nullptr) {
      std::string lines;
      for (const auto& p : e.problems()) lines += p + "\n";
      *problems_out = copy_string(lines);
    }
    return fail(LC_ERROR_VALIDATION, e.what());
  } catch (const nlohmann::json::exception& e) {
    if (problems_out != nullptr) *problems_out = copy_string(std::string(e.what()) + "\n");
    return fail(LC_ERROR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(LC_ERROR_RUNTIME, e.what());
  }
}

lc_status lc_config_run(const char* json, const char* mode_override, const char* out_dir,
                        char** summary_out) {
  LC_REQUIRE(json != nullptr, "null argument");
  return guarded([&] {
    auto doc = nlohmann::json::parse(json);
    if (mode_override != nullptr && doc.is_object()) doc["mode"] = mode_override;
    const auto config = layercache::config_from_json(doc);
    const auto result = layercache::run_config(config, out_dir == nullptr ? "" : out_dir);
    if (summary_out != nullptr) {
      const nlohmann::json summary = {
          {"csv", result.csv_path}, {"meta", result.meta_path}, {"rows", result.rows}};
      *summary_out = copy_string(summary.dump());
    }
  });
}

}  // extern "C"
