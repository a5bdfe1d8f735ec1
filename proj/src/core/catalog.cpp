#include "catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace layercache {

namespace {

void check_shape(const Table<double>& t, std::size_t rows, std::size_t cols, const char* what) {
  if (t.rows() != rows || t.cols() != cols) {
    throw ConfigError(fmt::format("{}: expected {}x{} matrix, got {}x{}", what, rows, cols,
                                  t.rows(), t.cols()));
  }
}

}  // namespace

DerivedPopularity derive_popularity(const Table<double>& rate) {
  const std::size_t D = rate.rows();
  const std::size_t V = rate.cols();
  DerivedPopularity out;
  out.object_prob.assign(D, 0.0);
  out.version_prob = Table<double>(D, V);
  out.layer_rate = Table<double>(D, V);
  out.layer_prob = Table<double>(D, V);

  double total = 0.0;
  for (double r : rate.values()) total += r;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ConfigError("rate: total request rate must be positive and finite");
  }
  out.total_rate = total;

  for (std::size_t d = 0; d < D; ++d) {
    double suffix = 0.0;
    for (std::size_t l = V; l-- > 0;) {
      suffix += rate(d, l);
      out.layer_rate(d, l) = suffix;
      out.layer_prob(d, l) = suffix / total;
      out.version_prob(d, l) = rate(d, l) / total;
    }
    out.object_prob[d] = suffix / total;
  }
  return out;
}

Catalog::Catalog(Table<double> layer_size, Table<double> rate,
                 std::optional<Table<double>> mr_size)
    : layer_size_(std::move(layer_size)), rate_(std::move(rate)), mr_size_(std::move(mr_size)) {
  const std::size_t D = layer_size_.rows();
  const std::size_t V = layer_size_.cols();
  std::vector<std::string> problems;
  if (D == 0) problems.emplace_back("num_objects: must be positive");
  if (V == 0) problems.emplace_back("num_versions: must be positive");
  if (!problems.empty()) throw ConfigError(problems);
  check_shape(rate_, D, V, "rate");
  if (mr_size_) check_shape(*mr_size_, D, V, "mr_size");

  for (std::size_t d = 0; d < D; ++d) {
    bool any_positive = false;
    for (std::size_t l = 0; l < V; ++l) {
      const double delta = layer_size_(d, l);
      if (!(delta >= 0.0) || !std::isfinite(delta)) {
        problems.push_back(fmt::format("layer_size[{}][{}]: must be finite and >= 0", d, l));
      }
      const double r = rate_(d, l);
      if (!(r >= 0.0) || !std::isfinite(r)) {
        problems.push_back(fmt::format("rate[{}][{}]: must be finite and >= 0", d, l));
      }
      any_positive = any_positive || r > 0.0;
      if (mr_size_) {
        const double s = (*mr_size_)(d, l);
        if (!(s > 0.0) || !std::isfinite(s)) {
          problems.push_back(fmt::format("mr_size[{}][{}]: must be finite and > 0", d, l));
        } else if (l > 0 && !(s > (*mr_size_)(d, l - 1))) {
          problems.push_back(fmt::format("mr_size[{}]: must be strictly increasing", d));
        }
      }
    }
    if (!any_positive) problems.push_back(fmt::format("rate[{}]: needs a positive entry", d));
  }
  if (!problems.empty()) throw ConfigError(problems);

  lr_prefix_ = Table<double>(D, V);
  for (std::size_t d = 0; d < D; ++d) {
    double acc = 0.0;
    for (std::size_t l = 0; l < V; ++l) {
      acc += layer_size_(d, l);
      lr_prefix_(d, l) = acc;
    }
    total_lr_size_ += acc;
  }
  popularity_ = derive_popularity(rate_);
}

double Catalog::total_mr_size() const {
  if (!mr_size_) throw InvalidArgument("catalog has no MR sizes");
  double total = 0.0;
  for (double s : mr_size_->values()) total += s;
  return total;
}

double Catalog::max_layer_size() const noexcept {
  const auto v = layer_size_.values();
  return *std::max_element(v.begin(), v.end());
}

void Catalog::require_hybrid_feasible() const {
  if (!mr_size_) throw ConfigError("mr_size: hybrid policies need MR sizes");
  const double eps = 1e-9;
  std::vector<std::string> problems;
  for (std::size_t d = 0; d < objects(); ++d) {
    for (std::size_t v = 0; v < versions(); ++v) {
      const double lr = lr_size(d, v);
      const double mr = mr_size(d, v);
      if (mr > lr * (1.0 + eps) + eps) {
        problems.push_back(fmt::format("object {} version {}: s_MR > s_LR", d, v));
      }
      // mr sizes are increasing, so the minimum over u < v is u = 0.
      if (v > 0 && mr_size(d, 0) + mr < lr * (1.0 - eps) - eps) {
        problems.push_back(
            fmt::format("object {} version {}: s_MR(0) + s_MR(v) < s_LR(v)", d, v));
      }
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
}

double lr_version_size(const Catalog& catalog, std::size_t d, std::size_t v) {
  if (d >= catalog.objects() || v >= catalog.versions()) {
    throw InvalidArgument(fmt::format("lr_version_size: index ({}, {}) out of range", d, v));
  }
  return catalog.lr_size(d, v);
}

std::vector<double> apply_overhead(std::span<const double> mr_sizes, double overhead_percent) {
  if (!(overhead_percent >= 0.0)) throw InvalidArgument("overhead must be >= 0");
  if (mr_sizes.empty()) throw InvalidArgument("apply_overhead: no sizes");
  const double factor = 1.0 + overhead_percent / 100.0;
  std::vector<double> layers(mr_sizes.size());
  double previous = 0.0;
  for (std::size_t v = 0; v < mr_sizes.size(); ++v) {
    if (!(mr_sizes[v] > previous)) {
      throw InvalidArgument("apply_overhead: MR sizes must be positive and strictly increasing");
    }
    layers[v] = factor * (mr_sizes[v] - previous);
    previous = mr_sizes[v];
  }
  return layers;
}

namespace {

nlohmann::json table_to_json(const Table<double>& t) {
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < t.rows(); ++r) {
    auto row = t.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Table<double> table_from_json(const nlohmann::json& doc, const char* field, std::size_t rows,
                              std::size_t cols) {
  if (!doc.is_array() || doc.size() != rows) {
    throw ConfigError(fmt::format("{}: expected an array of {} rows", field, rows));
  }
  Table<double> t(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = doc[r];
    if (!row.is_array() || row.size() != cols) {
      throw ConfigError(fmt::format("{}[{}]: expected {} numbers", field, r, cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw ConfigError(fmt::format("{}[{}][{}]: not a number", field, r, c));
      }
      t(r, c) = row[c].get<double>();
    }
  }
  return t;
}

}  // namespace

nlohmann::json catalog_to_json(const Catalog& catalog) {
  nlohmann::json doc;
  doc["num_objects"] = catalog.objects();
  doc["num_versions"] = catalog.versions();
  doc["layer_size"] = table_to_json(catalog.layer_sizes());
  if (catalog.has_mr_sizes()) doc["mr_size"] = table_to_json(*catalog.mr_sizes());
  doc["rate"] = table_to_json(catalog.rates());
  return doc;
}

Catalog catalog_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("catalog: expected a JSON object");
  for (const char* key : {"num_objects", "num_versions", "layer_size", "rate"}) {
    if (!doc.contains(key)) throw ConfigError(fmt::format("{}: missing", key));
  }
  if (!doc["num_objects"].is_number_unsigned() || !doc["num_versions"].is_number_unsigned()) {
    throw ConfigError("num_objects/num_versions: must be positive integers");
  }
  const auto D = doc["num_objects"].get<std::size_t>();
  const auto V = doc["num_versions"].get<std::size_t>();
  auto layers = table_from_json(doc["layer_size"], "layer_size", D, V);
  auto rate = table_from_json(doc["rate"], "rate", D, V);
  std::optional<Table<double>> mr;
  if (doc.contains("mr_size") && !doc["mr_size"].is_null()) {
    mr = table_from_json(doc["mr_size"], "mr_size", D, V);
  }
  return Catalog(std::move(layers), std::move(rate), std::move(mr));
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  return catalog_from_json(doc);
}

void save_catalog(const Catalog& catalog, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write catalog file " + path);
  out << catalog_to_json(catalog).dump(2) << '\n';
}

}  // namespace layercache
