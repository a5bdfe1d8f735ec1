#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "table.hpp"

namespace layercache {

// Request probabilities and rates derived from a catalog's rate matrix.
//
// All indices are zero-based: object d in [0, D), layer/version l in [0, V).
// Version v consists of layers 0..v; a request for version v touches every
// layer l <= v, so layer rates are suffix sums of version rates.
struct DerivedPopularity {
  double total_rate = 0.0;             // lambda
  std::vector<double> object_prob;     // q(d)
  Table<double> version_prob;          // q(d, v)
  Table<double> layer_rate;            // gamma(d, l) = sum_{v >= l} lambda(d, v)
  Table<double> layer_prob;            // p(d, l) = gamma(d, l) / lambda
};

// Immutable description of D objects, each available in V versions.
//
// layer_size holds the incremental LR layer sizes delta(d, l); the LR size of
// version v is their prefix sum. mr_size, when present, holds independent
// multiple-representation sizes and must be strictly increasing per object.
class Catalog {
 public:
  Catalog(Table<double> layer_size, Table<double> rate,
          std::optional<Table<double>> mr_size = std::nullopt);

  std::size_t objects() const noexcept { return layer_size_.rows(); }
  std::size_t versions() const noexcept { return layer_size_.cols(); }

  double layer_size(std::size_t d, std::size_t l) const noexcept { return layer_size_(d, l); }
  // Prefix sum of layer sizes: space taken by version v in LR.
  double lr_size(std::size_t d, std::size_t v) const noexcept { return lr_prefix_(d, v); }
  // Space taken by the first `layers` layers; lr_prefix(d, 0) == 0.
  double lr_prefix(std::size_t d, std::size_t layers) const noexcept {
    return layers == 0 ? 0.0 : lr_prefix_(d, layers - 1);
  }
  bool has_mr_sizes() const noexcept { return mr_size_.has_value(); }
  double mr_size(std::size_t d, std::size_t v) const noexcept { return (*mr_size_)(d, v); }
  double rate(std::size_t d, std::size_t v) const noexcept { return rate_(d, v); }

  const Table<double>& layer_sizes() const noexcept { return layer_size_; }
  const Table<double>& rates() const noexcept { return rate_; }
  const std::optional<Table<double>>& mr_sizes() const noexcept { return mr_size_; }
  const DerivedPopularity& popularity() const noexcept { return popularity_; }

  double total_lr_size() const noexcept { return total_lr_size_; }
  double total_mr_size() const;
  double max_layer_size() const noexcept;

  // Throws if the MR/LR sizes violate s_MR <= s_LR or
  // min_{u<v} s_MR(u) + s_MR(v) >= s_LR(v); hybrid policies require both.
  void require_hybrid_feasible() const;

  friend bool operator==(const Catalog& a, const Catalog& b) {
    return a.layer_size_ == b.layer_size_ && a.rate_ == b.rate_ && a.mr_size_ == b.mr_size_;
  }

 private:
  Table<double> layer_size_;
  Table<double> rate_;
  std::optional<Table<double>> mr_size_;
  Table<double> lr_prefix_;
  double total_lr_size_ = 0.0;
  DerivedPopularity popularity_;
};

DerivedPopularity derive_popularity(const Table<double>& rate);

// LR size of version v (zero-based) of object d. Throws on out-of-range indices.
double lr_version_size(const Catalog& catalog, std::size_t d, std::size_t v);

// Converts strictly increasing MR sizes into LR layer sizes carrying an
// `overhead_percent` penalty, so that each LR prefix sum equals
// (1 + o/100) * s_MR(v).
std::vector<double> apply_overhead(std::span<const double> mr_sizes, double overhead_percent);

// JSON document with fields {num_objects, num_versions, layer_size, mr_size, rate};
// the matrices are arrays of per-object rows. mr_size is optional.
nlohmann::json catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const nlohmann::json& doc);
Catalog load_catalog(const std::string& path);
void save_catalog(const Catalog& catalog, const std::string& path);

}  // namespace layercache
