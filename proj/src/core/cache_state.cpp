#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "policies.hpp"

namespace layercache {

CacheState::CacheState(const Catalog& catalog, double capacity)
    : catalog_(&catalog),
      capacity_(capacity),
      slack_(1e-9 * std::max(1.0, capacity)),
      lr_layers_(catalog.objects(), 0),
      mr_resident_(catalog.objects(), catalog.versions(), 0) {
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
    throw InvalidArgument("cache capacity must be finite and >= 0");
  }
}

bool CacheState::resident(const Unit& u) const noexcept {
  return u.kind == UnitKind::kLayer ? u.index < lr_layers_[u.object]
                                    : mr_resident(u.object, u.index);
}

double CacheState::size_of(const Unit& u) const noexcept {
  return u.kind == UnitKind::kLayer ? catalog_->layer_size(u.object, u.index)
                                    : catalog_->mr_size(u.object, u.index);
}

void CacheState::set_lr_layers(std::size_t d, std::uint32_t layers) {
  occupancy_ += catalog_->lr_prefix(d, layers) - catalog_->lr_prefix(d, lr_layers_[d]);
  lr_layers_[d] = layers;
}

void CacheState::set_mr(std::size_t d, std::size_t v, bool present) {
  auto& flag = mr_resident_(d, v);
  if ((flag != 0) == present) return;
  flag = present ? 1 : 0;
  occupancy_ += present ? catalog_->mr_size(d, v) : -catalog_->mr_size(d, v);
}

void CacheState::check_invariants() const {
  double total = 0.0;
  for (std::size_t d = 0; d < lr_layers_.size(); ++d) {
    if (lr_layers_[d] > catalog_->versions()) {
      throw std::logic_error(fmt::format("object {}: {} layers resident", d, lr_layers_[d]));
    }
    total += catalog_->lr_prefix(d, lr_layers_[d]);
    for (std::size_t v = 0; v < catalog_->versions(); ++v) {
      if (mr_resident(d, v)) total += catalog_->mr_size(d, v);
    }
  }
  const double tol = 1e-7 * std::max(1.0, capacity_);
  if (std::abs(total - occupancy_) > tol) {
    throw std::logic_error(
        fmt::format("occupancy drift: tracked {} vs resident {}", occupancy_, total));
  }
  if (total > capacity_ + tol) {
    throw std::logic_error(fmt::format("occupancy {} exceeds capacity {}", total, capacity_));
  }
}

}  // namespace layercache
