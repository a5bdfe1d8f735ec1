#include <algorithm>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "policies.hpp"

namespace layercache {

MrLru::MrLru(const Catalog& catalog, double capacity)
    : versions_(catalog.versions()),
      state_(catalog, capacity),
      order_(catalog.objects() * catalog.versions()) {
  if (!catalog.has_mr_sizes()) throw ConfigError("mr_size: mrlru needs MR sizes");
}

AccessResult MrLru::access(Request request) {
  evicted_.clear();
  const std::size_t d = request.object;
  const std::size_t v = request.version;
  const auto& catalog = state_.catalog();
  const auto id = static_cast<RecencyList::Id>(d * versions_ + v);
  AccessResult result;
  if (state_.mr_resident(d, v)) {
    result.hit = true;
    order_.touch(id);
    return result;
  }
  const double size = catalog.mr_size(d, v);
  if (!state_.fits_alone(size)) {
    result.bypassed = true;
    return result;
  }
  while (!state_.fits(size)) {
    const auto victim = order_.oldest();
    if (victim == RecencyList::npos) throw std::logic_error("mrlru: nothing left to evict");
    const std::size_t vd = victim / versions_;
    const std::size_t vv = victim % versions_;
    order_.remove(victim);
    state_.set_mr(vd, vv, false);
    result.bytes_evicted += catalog.mr_size(vd, vv);
    evicted_.push_back(
        {static_cast<std::uint32_t>(vd), static_cast<std::uint32_t>(vv), UnitKind::kVersion});
  }
  state_.set_mr(d, v, true);
  order_.touch(id);
  result.evicted = evicted_;
  return result;
}

void MrLru::check_invariants() const {
  state_.check_invariants();
  std::size_t listed = 0;
  for (auto u = order_.oldest(); u != RecencyList::npos; u = order_.newer(u)) {
    if (!state_.mr_resident(u / versions_, u % versions_)) {
      throw std::logic_error("mrlru: listed version not resident");
    }
    ++listed;
  }
  std::size_t resident = 0;
  const auto& catalog = state_.catalog();
  for (std::size_t d = 0; d < catalog.objects(); ++d) {
    if (state_.lr_layers(d) != 0) throw std::logic_error("mrlru: LR layers resident");
    for (std::size_t v = 0; v < catalog.versions(); ++v) resident += state_.mr_resident(d, v);
  }
  if (listed != resident) throw std::logic_error("mrlru: recency list out of sync");
}

HybridLru::HybridLru(const Catalog& catalog, double capacity)
    : objects_(catalog.objects()),
      versions_(catalog.versions()),
      state_(catalog, capacity),
      order_(catalog.objects() * catalog.versions() + catalog.objects()) {
  catalog.require_hybrid_feasible();
}

std::optional<std::uint32_t> HybridLru::blob_version(std::size_t d) const noexcept {
  for (std::size_t v = 0; v < versions_; ++v) {
    if (state_.mr_resident(d, v)) return static_cast<std::uint32_t>(v);
  }
  return std::nullopt;
}

void HybridLru::touch_prefix(std::size_t d, std::size_t v) {
  for (std::size_t l = v + 1; l-- > 0;) order_.touch(layer_id(d, l));
}

void HybridLru::evict_for(double required, std::size_t pinned, AccessResult& result) {
  const auto& catalog = state_.catalog();
  const std::size_t layer_ids = objects_ * versions_;
  auto cursor = order_.oldest();
  while (!state_.fits(required)) {
    if (cursor == RecencyList::npos) throw std::logic_error("hlru: nothing left to evict");
    const auto victim = cursor;
    cursor = order_.newer(cursor);
    if (victim >= layer_ids) {
      const std::size_t vd = victim - layer_ids;
      if (vd == pinned) continue;
      const auto vv = *blob_version(vd);
      order_.remove(victim);
      state_.set_mr(vd, vv, false);
      result.bytes_evicted += catalog.mr_size(vd, vv);
      evicted_.push_back({static_cast<std::uint32_t>(vd), vv, UnitKind::kVersion});
    } else {
      const std::size_t vd = victim / versions_;
      if (vd == pinned) continue;
      const auto vl = static_cast<std::uint32_t>(victim % versions_);
      order_.remove(victim);
      state_.set_lr_layers(vd, vl);
      result.bytes_evicted += catalog.layer_size(vd, vl);
      evicted_.push_back({static_cast<std::uint32_t>(vd), vl, UnitKind::kLayer});
    }
  }
}

AccessResult HybridLru::access(Request request) {
  evicted_.clear();
  const std::size_t d = request.object;
  const std::size_t v = request.version;
  const auto& catalog = state_.catalog();
  AccessResult result;
  const std::uint32_t layers = state_.lr_layers(d);

  if (layers > 0) {
    result.layers_present = std::min<std::uint32_t>(layers, static_cast<std::uint32_t>(v + 1));
    if (layers > v) {
      result.hit = true;
      touch_prefix(d, v);
      return result;
    }
    if (!state_.fits_alone(catalog.lr_size(d, v))) {
      result.bypassed = true;
      return result;
    }
    evict_for(catalog.lr_prefix(d, v + 1) - catalog.lr_prefix(d, layers), d, result);
    state_.set_lr_layers(d, static_cast<std::uint32_t>(v + 1));
    touch_prefix(d, v);
    result.evicted = evicted_;
    return result;
  }

  const auto blob = blob_version(d);
  if (blob && *blob == v) {
    result.hit = true;
    order_.touch(blob_id(d));
    return result;
  }
  if (blob) {
    // Second distinct version: convert to the LR prefix covering both.
    const std::size_t top = std::max<std::size_t>(*blob, v);
    if (!state_.fits_alone(catalog.lr_size(d, top))) {
      result.bypassed = true;
      return result;
    }
    evict_for(catalog.lr_size(d, top) - catalog.mr_size(d, *blob), d, result);
    order_.remove(blob_id(d));
    state_.set_mr(d, *blob, false);
    state_.set_lr_layers(d, static_cast<std::uint32_t>(top + 1));
    touch_prefix(d, top);
    result.evicted = evicted_;
    return result;
  }

  const double size = catalog.mr_size(d, v);
  if (!state_.fits_alone(size)) {
    result.bypassed = true;
    return result;
  }
  evict_for(size, d, result);
  state_.set_mr(d, v, true);
  order_.touch(blob_id(d));
  result.evicted = evicted_;
  return result;
}

void HybridLru::check_invariants() const {
  state_.check_invariants();
  std::size_t expected = 0;
  for (std::size_t d = 0; d < objects_; ++d) {
    std::size_t blobs = 0;
    for (std::size_t v = 0; v < versions_; ++v) blobs += state_.mr_resident(d, v);
    if (blobs > 1) throw std::logic_error(fmt::format("hlru: object {} has {} MR blobs", d, blobs));
    if (blobs == 1 && state_.lr_layers(d) != 0) {
      throw std::logic_error(fmt::format("hlru: object {} is both MR and LR", d));
    }
    if ((blobs == 1) != order_.contains(blob_id(d))) {
      throw std::logic_error(fmt::format("hlru: object {} blob not in recency order", d));
    }
    expected += blobs + state_.lr_layers(d);
  }
  if (order_.size() != expected) throw std::logic_error("hlru: recency list out of sync");
  const std::size_t layer_ids = objects_ * versions_;
  std::vector<std::uint32_t> last(objects_, std::numeric_limits<std::uint32_t>::max());
  for (auto u = order_.oldest(); u != RecencyList::npos; u = order_.newer(u)) {
    if (u >= layer_ids) continue;
    const std::size_t d = u / versions_;
    const auto l = static_cast<std::uint32_t>(u % versions_);
    if (l >= state_.lr_layers(d) || l >= last[d]) {
      throw std::logic_error(fmt::format("hlru: layer order of object {} broken", d));
    }
    last[d] = l;
  }
}

}  // namespace layercache
