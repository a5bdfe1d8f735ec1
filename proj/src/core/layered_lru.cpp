#include <algorithm>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "policies.hpp"

namespace layercache {

LayeredLru::LayeredLru(const Catalog& catalog, double capacity)
    : versions_(catalog.versions()),
      state_(catalog, capacity),
      order_(catalog.objects() * catalog.versions()) {}

void LayeredLru::touch_prefix(std::size_t d, std::size_t v) {
  // Layer v first so that layer 0 ends up newest.
  for (std::size_t l = v + 1; l-- > 0;) order_.touch(id(d, l));
}

AccessResult LayeredLru::access(Request request) {
  evicted_.clear();
  const std::size_t d = request.object;
  const std::size_t v = request.version;
  const auto& catalog = state_.catalog();
  AccessResult result;
  const std::uint32_t resident = state_.lr_layers(d);
  result.layers_present = std::min<std::uint32_t>(resident, static_cast<std::uint32_t>(v + 1));

  if (resident > v) {
    result.hit = true;
    touch_prefix(d, v);
    return result;
  }
  if (!state_.fits_alone(catalog.lr_size(d, v))) {
    result.bypassed = true;
    return result;
  }

  const double required = catalog.lr_prefix(d, v + 1) - catalog.lr_prefix(d, resident);
  auto cursor = order_.oldest();
  while (!state_.fits(required)) {
    if (cursor == RecencyList::npos) throw std::logic_error("llru: nothing left to evict");
    const auto victim = cursor;
    cursor = order_.newer(cursor);
    const std::size_t vd = victim / versions_;
    if (vd == d) continue;  // pinned by this request
    const auto vl = static_cast<std::uint32_t>(victim % versions_);
    order_.remove(victim);
    state_.set_lr_layers(vd, vl);
    const double size = catalog.layer_size(vd, vl);
    result.bytes_evicted += size;
    evicted_.push_back({static_cast<std::uint32_t>(vd), vl, UnitKind::kLayer});
  }
  state_.set_lr_layers(d, static_cast<std::uint32_t>(v + 1));
  touch_prefix(d, v);
  result.evicted = evicted_;
  return result;
}

void LayeredLru::check_invariants() const {
  state_.check_invariants();
  const auto& catalog = state_.catalog();
  std::size_t expected = 0;
  for (std::size_t d = 0; d < catalog.objects(); ++d) expected += state_.lr_layers(d);
  if (order_.size() != expected) {
    throw std::logic_error(
        fmt::format("llru: recency list holds {} units, {} resident", order_.size(), expected));
  }
  std::vector<std::uint32_t> last(catalog.objects(), std::numeric_limits<std::uint32_t>::max());
  for (auto u = order_.oldest(); u != RecencyList::npos; u = order_.newer(u)) {
    const std::size_t d = u / versions_;
    const auto l = static_cast<std::uint32_t>(u % versions_);
    if (l >= state_.lr_layers(d)) {
      throw std::logic_error(fmt::format("llru: layer ({}, {}) listed but not resident", d, l));
    }
    if (l >= last[d]) {
      throw std::logic_error(
          fmt::format("llru: object {} layer {} is older than a higher layer", d, l));
    }
    last[d] = l;
  }
}

}  // namespace layercache
