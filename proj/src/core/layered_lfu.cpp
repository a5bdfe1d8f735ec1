#include <algorithm>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "policies.hpp"

namespace layercache {

void FreqTable::decay() noexcept {
  auto counts = counts_.values();
  if (counts.empty()) return;
  const auto smallest = *std::min_element(counts.begin(), counts.end());
  for (auto& c : counts) c -= smallest;
}

std::uint64_t FreqTable::max_count() const noexcept {
  const auto counts = counts_.values();
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

bool LayeredLfu::KeyOrder::operator()(const Key& a, const Key& b) const noexcept {
  // Fewest accesses first; ties: higher layer, then least recently accessed.
  return std::tie(a.count, b.layer, a.last_access, a.object) <
         std::tie(b.count, a.layer, b.last_access, b.object);
}

LayeredLfu::LayeredLfu(const Catalog& catalog, double capacity, std::uint64_t decay_threshold)
    : state_(catalog, capacity),
      freq_(catalog.objects(), catalog.versions()),
      last_access_(catalog.objects(), catalog.versions(), 0),
      decay_threshold_(decay_threshold) {}

void LayeredLfu::decay_counts() {
  freq_.decay();
  order_.clear();
  const auto& catalog = state_.catalog();
  for (std::size_t d = 0; d < catalog.objects(); ++d) {
    for (std::size_t l = 0; l < state_.lr_layers(d); ++l) order_.insert(key_of(d, l));
  }
}

AccessResult LayeredLfu::access(Request request) {
  evicted_.clear();
  ++clock_;
  const std::size_t d = request.object;
  const std::size_t v = request.version;
  const auto& catalog = state_.catalog();
  AccessResult result;
  const std::uint32_t resident = state_.lr_layers(d);
  const std::size_t touched_resident = std::min<std::size_t>(resident, v + 1);
  result.layers_present = static_cast<std::uint32_t>(touched_resident);

  // Counts are bumped before any eviction decision.
  for (std::size_t l = 0; l < touched_resident; ++l) order_.erase(key_of(d, l));
  freq_.record(d, v);
  for (std::size_t l = 0; l <= v; ++l) last_access_(d, l) = clock_;
  for (std::size_t l = 0; l < touched_resident; ++l) order_.insert(key_of(d, l));
  // Layer 0 carries the object's largest count, so only it can cross the threshold.
  if (decay_threshold_ != 0 && freq_.count(d, 0) >= decay_threshold_) decay_counts();

  if (resident > v) {
    result.hit = true;
    return result;
  }
  if (!state_.fits_alone(catalog.lr_size(d, v))) {
    result.bypassed = true;
    return result;
  }

  const double required = catalog.lr_prefix(d, v + 1) - catalog.lr_prefix(d, resident);
  auto it = order_.begin();
  while (!state_.fits(required)) {
    if (it == order_.end()) throw std::logic_error("llfu: nothing left to evict");
    if (it->object == d) {
      ++it;
      continue;
    }
    const auto victim = *it;
    it = order_.erase(it);
    state_.set_lr_layers(victim.object, victim.layer);
    result.bytes_evicted += catalog.layer_size(victim.object, victim.layer);
    evicted_.push_back({victim.object, victim.layer, UnitKind::kLayer});
  }
  for (std::size_t l = resident; l <= v; ++l) order_.insert(key_of(d, l));
  state_.set_lr_layers(d, static_cast<std::uint32_t>(v + 1));
  result.evicted = evicted_;
  return result;
}

void LayeredLfu::check_invariants() const {
  state_.check_invariants();
  const auto& catalog = state_.catalog();
  std::size_t expected = 0;
  for (std::size_t d = 0; d < catalog.objects(); ++d) {
    expected += state_.lr_layers(d);
    for (std::size_t l = 0; l + 1 < catalog.versions(); ++l) {
      if (freq_.count(d, l) < freq_.count(d, l + 1)) {
        throw std::logic_error(fmt::format("llfu: count({}, {}) < count({}, {})", d, l, d, l + 1));
      }
    }
    for (std::size_t l = 0; l < state_.lr_layers(d); ++l) {
      if (!order_.contains(key_of(d, l))) {
        throw std::logic_error(fmt::format("llfu: resident layer ({}, {}) not indexed", d, l));
      }
    }
  }
  if (order_.size() != expected) {
    throw std::logic_error(
        fmt::format("llfu: eviction index holds {} units, {} resident", order_.size(), expected));
  }
}

}  // namespace layercache
