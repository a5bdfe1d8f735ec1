#include <algorithm>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "policies.hpp"

namespace layercache {

NextAccessIndex::NextAccessIndex(const Trace& trace, std::size_t objects, std::size_t versions)
    : versions_(versions), next_(trace.size() * versions, kNever) {
  if (trace.size() >= kNever) throw InvalidArgument("trace too long for the next-access index");
  std::vector<std::uint32_t> upcoming(objects * versions, kNever);
  for (std::size_t t = trace.size(); t-- > 0;) {
    const auto& r = trace.entries[t];
    for (std::size_t l = 0; l <= r.version; ++l) {
      auto& slot = upcoming[r.object * versions + l];
      next_[t * versions + l] = slot;
      slot = static_cast<std::uint32_t>(t);
    }
  }
}

bool LayeredBelady::KeyOrder::operator()(const Key& a, const Key& b) const noexcept {
  // Farthest next use first; ties: higher layer, then larger object.
  return std::tie(b.next, b.layer, b.object) < std::tie(a.next, a.layer, a.object);
}

LayeredBelady::LayeredBelady(const Catalog& catalog, double capacity, const Trace& trace)
    : trace_(&trace),
      index_(trace, catalog.objects(), catalog.versions()),
      state_(catalog, capacity),
      next_use_(catalog.objects(), catalog.versions(), NextAccessIndex::kNever) {}

AccessResult LayeredBelady::access(Request request) {
  if (position_ >= trace_->size() || !(trace_->entries[position_] == request)) {
    throw InvalidArgument("lbelady: requests must follow the trace it was built with");
  }
  evicted_.clear();
  const std::size_t t = position_++;
  const std::size_t d = request.object;
  const std::size_t v = request.version;
  const auto& catalog = state_.catalog();
  AccessResult result;
  const std::uint32_t resident = state_.lr_layers(d);
  const std::size_t touched_resident = std::min<std::size_t>(resident, v + 1);
  result.layers_present = static_cast<std::uint32_t>(touched_resident);

  const auto key = [&](std::size_t l) {
    return Key{next_use_(d, l), static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(d)};
  };
  for (std::size_t l = 0; l < touched_resident; ++l) {
    order_.erase(key(l));
    next_use_(d, l) = index_.next(t, l);
    order_.insert(key(l));
  }

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
    if (it == order_.end()) throw std::logic_error("lbelady: nothing left to evict");
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
  for (std::size_t l = resident; l <= v; ++l) {
    next_use_(d, l) = index_.next(t, l);
    order_.insert(key(l));
  }
  state_.set_lr_layers(d, static_cast<std::uint32_t>(v + 1));
  result.evicted = evicted_;
  return result;
}

void LayeredBelady::check_invariants() const {
  state_.check_invariants();
  const auto& catalog = state_.catalog();
  std::size_t expected = 0;
  for (std::size_t d = 0; d < catalog.objects(); ++d) {
    const auto resident = state_.lr_layers(d);
    expected += resident;
    for (std::size_t l = 0; l < resident; ++l) {
      const Key k{next_use_(d, l), static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(d)};
      if (!order_.contains(k)) {
        throw std::logic_error(fmt::format("lbelady: resident layer ({}, {}) not indexed", d, l));
      }
      if (l + 1 < resident && next_use_(d, l) > next_use_(d, l + 1)) {
        throw std::logic_error(fmt::format("lbelady: next use of ({}, {}) after layer above", d, l));
      }
    }
  }
  if (order_.size() != expected) {
    throw std::logic_error(fmt::format("lbelady: index holds {} units, {} resident",
                                       order_.size(), expected));
  }
}

}  // namespace layercache
