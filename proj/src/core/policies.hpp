#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catalog.hpp"
#include "recency_list.hpp"
#include "workload.hpp"

namespace layercache {

// A cacheable piece of an object: an LR layer or an MR version blob.
enum class UnitKind : std::uint8_t { kLayer, kVersion };

struct Unit {
  std::uint32_t object = 0;
  std::uint32_t index = 0;  // layer (kLayer) or version (kVersion), zero-based
  UnitKind kind = UnitKind::kLayer;
  friend bool operator==(const Unit&, const Unit&) = default;
};

struct AccessResult {
  bool hit = false;
  // Oversize request served without touching the cache.
  bool bypassed = false;
  // LR layers 0..layers_present-1 of the requested prefix that were resident
  // before the access (presence hits); 0 for MR-only state.
  std::uint32_t layers_present = 0;
  double bytes_evicted = 0.0;
  // Valid until the next call to access().
  std::span<const Unit> evicted;
};

// Resident contents of a cache: LR layer prefixes and MR version blobs.
//
// LR residency is stored as a per-object prefix length, so the layer-prefix
// property holds by construction; MR residency is a per-(object, version) flag.
class CacheState {
 public:
  CacheState(const Catalog& catalog, double capacity);

  const Catalog& catalog() const noexcept { return *catalog_; }
  double capacity() const noexcept { return capacity_; }
  double occupancy() const noexcept { return occupancy_; }

  std::uint32_t lr_layers(std::size_t d) const noexcept { return lr_layers_[d]; }
  bool mr_resident(std::size_t d, std::size_t v) const noexcept { return mr_resident_(d, v) != 0; }
  bool resident(const Unit& u) const noexcept;
  double size_of(const Unit& u) const noexcept;

  // True when `extra` more bytes fit (with a relative tolerance for
  // accumulated rounding of fractional sizes).
  bool fits(double extra) const noexcept { return occupancy_ + extra <= capacity_ + slack_; }
  bool fits_alone(double size) const noexcept { return size <= capacity_ + slack_; }

  void set_lr_layers(std::size_t d, std::uint32_t layers);
  void set_mr(std::size_t d, std::size_t v, bool present);

  // Throws std::logic_error when occupancy drifted from the resident sizes or
  // exceeds the capacity.
  void check_invariants() const;

 private:
  const Catalog* catalog_;
  double capacity_;
  double slack_;
  double occupancy_ = 0.0;
  std::vector<std::uint32_t> lr_layers_;
  Table<std::uint8_t> mr_resident_;
};

// Online (or trace-driven offline) replacement policy.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual AccessResult access(Request request) = 0;
  virtual const CacheState& state() const = 0;
  // Full structural check of cache contents and policy metadata; throws
  // std::logic_error on violation.
  virtual void check_invariants() const { state().check_invariants(); }
};

// Layered LRU. Touching version v moves layers v..0 to the newest end with
// layer 0 newest, so within an object higher layers are always older and
// eviction from the oldest end keeps every object a layer prefix.
class LayeredLru final : public Policy {
 public:
  LayeredLru(const Catalog& catalog, double capacity);
  std::string_view name() const override { return "llru"; }
  AccessResult access(Request request) override;
  const CacheState& state() const override { return state_; }
  void check_invariants() const override;
  const RecencyList& recency() const noexcept { return order_; }

 private:
  RecencyList::Id id(std::size_t d, std::size_t l) const noexcept {
    return static_cast<RecencyList::Id>(d * versions_ + l);
  }
  void touch_prefix(std::size_t d, std::size_t v);

  std::size_t versions_;
  CacheState state_;
  RecencyList order_;
  std::vector<Unit> evicted_;
};

// Per-layer access counts. Counts live for every (object, layer) whether
// cached or not; a request for version v increments layers 0..v.
class FreqTable {
 public:
  FreqTable(std::size_t objects, std::size_t versions) : counts_(objects, versions, 0) {}
  std::uint64_t count(std::size_t d, std::size_t l) const noexcept { return counts_(d, l); }
  void record(std::size_t d, std::size_t v) noexcept {
    for (std::size_t l = 0; l <= v; ++l) ++counts_(d, l);
  }
  // Subtracts the smallest count from every entry.
  void decay() noexcept;
  std::uint64_t max_count() const noexcept;
  const Table<std::uint64_t>& counts() const noexcept { return counts_; }

 private:
  Table<std::uint64_t> counts_;
};

// Layered LFU. Evicts resident layers in increasing count order; ties go to
// the higher layer index, then the least recently accessed unit.
class LayeredLfu final : public Policy {
 public:
  // When any count reaches decay_threshold (0 = never) all counts decay.
  LayeredLfu(const Catalog& catalog, double capacity, std::uint64_t decay_threshold = 0);
  std::string_view name() const override { return "llfu"; }
  AccessResult access(Request request) override;
  const CacheState& state() const override { return state_; }
  void check_invariants() const override;
  const FreqTable& frequencies() const noexcept { return freq_; }
  void decay_counts();

 private:
  struct Key {
    std::uint64_t count;
    std::uint32_t layer;
    std::uint64_t last_access;
    std::uint32_t object;
  };
  struct KeyOrder {
    bool operator()(const Key& a, const Key& b) const noexcept;
  };
  Key key_of(std::size_t d, std::size_t l) const noexcept {
    return {freq_.count(d, l), static_cast<std::uint32_t>(l), last_access_(d, l),
            static_cast<std::uint32_t>(d)};
  }

  CacheState state_;
  FreqTable freq_;
  Table<std::uint64_t> last_access_;
  std::set<Key, KeyOrder> order_;
  std::uint64_t clock_ = 0;
  std::uint64_t decay_threshold_;
  std::vector<Unit> evicted_;
};

// For each trace position t, the next position after t touching layer l of
// the object requested at t (requests for versions >= l touch layer l).
class NextAccessIndex {
 public:
  static constexpr std::uint32_t kNever = 0xFFFFFFFFu;

  NextAccessIndex(const Trace& trace, std::size_t objects, std::size_t versions);
  // Defined for l <= version requested at t.
  std::uint32_t next(std::size_t t, std::size_t l) const noexcept { return next_[t * versions_ + l]; }
  std::size_t size() const noexcept { return next_.size() / versions_; }

 private:
  std::size_t versions_;
  std::vector<std::uint32_t> next_;
};

// Layered Belady: offline, evicts the resident layer whose next touch is
// farthest in the future. Requests must be fed in trace order.
class LayeredBelady final : public Policy {
 public:
  LayeredBelady(const Catalog& catalog, double capacity, const Trace& trace);
  std::string_view name() const override { return "lbelady"; }
  AccessResult access(Request request) override;
  const CacheState& state() const override { return state_; }
  void check_invariants() const override;

 private:
  struct Key {
    std::uint32_t next;
    std::uint32_t layer;
    std::uint32_t object;
  };
  struct KeyOrder {
    bool operator()(const Key& a, const Key& b) const noexcept;
  };

  const Trace* trace_;
  NextAccessIndex index_;
  CacheState state_;
  Table<std::uint32_t> next_use_;
  std::set<Key, KeyOrder> order_;
  std::size_t position_ = 0;
  std::vector<Unit> evicted_;
};

// LRU over MR version blobs; versions are not substitutable.
class MrLru final : public Policy {
 public:
  MrLru(const Catalog& catalog, double capacity);
  std::string_view name() const override { return "mrlru"; }
  AccessResult access(Request request) override;
  const CacheState& state() const override { return state_; }
  void check_invariants() const override;

 private:
  std::size_t versions_;
  CacheState state_;
  RecencyList order_;
  std::vector<Unit> evicted_;
};

// Greedy hybrid LRU: an object requested in one version is kept as an MR
// blob; once a second version is requested it converts to the LR prefix up to
// the higher of the two. MR blobs and LR layers share one recency order.
class HybridLru final : public Policy {
 public:
  HybridLru(const Catalog& catalog, double capacity);
  std::string_view name() const override { return "hlru"; }
  AccessResult access(Request request) override;
  const CacheState& state() const override { return state_; }
  void check_invariants() const override;

 private:
  RecencyList::Id layer_id(std::size_t d, std::size_t l) const noexcept {
    return static_cast<RecencyList::Id>(d * versions_ + l);
  }
  RecencyList::Id blob_id(std::size_t d) const noexcept {
    return static_cast<RecencyList::Id>(objects_ * versions_ + d);
  }
  std::optional<std::uint32_t> blob_version(std::size_t d) const noexcept;
  void touch_prefix(std::size_t d, std::size_t v);
  void evict_for(double required, std::size_t pinned, AccessResult& result);

  std::size_t objects_;
  std::size_t versions_;
  CacheState state_;
  RecencyList order_;
  std::vector<Unit> evicted_;
};

// Static placement chosen with full knowledge of the rates.
// LR prefix per object: versions 0..prefix[d]-1 are cached.
struct Placement {
  std::vector<std::uint32_t> prefix;
  double value = 0.0;  // sum of lambda(d, v) over cached (d, v)
  double size = 0.0;
  bool cached(std::size_t d, std::size_t v) const noexcept { return v < prefix[d]; }
};

// Exact hit-rate maximizer over layered placements (budget plus layer-prefix
// constraints), solved as a multiple-choice knapsack: each object picks one
// version prefix. Sizes are quantized to `resolution`; costs round up and the
// budget rounds down, so the result is always feasible, and it is optimal
// when every size is a multiple of the resolution.
Placement static_optimal(const Catalog& catalog, double capacity, double resolution,
                         std::size_t memory_cap_bytes = std::size_t{1} << 30);

enum class HybridForm : std::uint8_t { kNone, kMr, kLr };

struct HybridEntry {
  HybridForm form = HybridForm::kNone;
  // MR: cached version; LR: number of cached layers.
  std::uint32_t value = 0;
};

struct HybridPlacement {
  std::vector<HybridEntry> entries;
  double value = 0.0;
  double size = 0.0;
  bool serves(std::size_t d, std::size_t v) const noexcept;
};

// Static greedy hybrid LFU: one pass over (object, version) pairs in
// decreasing rate order (ties: smaller object, then smaller version).
HybridPlacement hlfu_static_placement(const Catalog& catalog, double capacity);

// Replays a fixed placement: a request hits iff the placement serves it.
class StaticPolicy final : public Policy {
 public:
  StaticPolicy(const Catalog& catalog, double capacity, const Placement& placement);
  StaticPolicy(const Catalog& catalog, double capacity, const HybridPlacement& placement);
  std::string_view name() const override { return name_; }
  AccessResult access(Request request) override;
  const CacheState& state() const override { return state_; }

 private:
  std::string name_;
  CacheState state_;
  Table<std::uint8_t> serves_;
};

struct PolicyOptions {
  double resolution = 0.0;  // static-opt quantization; 0 picks a default
  std::uint64_t lfu_decay_threshold = 0;
  std::size_t memory_cap_bytes = std::size_t{1} << 30;
};

// Names: llru, llfu, lbelady, mrlru, hlru, hlfu-static, static-opt.
const std::vector<std::string>& policy_names();
bool is_policy_name(std::string_view name);
bool policy_needs_mr_sizes(std::string_view name);

// `trace` is required for lbelady and ignored otherwise.
std::unique_ptr<Policy> make_policy(std::string_view name, const Catalog& catalog,
                                    double capacity, const Trace* trace = nullptr,
                                    const PolicyOptions& options = {});

// Default quantization step for static-opt: the largest step (capped at 1)
// that divides every layer size exactly, else 1e-3 of the smallest layer.
double default_resolution(const Catalog& catalog);

}  // namespace layercache
