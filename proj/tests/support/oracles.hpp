// Independent reference implementations used as test oracles. They share no
// code with the library beyond the Catalog and Trace types.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <list>
#include <map>
#include <random>
#include <unordered_map>
#include <vector>

#include "catalog.hpp"
#include "workload.hpp"

namespace oracle {

using layercache::Catalog;
using layercache::Table;
using layercache::Trace;

// Best total rate over every per-object prefix choice (V+1)^D that fits B.
inline double static_optimum(const Catalog& c, double capacity) {
  const std::size_t D = c.objects();
  const std::size_t V = c.versions();
  std::vector<std::size_t> choice(D, 0);
  double best = 0.0;
  while (true) {
    double size = 0.0;
    double value = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
      size += c.lr_prefix(d, choice[d]);
      for (std::size_t v = 0; v < choice[d]; ++v) value += c.rate(d, v);
    }
    if (size <= capacity) best = std::max(best, value);
    std::size_t d = 0;
    while (d < D && ++choice[d] > V) choice[d++] = 0;
    if (d == D) break;
  }
  return best;
}

// What an offline schedule is charged for.
enum class MissUnit {
  kRequest,  // one per request that is not fully resident
  kLayer,    // one per requested layer that is not resident
};

// Minimum misses over every demand-paging schedule of a unit-layer catalog:
// on a miss the requested prefix is loaded and any set of other resident
// layers may be dropped, subject to the layer-prefix rule and the capacity.
// A request whose prefix exceeds the capacity misses and leaves the cache
// untouched. State = bitmask over (object, layer).
class OfflineMinimum {
 public:
  OfflineMinimum(std::size_t objects, std::size_t versions, std::size_t capacity, const Trace& trace,
                 MissUnit unit = MissUnit::kLayer)
      : D_(objects), V_(versions), B_(capacity), trace_(trace), unit_(unit) {}

  int solve() { return best(0, 0); }

 private:
  std::uint32_t bit(std::size_t d, std::size_t l) const { return 1u << (d * V_ + l); }

  bool prefix_closed(std::uint32_t mask) const {
    for (std::size_t d = 0; d < D_; ++d) {
      for (std::size_t l = 1; l < V_; ++l) {
        if ((mask & bit(d, l)) && !(mask & bit(d, l - 1))) return false;
      }
    }
    return true;
  }

  int best(std::size_t t, std::uint32_t mask) {
    if (t == trace_.size()) return 0;
    const auto key = (static_cast<std::uint64_t>(t) << 32) | mask;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto& r = trace_.entries[t];
    std::uint32_t need = 0;
    for (std::size_t l = 0; l <= r.version; ++l) need |= bit(r.object, l);
    const int cost = unit_ == MissUnit::kRequest ? 1 : std::popcount(need & ~mask);
    int result;
    if ((mask & need) == need) {
      result = best(t + 1, mask);
    } else if (static_cast<std::size_t>(std::popcount(need)) > B_) {
      result = cost + best(t + 1, mask);
    } else {
      // Keep `need` plus any prefix-closed subset of what was resident.
      const std::uint32_t optional = mask & ~need;
      result = std::numeric_limits<int>::max();
      for (std::uint32_t sub = optional;; sub = (sub - 1) & optional) {
        const std::uint32_t next = need | sub;
        if (static_cast<std::size_t>(std::popcount(next)) <= B_ && prefix_closed(next)) {
          result = std::min(result, best(t + 1, next));
        }
        if (sub == 0) break;
      }
      result += cost;
    }
    memo_.emplace(key, result);
    return result;
  }

  std::size_t D_, V_, B_;
  const Trace& trace_;
  MissUnit unit_;
  std::unordered_map<std::uint64_t, int> memo_;
};

// Plain size-aware LRU over whole objects; an object larger than the cache
// is bypassed.
class TextbookLru {
 public:
  TextbookLru(std::vector<double> sizes, double capacity) : sizes_(std::move(sizes)), B_(capacity) {}

  bool access(std::size_t d) {
    if (auto it = where_.find(d); it != where_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      return true;
    }
    if (sizes_[d] > B_) return false;
    while (used_ + sizes_[d] > B_) {
      const auto victim = order_.back();
      order_.pop_back();
      where_.erase(victim);
      used_ -= sizes_[victim];
    }
    order_.push_front(d);
    where_[d] = order_.begin();
    used_ += sizes_[d];
    return false;
  }

 private:
  std::vector<double> sizes_;
  double B_;
  double used_ = 0.0;
  std::list<std::size_t> order_;
  std::map<std::size_t, std::list<std::size_t>::iterator> where_;
};

// Plain LFU with counts kept for every object ever seen; ties go to the
// least recently used.
class TextbookLfu {
 public:
  TextbookLfu(std::vector<double> sizes, double capacity)
      : sizes_(std::move(sizes)), B_(capacity), count_(sizes_.size(), 0), last_(sizes_.size(), 0),
        cached_(sizes_.size(), false) {}

  bool access(std::size_t d) {
    ++clock_;
    ++count_[d];
    last_[d] = clock_;
    if (cached_[d]) return true;
    if (sizes_[d] > B_) return false;
    while (used_ + sizes_[d] > B_) {
      std::size_t victim = sizes_.size();
      for (std::size_t e = 0; e < sizes_.size(); ++e) {
        if (!cached_[e]) continue;
        if (victim == sizes_.size() || count_[e] < count_[victim] ||
            (count_[e] == count_[victim] && last_[e] < last_[victim])) {
          victim = e;
        }
      }
      cached_[victim] = false;
      used_ -= sizes_[victim];
    }
    cached_[d] = true;
    used_ += sizes_[d];
    return false;
  }

 private:
  std::vector<double> sizes_;
  double B_;
  std::vector<std::uint64_t> count_, last_;
  std::vector<bool> cached_;
  double used_ = 0.0;
  std::uint64_t clock_ = 0;
};

// Belady over whole objects: evict the cached object requested farthest in
// the future (never-again first; ties to the larger index).
class TextbookBelady {
 public:
  TextbookBelady(std::vector<double> sizes, double capacity, const Trace& trace)
      : sizes_(std::move(sizes)), B_(capacity), trace_(trace), cached_(sizes_.size(), false) {}

  bool access(std::size_t d) {
    const std::size_t t = t_++;
    if (cached_[d]) return true;
    if (sizes_[d] > B_) return false;
    while (used_ + sizes_[d] > B_) {
      std::size_t victim = sizes_.size();
      std::size_t victim_next = 0;
      for (std::size_t e = 0; e < sizes_.size(); ++e) {
        if (!cached_[e]) continue;
        const std::size_t next = next_use(e, t);
        if (victim == sizes_.size() || next > victim_next || (next == victim_next && e > victim)) {
          victim = e;
          victim_next = next;
        }
      }
      cached_[victim] = false;
      used_ -= sizes_[victim];
    }
    cached_[d] = true;
    used_ += sizes_[d];
    return false;
  }

 private:
  std::size_t next_use(std::size_t d, std::size_t t) const {
    for (std::size_t u = t + 1; u < trace_.size(); ++u) {
      if (trace_.entries[u].object == d) return u;
    }
    return std::numeric_limits<std::size_t>::max();
  }

  std::vector<double> sizes_;
  double B_;
  const Trace& trace_;
  std::vector<bool> cached_;
  double used_ = 0.0;
  std::size_t t_ = 0;
};

inline Catalog make_catalog(std::size_t D, std::size_t V, const std::vector<double>& sizes,
                            const std::vector<double>& rates) {
  return Catalog(Table<double>(D, V, sizes), Table<double>(D, V, rates));
}

// Random catalog with integer layer sizes in [1, max_size] and integer rates
// in [1, 100], plus MR sizes that satisfy the hybrid feasibility rules.
inline Catalog random_catalog(std::mt19937_64& rng, std::size_t D, std::size_t V, int max_size) {
  std::uniform_int_distribution<int> size(1, max_size);
  std::uniform_int_distribution<int> rate(1, 100);
  Table<double> delta(D, V), lambda(D, V), mr(D, V);
  for (std::size_t d = 0; d < D; ++d) {
    double prefix = 0.0;
    for (std::size_t v = 0; v < V; ++v) {
      delta(d, v) = size(rng);
      lambda(d, v) = rate(rng);
    }
    // s_MR(v) = s_LR(v) - delta(0)/4, so s_MR(0) + s_MR(v) >= s_LR(v).
    for (std::size_t v = 0; v < V; ++v) {
      prefix += delta(d, v);
      mr(d, v) = prefix - delta(d, 0) / 4;
    }
  }
  return Catalog(std::move(delta), std::move(lambda), std::move(mr));
}

}  // namespace oracle
