#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace layercache {

// Intrusive doubly-linked list over a fixed universe of unit ids [0, n).
// Oldest at the head, newest at the tail; O(1) move/remove.
class RecencyList {
 public:
  using Id = std::uint32_t;
  static constexpr Id npos = std::numeric_limits<Id>::max();

  explicit RecencyList(std::size_t universe)
      : prev_(universe, npos), next_(universe, npos), linked_(universe, 0) {}

  bool contains(Id id) const noexcept { return linked_[id] != 0; }
  bool empty() const noexcept { return head_ == npos; }
  std::size_t size() const noexcept { return size_; }

  Id oldest() const noexcept { return head_; }
  Id newest() const noexcept { return tail_; }
  Id newer(Id id) const noexcept { return next_[id]; }
  Id older(Id id) const noexcept { return prev_[id]; }

  // Links `id` at the newest end, unlinking it first if present.
  void touch(Id id) noexcept {
    if (contains(id)) {
      if (id == tail_) return;
      unlink(id);
    }
    prev_[id] = tail_;
    next_[id] = npos;
    if (tail_ != npos) next_[tail_] = id;
    tail_ = id;
    if (head_ == npos) head_ = id;
    linked_[id] = 1;
    ++size_;
  }

  void remove(Id id) noexcept {
    if (contains(id)) unlink(id);
  }

 private:
  void unlink(Id id) noexcept {
    const Id p = prev_[id];
    const Id n = next_[id];
    if (p != npos) next_[p] = n; else head_ = n;
    if (n != npos) prev_[n] = p; else tail_ = p;
    prev_[id] = next_[id] = npos;
    linked_[id] = 0;
    --size_;
  }

  std::vector<Id> prev_;
  std::vector<Id> next_;
  std::vector<std::uint8_t> linked_;
  Id head_ = npos;
  Id tail_ = npos;
  std::size_t size_ = 0;
};

}  // namespace layercache
