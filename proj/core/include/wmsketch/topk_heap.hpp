#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "wmsketch/types.hpp"

namespace wmsketch {

// Bounded indexed min-heap keyed by (key asc, id desc): the root is the entry
// that loses comparisons, so ties evict the larger id and the smaller id
// survives. Each entry carries a payload value alongside its ordering key.
template <class Key>
class TopKHeap {
 public:
  struct Entry {
    feature_t id;
    Key key;
    double value;
  };

  explicit TopKHeap(size_t capacity) : capacity_(capacity) {}

  static bool weaker(Key ka, feature_t ida, Key kb, feature_t idb) {
    if (ka != kb) return ka < kb;
    return ida > idb;
  }

  size_t capacity() const { return capacity_; }
  size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }
  bool full() const { return heap_.size() >= capacity_; }
  bool contains(feature_t id) const { return pos_.find(id) != pos_.end(); }

  const Entry* find(feature_t id) const {
    auto it = pos_.find(id);
    return it == pos_.end() ? nullptr : &heap_[it->second];
  }

  void insert(feature_t id, Key key, double value) {
    if (contains(id)) throw std::logic_error("heap already contains id");
    if (full()) throw std::logic_error("heap at capacity");
    heap_.push_back({id, key, value});
    pos_[id] = heap_.size() - 1;
    sift_up(heap_.size() - 1);
  }

  void update(feature_t id, Key key, double value) {
    auto it = pos_.find(id);
    if (it == pos_.end()) throw std::logic_error("heap does not contain id");
    size_t i = it->second;
    heap_[i].key = key;
    heap_[i].value = value;
    sift_up(i);
    sift_down(i);
  }

  const Entry& weakest() const {
    if (heap_.empty()) throw std::logic_error("heap is empty");
    return heap_[0];
  }

  void pop_weakest() {
    if (heap_.empty()) throw std::logic_error("heap is empty");
    remove_at(0);
  }

  void erase(feature_t id) {
    auto it = pos_.find(id);
    if (it == pos_.end()) throw std::logic_error("heap does not contain id");
    remove_at(it->second);
  }

  void clear() {
    heap_.clear();
    pos_.clear();
  }

  // Entries in heap order (not sorted).
  const std::vector<Entry>& entries() const { return heap_; }

  // In-place rewrite of keys/values. The rewrite must preserve the relative
  // order of keys (e.g. scaling by a positive factor), since no re-heapify
  // is performed.
  template <class F>
  void transform_monotone(F f) {
    for (auto& e : heap_) f(e);
  }

 private:
  static bool weaker(const Entry& a, const Entry& b) {
    return weaker(a.key, a.id, b.key, b.id);
  }

  void remove_at(size_t i) {
    pos_.erase(heap_[i].id);
    if (i + 1 != heap_.size()) {
      heap_[i] = heap_.back();
      heap_.pop_back();
      pos_[heap_[i].id] = i;
      sift_up(i);
      sift_down(i);
    } else {
      heap_.pop_back();
    }
  }

  void sift_up(size_t i) {
    while (i > 0) {
      size_t parent = (i - 1) / 2;
      if (!weaker(heap_[i], heap_[parent])) break;
      swap_entries(i, parent);
      i = parent;
    }
  }

  void sift_down(size_t i) {
    for (;;) {
      size_t l = 2 * i + 1, r = 2 * i + 2, m = i;
      if (l < heap_.size() && weaker(heap_[l], heap_[m])) m = l;
      if (r < heap_.size() && weaker(heap_[r], heap_[m])) m = r;
      if (m == i) break;
      swap_entries(i, m);
      i = m;
    }
  }

  void swap_entries(size_t a, size_t b) {
    std::swap(heap_[a], heap_[b]);
    pos_[heap_[a].id] = a;
    pos_[heap_[b].id] = b;
  }

  size_t capacity_;
  std::vector<Entry> heap_;
  std::unordered_map<feature_t, size_t> pos_;
};

}  // namespace wmsketch
