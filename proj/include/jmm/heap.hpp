#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace jmm {

/// Array-based binary min-heap of node indices keyed on an external value
/// array, with back-pointers for decrease-key.
class NodeHeap {
 public:
  NodeHeap(const std::vector<double>& keys) : keys_(keys), pos_(keys.size(), -1) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(int n) const { return pos_[n] >= 0; }
  int top() const { return heap_.front(); }

  void push(int n) {
    assert(!contains(n));
    pos_[n] = static_cast<int>(heap_.size());
    heap_.push_back(n);
    sift_up(pos_[n]);
  }

  /// Restores order after keys[n] decreased.
  void decrease(int n) { sift_up(pos_[n]); }

  int pop() {
    const int n = heap_.front();
    swap_at(0, static_cast<int>(heap_.size()) - 1);
    heap_.pop_back();
    pos_[n] = -1;
    if (!heap_.empty()) sift_down(0);
    return n;
  }

  /// Heap order and back-pointer consistency.
  bool verify() const {
    for (std::size_t k = 0; k < heap_.size(); ++k) {
      if (pos_[heap_[k]] != static_cast<int>(k)) return false;
      if (k > 0 && key(heap_[(k - 1) / 2]) > key(heap_[k])) return false;
    }
    return true;
  }

 private:
  double key(int n) const { return keys_[n]; }

  void swap_at(int a, int b) {
    std::swap(heap_[a], heap_[b]);
    pos_[heap_[a]] = a;
    pos_[heap_[b]] = b;
  }

  void sift_up(int k) {
    while (k > 0) {
      const int p = (k - 1) / 2;
      if (!(key(heap_[k]) < key(heap_[p]))) break;
      swap_at(k, p);
      k = p;
    }
  }

  void sift_down(int k) {
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int m = k;
      const int l = 2 * k + 1, r = l + 1;
      if (l < n && key(heap_[l]) < key(heap_[m])) m = l;
      if (r < n && key(heap_[r]) < key(heap_[m])) m = r;
      if (m == k) break;
      swap_at(k, m);
      k = m;
    }
  }

  const std::vector<double>& keys_;
  std::vector<int> heap_;
  std::vector<int> pos_;
};

}  // namespace jmm
