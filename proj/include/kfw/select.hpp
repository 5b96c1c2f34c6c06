#pragma once

// k-smallest selection with deterministic tie-breaking.
//
// Returns the indices of the k smallest keys in ascending key order; equal
// keys are ordered by smaller index. Implemented with a bounded max-heap so
// the cost is O(n log k) instead of a full sort.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kfw {

struct KeyIdx {
  double key;
  std::size_t idx;
};

// (key, idx) lexicographic "less" — the total order used everywhere ties can
// occur, so selection results are reproducible.
inline bool key_idx_less(const KeyIdx& a, const KeyIdx& b) {
  if (a.key != b.key) return a.key < b.key;
  return a.idx < b.idx;
}

inline std::vector<std::size_t> select_k_smallest(const double* keys,
                                                  std::size_t n,
                                                  std::size_t k) {
  if (k == 0 || k > n)
    throw std::invalid_argument("select_k_smallest: need 0 < k <= n");
  // Max-heap of the best k seen so far; root is the current worst keeper.
  std::vector<KeyIdx> heap;
  heap.reserve(k);
  for (std::size_t i = 0; i < n; ++i) {
    const KeyIdx cand{keys[i], i};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), key_idx_less);
    } else if (key_idx_less(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), key_idx_less);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), key_idx_less);
    }
  }
  std::sort(heap.begin(), heap.end(), key_idx_less);
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = heap[i].idx;
  return out;
}

inline std::vector<std::size_t> select_k_smallest(
    const std::vector<double>& keys, std::size_t k) {
  return select_k_smallest(keys.data(), keys.size(), k);
}

// Convenience: k largest = k smallest of negated keys, same tie rule
// (smaller index wins among equal keys).
inline std::vector<std::size_t> select_k_largest(const std::vector<double>& keys,
                                                 std::size_t k) {
  std::vector<double> neg(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) neg[i] = -keys[i];
  return select_k_smallest(neg.data(), neg.size(), k);
}

}  // namespace kfw
