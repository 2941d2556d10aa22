#pragma once

// Internal helpers shared by the enumeration kernels and the search.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include "rlab/core.hpp"

namespace rlab::detail {

// Positions (0-based, mod n) of every induced edge of a CycleSpec.
struct EdgeTemplate {
  explicit EdgeTemplate(const CycleSpec& spec) : m(spec.m), k(spec.k), positions(static_cast<std::size_t>(spec.m * spec.k)) {
    for (int i = 0; i < spec.m; ++i)
      for (int t = 0; t < spec.k; ++t)
        positions[static_cast<std::size_t>(i * spec.k + t)] = (i * spec.block() + t) % spec.n;
  }

  // Edge masks of a 0-based permutation.
  void masks(std::span<const int> perm, std::uint64_t* out) const {
    const int* pos = positions.data();
    for (int i = 0; i < m; ++i) {
      std::uint64_t mask = 0;
      for (int t = 0; t < k; ++t) mask |= std::uint64_t{1} << perm[static_cast<std::size_t>(*pos++)];
      out[i] = mask;
    }
  }

  int m;
  int k;
  std::vector<int> positions;
};

// Mask -> colors lookup; dense table for small n.
class EdgeLookup {
 public:
  static constexpr int kDenseLimit = 16;

  explicit EdgeLookup(const ColoredHypergraph& h) : n_(h.n()) {
    slots_.reserve(h.edge_count());
    if (n_ <= kDenseLimit) dense_.assign(std::size_t{1} << n_, -1);
    for (const auto& [mask, colors] : h.raw()) {
      const auto slot = static_cast<std::int32_t>(slots_.size());
      slots_.push_back(colors);
      if (n_ <= kDenseLimit) {
        dense_[mask] = slot;
      } else {
        sparse_.emplace(mask, slot);
      }
    }
  }

  std::int32_t slot(std::uint64_t mask) const {
    if (n_ <= kDenseLimit) return dense_[mask];
    auto it = sparse_.find(mask);
    return it == sparse_.end() ? -1 : it->second;
  }

  const std::vector<int>& colors(std::int32_t slot) const { return slots_[static_cast<std::size_t>(slot)]; }
  int first_color(std::int32_t slot) const { return slots_[static_cast<std::size_t>(slot)].front(); }

 private:
  int n_;
  std::vector<std::int32_t> dense_;
  std::unordered_map<std::uint64_t, std::int32_t> sparse_;
  std::vector<std::vector<int>> slots_;
};

// Permutations of {0..n-1} split into n(n-1) chunks by their first two
// entries (a single chunk when n < 2). Within a chunk the tail runs through
// std::next_permutation order.
inline int perm_chunk_count(int n) { return n < 2 ? 1 : n * (n - 1); }

template <class Visit>
void for_each_perm_in_chunk(int n, int chunk, Visit&& visit) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  if (n < 2) {
    std::iota(perm.begin(), perm.end(), 0);
    visit(std::span<const int>(perm));
    return;
  }
  const int first = chunk / (n - 1);
  int second = chunk % (n - 1);
  if (second >= first) ++second;
  perm[0] = first;
  perm[1] = second;
  std::size_t at = 2;
  for (int v = 0; v < n; ++v)
    if (v != first && v != second) perm[at++] = v;
  do {
    visit(std::span<const int>(perm));
  } while (std::next_permutation(perm.begin() + 2, perm.end()));
}

template <class Visit>
void for_each_perm(int n, Visit&& visit) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    visit(std::span<const int>(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

// Pairwise-distinct check for a short color list.
inline bool all_distinct(const int* colors, int count) {
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j)
      if (colors[i] == colors[j]) return false;
  return true;
}

}  // namespace rlab::detail
