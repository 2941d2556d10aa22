#include "rlab/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <unordered_set>
#include <vector>

#include "detail.hpp"

namespace rlab {

const char* to_string(SearchMode mode) { return mode == SearchMode::Exhaustive ? "exhaustive" : "budgeted"; }

const char* to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Found: return "Found";
    case SearchStatus::NotFound: return "NotFound";
    case SearchStatus::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

void check_consistent(const ColoredHypergraph& h, const CycleSpec& spec) {
  if (h.n() != spec.n || h.k() != spec.k) {
    throw Error(ErrorKind::InvalidInput, "hypergraph and cycle spec disagree on n or k");
  }
}

// (k-1)-subsets of edges, so a partial edge can be rejected one vertex early.
class Shadow {
 public:
  Shadow(const ColoredHypergraph& h) : n_(h.n()) {
    if (n_ <= detail::EdgeLookup::kDenseLimit) dense_.assign(std::size_t{1} << n_, 0);
    for (const auto& [mask, colors] : h.raw())
      for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
        const std::uint64_t sub = mask & ~(rest & (~rest + 1));
        if (n_ <= detail::EdgeLookup::kDenseLimit) {
          dense_[sub] = 1;
        } else {
          sparse_.insert(sub);
        }
      }
  }

  bool contains(std::uint64_t mask) const {
    return n_ <= detail::EdgeLookup::kDenseLimit ? dense_[mask] != 0 : sparse_.contains(mask);
  }

 private:
  int n_;
  std::vector<char> dense_;
  std::unordered_set<std::uint64_t> sparse_;
};

class Search {
 public:
  Search(const ColoredHypergraph& h, const CycleSpec& spec, const SearchOptions& options)
      : h_(h), spec_(spec), options_(options), lookup_(h), shadow_(h),
        n_(spec.n), s_(spec.block()), k_(spec.k), m_(spec.m),
        pos_(static_cast<std::size_t>(n_), -1),
        complete_at_(static_cast<std::size_t>(n_)), prefix_at_(static_cast<std::size_t>(n_)),
        used_color_(static_cast<std::size_t>(h.r()) + 1, 0) {
    for (int i = 0; i < m_; ++i) {
      const int last = i * s_ + k_ - 1;
      if (last < n_) {
        complete_at_[static_cast<std::size_t>(last)].push_back(i);
        if (k_ >= 2) prefix_at_[static_cast<std::size_t>(last - 1)].push_back(i);
      } else {
        complete_at_[static_cast<std::size_t>(n_ - 1)].push_back(i);
      }
    }
    if (h.multi_color()) owner_.assign(static_cast<std::size_t>(h.r()) + 1, -1);
  }

  SearchOutcome run() {
    SearchOutcome out;
    const bool found = place(0);
    out.nodes_expanded = nodes_;
    if (aborted_) {
      out.status = SearchStatus::Unknown;
      out.budget_hit = true;
      return out;
    }
    if (!found) {
      out.status = SearchStatus::NotFound;
      return out;
    }
    std::vector<int> pi(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) pi[static_cast<std::size_t>(j)] = pos_[static_cast<std::size_t>(j)] + 1;
    Hamperm hp(std::move(pi), spec_);
    auto v = validate_cycle(h_, hp);
    out.status = SearchStatus::Found;
    out.certificate = std::get<RainbowCertificate>(std::move(v));
    return out;
  }

 private:
  std::uint64_t edge_mask(int i, int upto) const {
    std::uint64_t mask = 0;
    for (int t = 0; t < upto; ++t) {
      mask |= std::uint64_t{1} << pos_[static_cast<std::size_t>((i * s_ + t) % n_)];
    }
    return mask;
  }

  // Tries to extend the color assignment by one edge. Returns false on
  // conflict; on success records what to undo.
  bool take_colors(std::int32_t slot, std::vector<int>& undo_colors, std::size_t& undo_match) {
    if (!h_.multi_color()) {
      const int c = lookup_.first_color(slot);
      if (used_color_[static_cast<std::size_t>(c)]) return false;
      used_color_[static_cast<std::size_t>(c)] = 1;
      undo_colors.push_back(c);
      return true;
    }
    // Multi-color: keep a maximum matching of placed edges to colors and
    // augment from the new edge. Snapshots are restored on backtrack.
    snapshots_.push_back({owner_, assigned_});
    undo_match++;
    const auto me = static_cast<int>(assigned_.size());
    edge_colors_.push_back(&lookup_.colors(slot));
    assigned_.push_back(0);
    std::vector<char> seen(owner_.size(), 0);
    auto augment = [&](auto&& self, int e) -> bool {
      for (int c : *edge_colors_[static_cast<std::size_t>(e)]) {
        if (seen[static_cast<std::size_t>(c)]) continue;
        seen[static_cast<std::size_t>(c)] = 1;
        const int holder = owner_[static_cast<std::size_t>(c)];
        if (holder < 0 || self(self, holder)) {
          owner_[static_cast<std::size_t>(c)] = e;
          assigned_[static_cast<std::size_t>(e)] = c;
          return true;
        }
      }
      return false;
    };
    return augment(augment, me);
  }

  void release(std::vector<int>& undo_colors, std::size_t undo_match) {
    for (int c : undo_colors) used_color_[static_cast<std::size_t>(c)] = 0;
    undo_colors.clear();
    for (; undo_match > 0; --undo_match) {
      owner_ = std::move(snapshots_.back().first);
      assigned_ = std::move(snapshots_.back().second);
      snapshots_.pop_back();
      edge_colors_.pop_back();
    }
  }

  bool place(int j) {
    if (j == n_) return true;
    // Rotation symmetry: vertex 1 (index 0) sits in the first block.
    if (j == s_ && !(used_ & 1U)) return false;

    const bool ordered = options_.canonical_blocks && j % s_ != 0;
    const int lo = ordered ? pos_[static_cast<std::size_t>(j) - 1] + 1 : 0;
    std::vector<int> undo_colors;
    for (int v = lo; v < n_; ++v) {
      if ((used_ >> v) & 1U) continue;
      if (options_.mode == SearchMode::Budgeted && nodes_ >= options_.budget) {
        aborted_ = true;
        return false;
      }
      ++nodes_;
      pos_[static_cast<std::size_t>(j)] = v;
      used_ |= std::uint64_t{1} << v;

      bool ok = true;
      std::size_t undo_match = 0;
      for (int i : prefix_at_[static_cast<std::size_t>(j)]) {
        if (!shadow_.contains(edge_mask(i, k_ - 1))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (int i : complete_at_[static_cast<std::size_t>(j)]) {
          const std::int32_t slot = lookup_.slot(edge_mask(i, k_));
          if (slot < 0 || !take_colors(slot, undo_colors, undo_match)) {
            ok = false;
            break;
          }
        }
      }
      if (ok && place(j + 1)) return true;
      release(undo_colors, undo_match);
      used_ &= ~(std::uint64_t{1} << v);
      pos_[static_cast<std::size_t>(j)] = -1;
      if (aborted_) return false;
    }
    return false;
  }

  const ColoredHypergraph& h_;
  CycleSpec spec_;
  SearchOptions options_;
  detail::EdgeLookup lookup_;
  Shadow shadow_;
  int n_;
  int s_;
  int k_;
  int m_;
  std::vector<int> pos_;
  std::uint64_t used_ = 0;
  std::vector<std::vector<int>> complete_at_;
  std::vector<std::vector<int>> prefix_at_;
  std::vector<char> used_color_;
  std::vector<int> owner_;     // color -> placed edge index
  std::vector<int> assigned_;  // placed edge index -> color
  std::vector<const std::vector<int>*> edge_colors_;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> snapshots_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

SearchOutcome find_rainbow_cycle(const ColoredHypergraph& h, const CycleSpec& spec, const SearchOptions& options) {
  check_consistent(h, spec);
  if (options.mode == SearchMode::Budgeted && options.budget == 0) {
    throw Error(ErrorKind::InvalidInput, "budgeted search needs a positive budget");
  }
  if (options.canonical_blocks && spec.k % spec.block() != 0) {
    throw Error(ErrorKind::InvalidInput, "canonical blocks need (k - ell) | k");
  }

  SearchOutcome out;
  out.status = SearchStatus::NotFound;
  if (h.r() < spec.m) {
    out.reason = "InsufficientColors";
    return out;
  }
  std::uint64_t covered = 0;
  std::vector<char> seen_color(static_cast<std::size_t>(h.r()) + 1, 0);
  int distinct_colors = 0;
  for (const auto& [mask, colors] : h.raw()) {
    covered |= mask;
    for (int c : colors)
      if (!seen_color[static_cast<std::size_t>(c)]) {
        seen_color[static_cast<std::size_t>(c)] = 1;
        ++distinct_colors;
      }
  }
  if (distinct_colors < spec.m) {
    out.reason = "InsufficientColors";
    return out;
  }
  const std::uint64_t all = spec.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << spec.n) - 1;
  if (covered != all) {
    out.reason = "IsolatedVertex";
    return out;
  }
  return Search(h, spec, options).run();
}

namespace {

struct CountKernel {
  CountKernel(const ColoredHypergraph& h, const CycleSpec& spec) : h(h), tmpl(spec), lookup(h) {}

  void operator()(std::span<const int> perm, HampermCounts& acc) const {
    std::array<std::uint64_t, 64> masks{};
    std::array<std::int32_t, 64> slots{};
    tmpl.masks(perm, masks.data());
    for (int i = 0; i < tmpl.m; ++i) {
      slots[static_cast<std::size_t>(i)] = lookup.slot(masks[static_cast<std::size_t>(i)]);
      if (slots[static_cast<std::size_t>(i)] < 0) return;
    }
    ++acc.x_count;
    if (!h.multi_color()) {
      std::array<int, 64> colors{};
      for (int i = 0; i < tmpl.m; ++i) colors[static_cast<std::size_t>(i)] = lookup.first_color(slots[static_cast<std::size_t>(i)]);
      if (detail::all_distinct(colors.data(), tmpl.m)) ++acc.y_count;
      return;
    }
    std::vector<std::span<const int>> lists;
    for (int i = 0; i < tmpl.m; ++i) lists.emplace_back(lookup.colors(slots[static_cast<std::size_t>(i)]));
    if (distinct_color_system(lists)) ++acc.y_count;
  }

  const ColoredHypergraph& h;
  detail::EdgeTemplate tmpl;
  detail::EdgeLookup lookup;
};

void check_enumerable(const ColoredHypergraph& h, const CycleSpec& spec, int limit) {
  check_consistent(h, spec);
  if (spec.n > limit) throw Error(ErrorKind::TooLarge, "n exceeds the enumeration limit");
}

}  // namespace

HampermCounts count_hamperms_serial(const ColoredHypergraph& h, const CycleSpec& spec, int limit) {
  check_enumerable(h, spec, limit);
  const CountKernel kernel(h, spec);
  HampermCounts acc;
  detail::for_each_perm(spec.n, [&](std::span<const int> perm) { kernel(perm, acc); });
  return acc;
}

HampermCounts count_hamperms(const ColoredHypergraph& h, const CycleSpec& spec, int limit, int workers) {
  check_enumerable(h, spec, limit);
  const CountKernel kernel(h, spec);
  const int chunks = detail::perm_chunk_count(spec.n);
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) reduction(+ : x, y) num_threads(threads)
  for (int c = 0; c < chunks; ++c) {
    HampermCounts acc;
    detail::for_each_perm_in_chunk(spec.n, c, [&](std::span<const int> perm) { kernel(perm, acc); });
    x += acc.x_count;
    y += acc.y_count;
  }
  return {x, y};
}

}  // namespace rlab
