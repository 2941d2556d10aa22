#pragma once

// Combinatorial objects: cycle geometry, colored k-uniform hypergraphs,
// hamperms and rainbow certificates.
//
// Vertices are 1-based everywhere in the public API. Internally a vertex set
// is a 64-bit mask (bit v-1 set for vertex v), which caps hypergraphs at 64
// vertices.

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rlab/error.hpp"

namespace rlab {

inline constexpr int kMaxVertices = 64;

// A canonical vertex set. Equivalent to the strictly increasing vertex list.
class KSet {
 public:
  constexpr KSet() = default;
  constexpr explicit KSet(std::uint64_t mask) : mask_(mask) {}

  // Throws InvalidInput on repeated or out-of-range vertices.
  static KSet of(std::span<const int> vertices);
  static KSet of(std::initializer_list<int> vertices) {
    return of(std::span<const int>(vertices.begin(), vertices.size()));
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int v) const { return (mask_ >> (v - 1)) & 1U; }
  constexpr int max_vertex() const { return mask_ == 0 ? 0 : 64 - std::countl_zero(mask_); }

  std::vector<int> vertices() const;
  std::string str() const;  // "{1,2,4}"

  friend constexpr KSet operator&(KSet a, KSet b) { return KSet(a.mask_ & b.mask_); }
  friend constexpr KSet operator|(KSet a, KSet b) { return KSet(a.mask_ | b.mask_); }
  friend constexpr bool operator==(KSet a, KSet b) = default;
  // Ordering of the sorted vertex lists (lexicographic), not of the masks.
  friend bool operator<(KSet a, KSet b);

 private:
  std::uint64_t mask_ = 0;
};

// Lexicographic comparator on canonical vertex lists.
bool lex_less(KSet a, KSet b);

// Geometry of an ell-overlapping Hamilton cycle on n vertices.
struct CycleSpec {
  int n = 0;
  int k = 0;
  int ell = 0;
  int m = 0;  // number of cycle edges, n / (k - ell)

  // Throws InvalidSpec unless 1 <= ell < k, k >= 2, (k - ell) | n and n > k.
  static CycleSpec make(int n, int k, int ell);

  int block() const { return k - ell; }
  bool tight() const { return ell == k - 1; }
  bool loose() const { return ell == 1; }

  friend bool operator==(const CycleSpec&, const CycleSpec&) = default;
};

// All specs with n <= max_n (n > k >= 2, 1 <= ell < k, (k - ell) | n).
std::vector<CycleSpec> all_specs_up_to(int max_n);

struct ColoredEdge {
  KSet vertices;
  int color = 0;
};

// k-uniform hypergraph on [n] whose edges carry colors from [r]. In
// multi-color mode one k-set may carry several colors.
class ColoredHypergraph {
 public:
  ColoredHypergraph() = default;
  ColoredHypergraph(int n, int k, int r, bool multi_color = false);

  int n() const { return n_; }
  int k() const { return k_; }
  int r() const { return r_; }
  bool multi_color() const { return multi_; }

  // Throws InvalidInput for a malformed k-set or color, a repeated
  // (k-set, color) pair, or a second color in single-color mode.
  void add(KSet e, int color);
  // Single-color mode: replaces the color of e (adding e if absent).
  void set_color(KSet e, int color);
  void erase(KSet e);

  bool has_edge(KSet e) const { return edges_.contains(e.mask()); }
  bool has(KSet e, int color) const;
  // Sorted colors carried by e; empty when e is absent.
  std::span<const int> colors(KSet e) const;

  std::size_t edge_count() const { return edges_.size(); }    // distinct k-sets
  std::size_t colored_edge_count() const;                     // (k-set, color) pairs
  // Every (k-set, color) pair, k-sets in lexicographic order.
  std::vector<ColoredEdge> sorted_edges() const;

  // Mask-ordered view for iteration.
  const std::map<std::uint64_t, std::vector<int>>& raw() const { return edges_; }

 private:
  void check_edge(KSet e, int color) const;

  int n_ = 0;
  int k_ = 0;
  int r_ = 0;
  bool multi_ = false;
  std::map<std::uint64_t, std::vector<int>> edges_;
};

// A permutation of [n] read as a candidate cycle for `spec`.
class Hamperm {
 public:
  // Throws InvalidInput unless pi is a bijection on [1, spec.n].
  Hamperm(std::vector<int> pi, CycleSpec spec);
  static Hamperm identity(CycleSpec spec);

  const std::vector<int>& pi() const { return pi_; }
  const CycleSpec& spec() const { return spec_; }

  // pi((i-1)(k-ell)+j) with positions taken cyclically; 1-based position.
  int at(int position) const { return pi_[static_cast<std::size_t>((position - 1) % spec_.n)]; }

 private:
  std::vector<int> pi_;
  CycleSpec spec_;
};

struct RainbowCertificate {
  Hamperm hamperm;
  std::vector<KSet> edges;
  std::vector<int> colors;
};

struct MissingEdge {
  int index = 0;  // 1-based induced edge number
};
struct NotRainbow {};

using Validation = std::variant<RainbowCertificate, MissingEdge, NotRainbow>;

// E_pi(i) = {pi((i-1)(k-ell)+j) : j in [k]}, i = 1..m.
std::vector<KSet> edges_of_hamperm(const Hamperm& pi);

// Throws InvalidInput when H and pi disagree on n or k.
Validation validate_cycle(const ColoredHypergraph& h, const Hamperm& pi);

bool verify_certificate(const ColoredHypergraph& h, const RainbowCertificate& cert);

// System of distinct representatives: picks one color per list, all distinct,
// by bipartite matching. nullopt when none exists.
std::optional<std::vector<int>> distinct_color_system(
    std::span<const std::span<const int>> lists);

}  // namespace rlab
