#pragma once

// Random colored hypergraph models and the auxiliary (k+1)-uniform graph
// that encodes colors as extra vertices.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rlab/core.hpp"

namespace rlab {

enum class SampleMode { Enumerate, Binomial };

const char* to_string(SampleMode mode);

// C(n, k) as an exact 64-bit count; throws TooLarge on overflow.
std::uint64_t binomial(int n, int k);

// Calls f(KSet) for every k-subset of [n] in lexicographic order.
template <class F>
void for_each_kset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::uint64_t mask = 0;
    for (int v : idx) mask |= std::uint64_t{1} << v;
    f(KSet(mask));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
  }
}

// H^(k)_{n,p,r}: every k-set independently with probability p, colored
// uniformly from [r]. Deterministic in (arguments, seed, mode).
ColoredHypergraph sample_colored(int n, int k, double p, int r, std::uint64_t seed,
                                 SampleMode mode = SampleMode::Enumerate);

// Monotone coupling: every k-set e gets a fixed uniform u_e and color c_e
// from (seed, e), so realize(p) grows with p and keeps colors.
//
//   h     = mix64(seed ^ mix64(mask(e)))
//   u_e   = top 53 bits of h, scaled to [0, 1)
//   c_e   = 1 + floor(mix64(h) * r / 2^64)
class CoupledInstance {
 public:
  CoupledInstance(int n, int k, int r, std::uint64_t seed);

  int n() const { return n_; }
  int k() const { return k_; }
  int r() const { return r_; }
  std::uint64_t seed() const { return seed_; }

  double uniform(KSet e) const;
  int color(KSet e) const;

  ColoredHypergraph realize(double p) const;

 private:
  int n_;
  int k_;
  int r_;
  std::uint64_t seed_;
};

// Smaller root of q - 2q^2 = p. Throws NoRealRoot for p > 1/8.
double q_from_p(double p);

// Directed colored model with orientations dropped: each of the k! orderings
// of every k-set is present with probability q and gets an independent
// uniform color; the k-set keeps the set of colors it received.
ColoredHypergraph sample_directed(int n, int k, double q, int r, std::uint64_t seed);

// X = [m], Y = [m+1, n], Z = [n+1, n+m] with m = n/(k-1).
struct GammaPartition {
  int n = 0;
  int m = 0;

  bool in_x(int v) const { return v >= 1 && v <= m; }
  bool in_y(int v) const { return v > m && v <= n; }
  bool in_z(int v) const { return v > n && v <= n + m; }
  KSet x_mask() const;
  KSet y_mask() const;
  KSet z_mask() const;
};

// (k+1)-uniform graph on [n+m] with an edge e + {c(e)+n} for each base edge
// e having exactly two vertices in X and k-2 in Y.
class GammaGraph {
 public:
  const ColoredHypergraph& base() const { return base_; }
  const GammaPartition& partition() const { return part_; }
  const std::vector<KSet>& edges() const { return edges_; }
  bool has_edge(KSet e) const;

  // (k+1)-uniform hypergraph on [n+m], colored by z - n.
  ColoredHypergraph as_hypergraph() const;

 private:
  friend GammaGraph build_gamma(const ColoredHypergraph& h);

  ColoredHypergraph base_;
  GammaPartition part_;
  std::vector<KSet> edges_;  // lexicographic order
};

// Throws InvalidInput unless (k-1) | n, r = n/(k-1), single-color mode and
// n + m <= 64.
GammaGraph build_gamma(const ColoredHypergraph& h);

// Base edges with |e & X| = 2 and |e & Y| = k-2.
bool is_gamma_shaped(const GammaPartition& part, int k, KSet e);
ColoredHypergraph restrict_to_gamma_shape(const ColoredHypergraph& h);

// Ordered loose cycle of G: consecutive edges (cyclically) meet in a single
// X vertex. Strips each edge's Z vertex into a color and returns the matching
// rainbow loose cycle of the base graph. Throws InvalidCycle otherwise.
RainbowCertificate gamma_cycle_to_rainbow(const GammaGraph& g, std::span<const KSet> cycle);

// Inverse direction: re-attach color vertices to a rainbow loose certificate
// of the base graph. Throws InvalidCycle when some joint is not in X.
std::vector<KSet> rainbow_to_gamma_cycle(const GammaGraph& g, const RainbowCertificate& cert);

// Exhaustive search for a loose Hamilton cycle of G whose joints are X
// (m >= 3; with two edges consecutive edges would share both X vertices).
std::optional<std::vector<KSet>> find_gamma_cycle(const GammaGraph& g);

// All pairs of (k+1)-sets sharing exactly k vertices, i.e. one base k-set
// carrying two colors. Pairs are ordered (first < second) and sorted.
std::vector<std::pair<KSet, KSet>> detect_color_collisions(std::span<const KSet> edges);

}  // namespace rlab
