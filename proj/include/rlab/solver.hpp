#pragma once

// Rainbow cycle search plus the permutation-enumeration oracles.
//
// Every enumeration kernel comes in two flavors: `*_serial` walks all n!
// permutations in one std::next_permutation pass and is the reference; the
// unsuffixed function splits the permutations by their first two entries and
// runs the chunks under OpenMP. Both aggregate integer counts, so their
// results are identical for any thread count.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "rlab/core.hpp"

namespace rlab {

inline constexpr int kDefaultEnumerationLimit = 9;
inline constexpr int kDefaultPairwiseLimit = 7;

enum class SearchMode { Exhaustive, Budgeted };
enum class SearchStatus { Found, NotFound, Unknown };

const char* to_string(SearchMode mode);
const char* to_string(SearchStatus status);

struct SearchOptions {
  SearchMode mode = SearchMode::Exhaustive;
  std::uint64_t budget = 0;  // node expansions; budgeted mode only
  // Fix the order inside each (k-ell)-block. Existence-preserving only when
  // (k-ell) | k; rejected with InvalidInput otherwise.
  bool canonical_blocks = false;
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::NotFound;
  std::optional<RainbowCertificate> certificate;
  std::uint64_t nodes_expanded = 0;
  bool budget_hit = false;
  std::string reason;  // why NotFound was decided early, e.g. InsufficientColors
};

// Backtracking over vertex placements, block by block around the cycle.
// Vertex 1 is pinned to the first block (rotation by multiples of k-ell).
// Throws InvalidInput when H and spec disagree or budgeted mode has no budget.
SearchOutcome find_rainbow_cycle(const ColoredHypergraph& h, const CycleSpec& spec,
                                 const SearchOptions& options = {});

struct HampermCounts {
  std::uint64_t x_count = 0;  // permutations whose m induced edges all exist
  std::uint64_t y_count = 0;  // ... and admit distinct colors

  friend bool operator==(const HampermCounts&, const HampermCounts&) = default;
};

// Throws TooLarge when spec.n > limit.
HampermCounts count_hamperms_serial(const ColoredHypergraph& h, const CycleSpec& spec,
                                    int limit = kDefaultEnumerationLimit);
HampermCounts count_hamperms(const ColoredHypergraph& h, const CycleSpec& spec,
                             int limit = kDefaultEnumerationLimit, int workers = 0);

// N(b, a) against the identity hamperm. Shared edges are grouped into paths
// along the reference cycle's edge order: consecutive shared edges that
// intersect belong to one path, and paths meeting across the E_m / E_1 seam
// are merged. The full overlap b = m is recorded under a = 1.
struct OverlapProfile {
  CycleSpec spec;
  std::map<std::pair<int, int>, std::uint64_t> table;  // (b, a) -> count

  std::uint64_t total() const;
  std::uint64_t count_b(int b) const;  // N(b) = sum_a N(b, a)
};

OverlapProfile overlap_profile_serial(const CycleSpec& spec, int limit = kDefaultEnumerationLimit);
OverlapProfile overlap_profile(const CycleSpec& spec, int limit = kDefaultEnumerationLimit, int workers = 0);

// Number of overlap paths for a set of shared reference-edge indices (0-based,
// strictly increasing). Exposed for tests.
int overlap_paths(const CycleSpec& spec, const std::vector<int>& shared);

// E(Y^2) = n! sum_b N(b) p^{2m-b} ((r)_m / r^m) ((r-b)_{m-b} / r^{m-b}).
// Throws InvalidInput for r < m or p outside [0, 1].
mpq_class second_moment_from_profile(const OverlapProfile& profile, const mpq_class& p, long r);

// Histogram over ordered permutation pairs of (|E u E'|, |E n E'|).
using PairHistogram = std::map<std::pair<int, int>, std::uint64_t>;
PairHistogram pair_overlap_histogram_serial(const CycleSpec& spec, int limit = kDefaultPairwiseLimit);
PairHistogram pair_overlap_histogram(const CycleSpec& spec, int limit = kDefaultPairwiseLimit, int workers = 0);

// Sum over ordered pairs (pi, pi') of p^{|E u E'|} Pr(both rainbow), without
// the N(b, a) table.
mpq_class second_moment_bruteforce(const CycleSpec& spec, const mpq_class& p, long r,
                                   int limit = kDefaultPairwiseLimit, int workers = 0);

// E(Y) by summing Pr(pi is a rainbow hamperm) over all n! permutations; the
// rainbow probability of d edges is counted over all r^d color tuples.
mpq_class expected_Y_bruteforce(const CycleSpec& spec, const mpq_class& p, long r,
                                int limit = kDefaultEnumerationLimit);

}  // namespace rlab
