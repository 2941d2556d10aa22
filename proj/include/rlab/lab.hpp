#pragma once

// Monte Carlo sweeps over p. Trials are independent tasks seeded from
// (master, point, trial); results land in per-trial slots and are reduced in
// index order, so output is identical for any worker count.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlab/models.hpp"
#include "rlab/moments.hpp"
#include "rlab/solver.hpp"

namespace rlab {

enum class Spacing { Linear, Geometric };

struct PGrid {
  double start = 0.0;
  double stop = 1.0;
  int points = 2;
  Spacing spacing = Spacing::Linear;

  // "start:stop:points:spacing", spacing in {linear, geometric}.
  static PGrid parse(const std::string& text);
  std::vector<double> values() const;
};

// Either an explicit r or a density c with r = floor(c n).
struct ColorRule {
  std::optional<long> r;
  std::optional<ColorDensity> c;

  long colors_for(long n) const;
};

struct SweepConfig {
  int n = 0;
  int k = 0;
  int ell = 0;
  ColorRule colors;
  std::vector<double> grid;
  long trials = 1;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::Exhaustive;
  std::uint64_t budget = 0;
  int workers = 1;  // 0 = OpenMP default

  CycleSpec spec() const;  // throws InvalidInput on a bad (n, k, ell)
  long r() const { return colors.colors_for(n); }
  void validate() const;
};

struct SweepResult {
  double p = 0.0;
  long trials = 0;
  long found = 0;
  long not_found = 0;
  long unknown = 0;
  double phat = 0.0;  // found / (trials - unknown); 0 when every trial is unknown
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  double mean_nodes = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval; [0, 1] for zero trials.
Interval wilson_interval(long successes, long trials, double z = 1.96);

std::vector<SweepResult> run_sweep(const SweepConfig& config);

struct CoupledSweep {
  std::vector<SweepResult> rows;
  std::vector<std::vector<SearchStatus>> outcomes;  // [trial][point]
};

// Every grid point reuses trial t's CoupledInstance, so outcomes are nested.
CoupledSweep run_coupled_sweep(const SweepConfig& config);

// Pairs (trial, point) where Found at a smaller p is followed by NotFound.
long count_monotonicity_violations(const CoupledSweep& sweep);

struct CoupleResult {
  double p = 0.0;
  double q = 0.0;
  long trials = 0;
  long found_undirected = 0;
  long found_directed = 0;
  double phat_undirected = 0.0;
  double phat_directed = 0.0;
  Interval ci_undirected;
  Interval ci_directed;
  double pooled_se = 0.0;
  bool holds = false;  // phat_directed >= phat_undirected - 2 pooled_se
};

// Loose cycles (ell = 1) with r = n/(k-1): the plain model at p against the
// directed model at q_from_p(p), each solved exhaustively.
CoupleResult couple_experiment(int n, int k, double p, long trials, std::uint64_t seed, int workers = 1);

// Two-sample standard error of phat1 - phat2 under the pooled proportion.
double pooled_standard_error(long x1, long n1, long x2, long n2);

// Linear interpolation at the first grid interval where phat reaches `level`.
// Rows must be sorted by p.
std::optional<double> estimate_crossing(const std::vector<SweepResult>& rows, double level = 0.5);

void write_sweep_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepResult>& rows);
std::string sweep_csv_header();

}  // namespace rlab
