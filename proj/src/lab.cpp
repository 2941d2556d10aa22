#include "rlab/lab.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "rlab/rng.hpp"

namespace rlab {

namespace {

// Stream tags for derive_seed, kept apart from grid-point indices.
constexpr std::uint64_t kCoupledStream = 0xC0C0'0000'0000'0001ULL;
constexpr std::uint64_t kUndirectedStream = 0xC0C0'0000'0000'0002ULL;
constexpr std::uint64_t kDirectedStream = 0xC0C0'0000'0000'0003ULL;

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

SearchOptions search_options(const SweepConfig& config) {
  SearchOptions options;
  options.mode = config.mode;
  options.budget = config.budget;
  return options;
}

struct TrialOutcome {
  SearchStatus status = SearchStatus::NotFound;
  std::uint64_t nodes = 0;
};

SweepResult summarize(double p, const TrialOutcome* outcomes, long count, long stride) {
  SweepResult row;
  row.p = p;
  row.trials = count;
  std::uint64_t nodes = 0;
  for (long t = 0; t < count; ++t) {
    const TrialOutcome& o = outcomes[t * stride];
    nodes += o.nodes;
    switch (o.status) {
      case SearchStatus::Found: ++row.found; break;
      case SearchStatus::NotFound: ++row.not_found; break;
      case SearchStatus::Unknown: ++row.unknown; break;
    }
  }
  const long decided = row.found + row.not_found;
  row.phat = decided > 0 ? static_cast<double>(row.found) / static_cast<double>(decided) : 0.0;
  const Interval ci = wilson_interval(row.found, decided);
  row.ci_lo = ci.lo;
  row.ci_hi = ci.hi;
  row.mean_nodes = static_cast<double>(nodes) / static_cast<double>(count);
  return row;
}

Spacing parse_spacing(const std::string& s) {
  if (s == "linear" || s == "lin") return Spacing::Linear;
  if (s == "geometric" || s == "geom" || s == "log") return Spacing::Geometric;
  throw Error(ErrorKind::InvalidInput, "unknown grid spacing '" + s + "'");
}

}  // namespace

PGrid PGrid::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3 && parts.size() != 4) {
    throw Error(ErrorKind::InvalidInput, "p-grid must be start:stop:points[:spacing]");
  }
  PGrid grid;
  try {
    std::size_t used = 0;
    grid.start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    grid.stop = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    grid.points = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidInput, "malformed p-grid '" + text + "'");
  }
  if (parts.size() == 4) grid.spacing = parse_spacing(parts[3]);
  return grid;
}

std::vector<double> PGrid::values() const {
  if (points < 1) throw Error(ErrorKind::InvalidInput, "p-grid needs at least one point");
  if (!(start >= 0.0 && stop <= 1.0 && start <= stop)) {
    throw Error(ErrorKind::InvalidInput, "p-grid must satisfy 0 <= start <= stop <= 1");
  }
  if (points == 1) return {start};
  if (!(start < stop)) throw Error(ErrorKind::InvalidInput, "p-grid with several points needs start < stop");
  if (spacing == Spacing::Geometric && !(start > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "geometric p-grid needs start > 0");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  const double steps = points - 1;
  for (int i = 0; i < points; ++i) {
    const double t = i / steps;
    out[static_cast<std::size_t>(i)] =
        spacing == Spacing::Linear ? start + (stop - start) * t : start * std::pow(stop / start, t);
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

long ColorRule::colors_for(long n) const {
  if (r.has_value() == c.has_value()) throw Error(ErrorKind::InvalidInput, "give exactly one of r and c");
  const long out = r ? *r : c->colors_for(n);
  if (out < 1) throw Error(ErrorKind::InvalidInput, "need at least one color");
  return out;
}

CycleSpec SweepConfig::spec() const {
  try {
    return CycleSpec::make(n, k, ell);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
}

void SweepConfig::validate() const {
  (void)spec();
  if (r() > std::numeric_limits<int>::max()) throw Error(ErrorKind::InvalidInput, "too many colors");
  if (grid.empty()) throw Error(ErrorKind::InvalidInput, "empty p-grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw Error(ErrorKind::InvalidInput, "grid values must lie in [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorKind::InvalidInput, "grid must be strictly increasing");
  }
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be at least 1");
  if (mode == SearchMode::Budgeted && budget == 0) throw Error(ErrorKind::InvalidInput, "budgeted mode needs a budget");
  if (workers < 0) throw Error(ErrorKind::InvalidInput, "workers must be nonnegative");
}

Interval wilson_interval(long successes, long trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  // Rounding can push an endpoint past phat at 0 or 1.
  ci.lo = std::min(ci.lo, phat);
  ci.hi = std::max(ci.hi, phat);
  return ci;
}

std::vector<SweepResult> run_sweep(const SweepConfig& config) {
  config.validate();
  const CycleSpec spec = config.spec();
  const auto r = static_cast<int>(config.r());
  const SearchOptions options = search_options(config);
  const auto points = static_cast<long>(config.grid.size());
  const long total = points * config.trials;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(config.workers))
  for (long idx = 0; idx < total; ++idx) {
    const long point = idx / config.trials;
    const long trial = idx % config.trials;
    const std::uint64_t seed =
        derive_seed(config.seed, static_cast<std::uint64_t>(point), static_cast<std::uint64_t>(trial));
    const ColoredHypergraph h =
        sample_colored(spec.n, spec.k, config.grid[static_cast<std::size_t>(point)], r, seed);
    const SearchOutcome out = find_rainbow_cycle(h, spec, options);
    outcomes[static_cast<std::size_t>(idx)] = {out.status, out.nodes_expanded};
  }

  std::vector<SweepResult> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (long point = 0; point < points; ++point) {
    rows.push_back(summarize(config.grid[static_cast<std::size_t>(point)],
                             outcomes.data() + point * config.trials, config.trials, 1));
  }
  return rows;
}

CoupledSweep run_coupled_sweep(const SweepConfig& config) {
  config.validate();
  const CycleSpec spec = config.spec();
  const auto r = static_cast<int>(config.r());
  const SearchOptions options = search_options(config);
  const auto points = static_cast<long>(config.grid.size());
  // Trial-major: slot (trial, point) at trial * points + point.
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(points * config.trials));

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(config.workers))
  for (long trial = 0; trial < config.trials; ++trial) {
    const CoupledInstance inst(spec.n, spec.k, r,
                               derive_seed(config.seed, kCoupledStream, static_cast<std::uint64_t>(trial)));
    for (long point = 0; point < points; ++point) {
      const SearchOutcome out = find_rainbow_cycle(inst.realize(config.grid[static_cast<std::size_t>(point)]), spec, options);
      outcomes[static_cast<std::size_t>(trial * points + point)] = {out.status, out.nodes_expanded};
    }
  }

  CoupledSweep sweep;
  for (long point = 0; point < points; ++point) {
    sweep.rows.push_back(
        summarize(config.grid[static_cast<std::size_t>(point)], outcomes.data() + point, config.trials, points));
  }
  sweep.outcomes.resize(static_cast<std::size_t>(config.trials));
  for (long trial = 0; trial < config.trials; ++trial) {
    auto& row = sweep.outcomes[static_cast<std::size_t>(trial)];
    for (long point = 0; point < points; ++point) row.push_back(outcomes[static_cast<std::size_t>(trial * points + point)].status);
  }
  return sweep;
}

long count_monotonicity_violations(const CoupledSweep& sweep) {
  long violations = 0;
  for (const auto& trial : sweep.outcomes) {
    bool seen_found = false;
    for (SearchStatus s : trial) {
      if (s == SearchStatus::Found) seen_found = true;
      if (s == SearchStatus::NotFound && seen_found) ++violations;
    }
  }
  return violations;
}

double pooled_standard_error(long x1, long n1, long x2, long n2) {
  if (n1 <= 0 || n2 <= 0) return 0.0;
  const double pooled = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
  return std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
}

CoupleResult couple_experiment(int n, int k, double p, long trials, std::uint64_t seed, int workers) {
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be at least 1");
  if (!(p >= 0.0)) throw Error(ErrorKind::InvalidInput, "p must be nonnegative");
  CycleSpec spec;
  try {
    spec = CycleSpec::make(n, k, 1);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidInput, e.what());
  }
  CoupleResult res;
  res.p = p;
  res.q = q_from_p(p);
  res.trials = trials;
  const int r = spec.m;

  std::vector<char> found_u(static_cast<std::size_t>(trials), 0);
  std::vector<char> found_d(static_cast<std::size_t>(trials), 0);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
  for (long t = 0; t < trials; ++t) {
    const auto tu = static_cast<std::uint64_t>(t);
    const ColoredHypergraph hu = sample_colored(n, k, p, r, derive_seed(seed, kUndirectedStream, tu));
    const ColoredHypergraph hd = sample_directed(n, k, res.q, r, derive_seed(seed, kDirectedStream, tu));
    found_u[static_cast<std::size_t>(t)] = find_rainbow_cycle(hu, spec).status == SearchStatus::Found;
    found_d[static_cast<std::size_t>(t)] = find_rainbow_cycle(hd, spec).status == SearchStatus::Found;
  }
  for (long t = 0; t < trials; ++t) {
    res.found_undirected += found_u[static_cast<std::size_t>(t)];
    res.found_directed += found_d[static_cast<std::size_t>(t)];
  }
  const auto dt = static_cast<double>(trials);
  res.phat_undirected = static_cast<double>(res.found_undirected) / dt;
  res.phat_directed = static_cast<double>(res.found_directed) / dt;
  res.ci_undirected = wilson_interval(res.found_undirected, trials);
  res.ci_directed = wilson_interval(res.found_directed, trials);
  res.pooled_se = pooled_standard_error(res.found_undirected, trials, res.found_directed, trials);
  res.holds = res.phat_directed >= res.phat_undirected - 2.0 * res.pooled_se;
  return res;
}

std::optional<double> estimate_crossing(const std::vector<SweepResult>& rows, double level) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].phat == level) return rows[i].p;
    if (i + 1 == rows.size()) break;
    const double a = rows[i].phat - level;
    const double b = rows[i + 1].phat - level;
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
      const double t = a / (a - b);
      return rows[i].p + t * (rows[i + 1].p - rows[i].p);
    }
  }
  return std::nullopt;
}

std::string sweep_csv_header() { return "n,k,ell,r,p,trials,found,not_found,unknown,phat,ci_lo,ci_hi,mean_nodes"; }

void write_sweep_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepResult>& rows) {
  out << sweep_csv_header() << '\n';
  char line[512];
  for (const SweepResult& row : rows) {
    std::snprintf(line, sizeof line, "%d,%d,%d,%ld,%.10g,%ld,%ld,%ld,%ld,%.6f,%.6f,%.6f,%.3f\n", config.n,
                  config.k, config.ell, config.r(), row.p, row.trials, row.found, row.not_found, row.unknown,
                  row.phat, row.ci_lo, row.ci_hi, row.mean_nodes);
    out << line;
  }
}

}  // namespace rlab
