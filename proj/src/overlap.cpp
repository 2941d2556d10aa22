#include <omp.h>

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <vector>

#include "detail.hpp"
#include "rlab/rational.hpp"
#include "rlab/solver.hpp"

namespace rlab {

std::uint64_t OverlapProfile::total() const {
  std::uint64_t sum = 0;
  for (const auto& [key, count] : table) sum += count;
  return sum;
}

std::uint64_t OverlapProfile::count_b(int b) const {
  std::uint64_t sum = 0;
  for (auto it = table.lower_bound({b, 0}); it != table.end() && it->first.first == b; ++it) sum += it->second;
  return sum;
}

namespace {

void check_limit(const CycleSpec& spec, int limit) {
  (void)CycleSpec::make(spec.n, spec.k, spec.ell);
  if (spec.n > limit) throw Error(ErrorKind::TooLarge, "n exceeds the enumeration limit");
}

class ProfileKernel {
 public:
  explicit ProfileKernel(const CycleSpec& spec)
      : spec_(spec), tmpl_(spec), ref_index_(std::size_t{1} << spec.n, -1),
        meets_(static_cast<std::size_t>(spec.m * spec.m), 0) {
    std::vector<int> identity(static_cast<std::size_t>(spec.n));
    for (int v = 0; v < spec.n; ++v) identity[static_cast<std::size_t>(v)] = v;
    std::vector<std::uint64_t> ref(static_cast<std::size_t>(spec.m));
    tmpl_.masks(identity, ref.data());
    for (int i = 0; i < spec.m; ++i) {
      ref_index_[ref[static_cast<std::size_t>(i)]] = i;
      for (int j = 0; j < spec.m; ++j) {
        meets_[static_cast<std::size_t>(i * spec.m + j)] =
            (ref[static_cast<std::size_t>(i)] & ref[static_cast<std::size_t>(j)]) != 0;
      }
    }
  }

  // Flat (b, a) histogram of size (m+1)^2.
  void operator()(std::span<const int> perm, std::vector<std::uint64_t>& hist) const {
    std::array<std::uint64_t, 64> masks{};
    std::array<int, 64> shared{};
    tmpl_.masks(perm, masks.data());
    int b = 0;
    for (int i = 0; i < spec_.m; ++i) {
      const int idx = ref_index_[masks[static_cast<std::size_t>(i)]];
      if (idx >= 0) shared[static_cast<std::size_t>(b++)] = idx;
    }
    std::sort(shared.begin(), shared.begin() + b);
    const int a = paths(shared.data(), b);
    ++hist[static_cast<std::size_t>(b * (spec_.m + 1) + a)];
  }

  int paths(const int* shared, int b) const {
    if (b == 0) return 0;
    if (b == 1 || b == spec_.m) return 1;
    int breaks = 0;
    for (int t = 0; t < b; ++t) {
      const int i = shared[t];
      const int j = shared[(t + 1) % b];
      if (!meets_[static_cast<std::size_t>(i * spec_.m + j)]) ++breaks;
    }
    return std::max(breaks, 1);
  }

  OverlapProfile finish(const std::vector<std::uint64_t>& hist) const {
    OverlapProfile out{spec_, {}};
    for (int b = 0; b <= spec_.m; ++b)
      for (int a = 0; a <= spec_.m; ++a) {
        const std::uint64_t c = hist[static_cast<std::size_t>(b * (spec_.m + 1) + a)];
        if (c != 0 || (b == 0 && a == 0)) out.table[{b, a}] = c;
      }
    return out;
  }

  std::size_t hist_size() const { return static_cast<std::size_t>((spec_.m + 1) * (spec_.m + 1)); }

 private:
  CycleSpec spec_;
  detail::EdgeTemplate tmpl_;
  std::vector<int> ref_index_;
  std::vector<char> meets_;
};

}  // namespace

int overlap_paths(const CycleSpec& spec, const std::vector<int>& shared) {
  if (spec.n > 24) throw Error(ErrorKind::TooLarge, "overlap paths limited to n <= 24");
  ProfileKernel kernel(spec);
  return kernel.paths(shared.data(), static_cast<int>(shared.size()));
}

OverlapProfile overlap_profile_serial(const CycleSpec& spec, int limit) {
  check_limit(spec, limit);
  const ProfileKernel kernel(spec);
  std::vector<std::uint64_t> hist(kernel.hist_size(), 0);
  detail::for_each_perm(spec.n, [&](std::span<const int> perm) { kernel(perm, hist); });
  return kernel.finish(hist);
}

OverlapProfile overlap_profile(const CycleSpec& spec, int limit, int workers) {
  check_limit(spec, limit);
  const ProfileKernel kernel(spec);
  std::vector<std::uint64_t> hist(kernel.hist_size(), 0);
  const int chunks = detail::perm_chunk_count(spec.n);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<std::uint64_t> local(kernel.hist_size(), 0);
#pragma omp for schedule(dynamic)
    for (int c = 0; c < chunks; ++c) {
      detail::for_each_perm_in_chunk(spec.n, c, [&](std::span<const int> perm) { kernel(perm, local); });
    }
#pragma omp critical
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += local[i];
  }
  return kernel.finish(hist);
}

namespace {

void check_moment_args(const CycleSpec& spec, const mpq_class& p, long r) {
  if (p < 0 || p > 1) throw Error(ErrorKind::InvalidInput, "p must lie in [0, 1]");
  if (r < spec.m) throw Error(ErrorKind::InvalidInput, "r < m: no rainbow cycle can exist");
}

// ((r)_m / r^m) ((r-b)_{m-b} / r^{m-b})
mpq_class both_rainbow(long r, int m, int b) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(2 * m - b));
  mpq_class out(falling_z(r, m) * falling_z(r - b, m - b), den);
  out.canonicalize();
  return out;
}

}  // namespace

mpq_class second_moment_from_profile(const OverlapProfile& profile, const mpq_class& p, long r) {
  const CycleSpec& spec = profile.spec;
  check_moment_args(spec, p, r);
  const int m = spec.m;
  mpq_class sum = 0;
  for (int b = 0; b <= m; ++b) {
    const std::uint64_t nb = profile.count_b(b);
    if (nb == 0) continue;
    sum += mpq_class(mpz_class(std::to_string(nb))) * pow_q(p, static_cast<unsigned long>(2 * m - b)) *
           both_rainbow(r, m, b);
  }
  return mpq_class(factorial_z(static_cast<unsigned long>(spec.n))) * sum;
}

namespace {

struct PairTable {
  explicit PairTable(const CycleSpec& spec) : m(spec.m) {
    const detail::EdgeTemplate tmpl(spec);
    detail::for_each_perm(spec.n, [&](std::span<const int> perm) {
      const std::size_t at = edges.size();
      edges.resize(at + static_cast<std::size_t>(m));
      tmpl.masks(perm, edges.data() + at);
      std::sort(edges.begin() + static_cast<std::ptrdiff_t>(at), edges.end());
    });
    count = edges.size() / static_cast<std::size_t>(m);
  }

  // Merge two sorted edge lists: (union size, intersection size).
  std::pair<int, int> overlap(std::size_t i, std::size_t j) const {
    const std::uint64_t* a = edges.data() + i * static_cast<std::size_t>(m);
    const std::uint64_t* b = edges.data() + j * static_cast<std::size_t>(m);
    int x = 0;
    int y = 0;
    int uni = 0;
    int inter = 0;
    while (x < m && y < m) {
      ++uni;
      if (a[x] == b[y]) {
        ++inter;
        ++x;
        ++y;
      } else if (a[x] < b[y]) {
        ++x;
      } else {
        ++y;
      }
    }
    uni += (m - x) + (m - y);
    return {uni, inter};
  }

  std::size_t slot(std::pair<int, int> key) const {
    return static_cast<std::size_t>(key.first * (m + 1) + key.second);
  }

  int m;
  std::size_t count = 0;
  std::vector<std::uint64_t> edges;
};

PairHistogram to_histogram(const PairTable& t, const std::vector<std::uint64_t>& flat) {
  PairHistogram out;
  for (int u = 0; u <= 2 * t.m; ++u)
    for (int b = 0; b <= t.m; ++b) {
      const std::uint64_t c = flat[t.slot({u, b})];
      if (c != 0) out[{u, b}] = c;
    }
  return out;
}

}  // namespace

PairHistogram pair_overlap_histogram_serial(const CycleSpec& spec, int limit) {
  check_limit(spec, limit);
  const PairTable t(spec);
  std::vector<std::uint64_t> flat(static_cast<std::size_t>((2 * t.m + 1) * (t.m + 1)), 0);
  for (std::size_t i = 0; i < t.count; ++i)
    for (std::size_t j = 0; j < t.count; ++j) ++flat[t.slot(t.overlap(i, j))];
  return to_histogram(t, flat);
}

PairHistogram pair_overlap_histogram(const CycleSpec& spec, int limit, int workers) {
  check_limit(spec, limit);
  const PairTable t(spec);
  std::vector<std::uint64_t> flat(static_cast<std::size_t>((2 * t.m + 1) * (t.m + 1)), 0);
  const auto count = static_cast<std::int64_t>(t.count);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::vector<std::uint64_t> local(flat.size(), 0);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < t.count; ++j) ++local[t.slot(t.overlap(static_cast<std::size_t>(i), j))];
#pragma omp critical
    for (std::size_t s = 0; s < flat.size(); ++s) flat[s] += local[s];
  }
  return to_histogram(t, flat);
}

mpq_class second_moment_bruteforce(const CycleSpec& spec, const mpq_class& p, long r, int limit, int workers) {
  check_moment_args(spec, p, r);
  const PairHistogram hist = pair_overlap_histogram(spec, limit, workers);
  mpq_class sum = 0;
  for (const auto& [key, count] : hist) {
    const auto [uni, b] = key;
    sum += mpq_class(mpz_class(std::to_string(count))) * pow_q(p, static_cast<unsigned long>(uni)) *
           both_rainbow(r, spec.m, b);
  }
  return sum;
}

namespace {

constexpr std::uint64_t kMaxColorTuples = 200'000'000;

// Number of d-tuples over [r] with pairwise distinct entries, by walking all
// r^d tuples.
mpz_class count_distinct_tuples(long r, int d) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, mpz_class> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({r, d});
    if (it != cache.end()) return it->second;
  }
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) {
    total *= static_cast<std::uint64_t>(r);
    if (total > kMaxColorTuples) throw Error(ErrorKind::TooLarge, "r^d color tuples exceed the oracle limit");
  }
  std::vector<long> tuple(static_cast<std::size_t>(d), 0);
  std::uint64_t good = 0;
  for (std::uint64_t t = 0; t < total; ++t) {
    bool distinct = true;
    for (int i = 0; i < d && distinct; ++i)
      for (int j = i + 1; j < d; ++j)
        if (tuple[static_cast<std::size_t>(i)] == tuple[static_cast<std::size_t>(j)]) {
          distinct = false;
          break;
        }
    if (distinct) ++good;
    for (int i = 0; i < d; ++i) {  // odometer step
      if (++tuple[static_cast<std::size_t>(i)] < r) break;
      tuple[static_cast<std::size_t>(i)] = 0;
    }
  }
  mpz_class out(std::to_string(good));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(r, d), out);
  return out;
}

}  // namespace

mpq_class expected_Y_bruteforce(const CycleSpec& spec, const mpq_class& p, long r, int limit) {
  check_limit(spec, limit);
  if (p < 0 || p > 1) throw Error(ErrorKind::InvalidInput, "p must lie in [0, 1]");
  if (r < 1) throw Error(ErrorKind::InvalidInput, "need r >= 1");
  const detail::EdgeTemplate tmpl(spec);
  // Histogram of the number of distinct induced edges.
  std::vector<std::uint64_t> by_distinct(static_cast<std::size_t>(spec.m) + 1, 0);
  detail::for_each_perm(spec.n, [&](std::span<const int> perm) {
    std::array<std::uint64_t, 64> masks{};
    tmpl.masks(perm, masks.data());
    std::sort(masks.begin(), masks.begin() + spec.m);
    const auto d = std::unique(masks.begin(), masks.begin() + spec.m) - masks.begin();
    ++by_distinct[static_cast<std::size_t>(d)];
  });
  mpq_class sum = 0;
  for (int d = 0; d <= spec.m; ++d) {
    const std::uint64_t count = by_distinct[static_cast<std::size_t>(d)];
    if (count == 0) continue;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(d));
    mpq_class rainbow(count_distinct_tuples(r, d), den);
    rainbow.canonicalize();
    sum += mpq_class(mpz_class(std::to_string(count))) * pow_q(p, static_cast<unsigned long>(d)) * rainbow;
  }
  return sum;
}

}  // namespace rlab
