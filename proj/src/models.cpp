#include "rlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "rlab/rng.hpp"

namespace rlab {

namespace {

constexpr int kMaxRetriesPerEdge = 100;
constexpr double kBinomialDensityLimit = 0.5;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidInput, std::string(name) + " must lie in [0, 1]");
}

ColoredHypergraph sample_enumerate(int n, int k, double p, int r, std::uint64_t seed) {
  ColoredHypergraph h(n, k, r);
  Rng rng(seed);
  for_each_kset(n, k, [&](KSet e) {
    if (rng.uniform() < p) h.add(e, rng.between(1, r));
  });
  return h;
}

KSet random_kset(Rng& rng, int n, int k) {
  // Partial Fisher-Yates over [1, n].
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::uint64_t mask = 0;
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    mask |= std::uint64_t{1} << (pool[static_cast<std::size_t>(i)] - 1);
  }
  return KSet(mask);
}

}  // namespace

const char* to_string(SampleMode mode) {
  return mode == SampleMode::Enumerate ? "enumerate" : "binomial";
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (acc > UINT64_MAX) throw Error(ErrorKind::TooLarge, "binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

ColoredHypergraph sample_colored(int n, int k, double p, int r, std::uint64_t seed, SampleMode mode) {
  check_probability(p, "p");
  if (r < 1) throw Error(ErrorKind::InvalidInput, "need r >= 1");
  if (mode == SampleMode::Enumerate || p > kBinomialDensityLimit) return sample_enumerate(n, k, p, r, seed);

  const std::uint64_t total = binomial(n, k);
  Rng rng(seed);
  std::binomial_distribution<std::uint64_t> count_dist(total, p);
  const std::uint64_t count = count_dist(rng.engine());

  ColoredHypergraph h(n, k, r);
  std::unordered_set<std::uint64_t> taken;
  for (std::uint64_t i = 0; i < count; ++i) {
    KSet e;
    int tries = 0;
    do {
      if (++tries > kMaxRetriesPerEdge) return sample_enumerate(n, k, p, r, mix64(seed ^ 0x5a5a5a5aULL));
      e = random_kset(rng, n, k);
    } while (taken.contains(e.mask()));
    taken.insert(e.mask());
    h.add(e, rng.between(1, r));
  }
  return h;
}

CoupledInstance::CoupledInstance(int n, int k, int r, std::uint64_t seed) : n_(n), k_(k), r_(r), seed_(seed) {
  if (n < 1 || n > kMaxVertices || k < 1 || k > n || r < 1) {
    throw Error(ErrorKind::InvalidInput, "bad coupled instance parameters");
  }
}

double CoupledInstance::uniform(KSet e) const { return unit_from_hash(mix64(seed_ ^ mix64(e.mask()))); }

int CoupledInstance::color(KSet e) const {
  const std::uint64_t h = mix64(mix64(seed_ ^ mix64(e.mask())));
  return 1 + static_cast<int>((static_cast<unsigned __int128>(h) * static_cast<unsigned>(r_)) >> 64);
}

ColoredHypergraph CoupledInstance::realize(double p) const {
  ColoredHypergraph h(n_, k_, r_);
  for_each_kset(n_, k_, [&](KSet e) {
    if (uniform(e) < p) h.add(e, color(e));
  });
  return h;
}

double q_from_p(double p) {
  if (p > 0.125) throw Error(ErrorKind::NoRealRoot, "q - 2q^2 = p has no real root for p > 1/8");
  if (p < 0.0) throw Error(ErrorKind::InvalidInput, "p must be nonnegative");
  // 2p / (1 + sqrt(1 - 8p)) equals (1 - sqrt(1 - 8p)) / 4 without cancellation.
  return 2.0 * p / (1.0 + std::sqrt(1.0 - 8.0 * p));
}

ColoredHypergraph sample_directed(int n, int k, double q, int r, std::uint64_t seed) {
  check_probability(q, "q");
  std::uint64_t orderings = 1;
  for (int i = 2; i <= k; ++i) orderings *= static_cast<std::uint64_t>(i);
  ColoredHypergraph h(n, k, r, /*multi_color=*/true);
  Rng rng(seed);
  std::vector<int> received;
  for_each_kset(n, k, [&](KSet e) {
    received.clear();
    for (std::uint64_t o = 0; o < orderings; ++o) {
      const bool present = rng.uniform() < q;
      const int c = rng.between(1, r);
      if (present) received.push_back(c);
    }
    std::sort(received.begin(), received.end());
    received.erase(std::unique(received.begin(), received.end()), received.end());
    for (int c : received) h.add(e, c);
  });
  return h;
}

KSet GammaPartition::x_mask() const { return KSet(m == 0 ? 0 : (~std::uint64_t{0} >> (64 - m))); }

KSet GammaPartition::y_mask() const {
  const std::uint64_t upto_n = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  return KSet(upto_n & ~x_mask().mask());
}

KSet GammaPartition::z_mask() const {
  const int top = n + m;
  const std::uint64_t upto_top = top == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top) - 1);
  const std::uint64_t upto_n = (std::uint64_t{1} << n) - 1;
  return KSet(upto_top & ~upto_n);
}

bool GammaGraph::has_edge(KSet e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e, lex_less);
}

ColoredHypergraph GammaGraph::as_hypergraph() const {
  ColoredHypergraph out(part_.n + part_.m, base_.k() + 1, part_.m);
  const KSet z = part_.z_mask();
  for (KSet e : edges_) {
    const int zv = (e & z).max_vertex();
    out.add(e, zv - part_.n);
  }
  return out;
}

bool is_gamma_shaped(const GammaPartition& part, int k, KSet e) {
  return (e & part.x_mask()).size() == 2 && (e & part.y_mask()).size() == k - 2;
}

GammaGraph build_gamma(const ColoredHypergraph& h) {
  const int n = h.n();
  const int k = h.k();
  if (k < 2 || n % (k - 1) != 0) throw Error(ErrorKind::InvalidInput, "gamma graph needs (k-1) | n");
  const int m = n / (k - 1);
  if (h.r() != m) throw Error(ErrorKind::InvalidInput, "gamma graph needs r = n/(k-1)");
  if (h.multi_color()) throw Error(ErrorKind::InvalidInput, "gamma graph needs a single-color hypergraph");
  if (n + m > kMaxVertices) throw Error(ErrorKind::TooLarge, "n + m exceeds 64 vertices");

  GammaGraph g;
  g.base_ = h;
  g.part_ = GammaPartition{n, m};
  for (const auto& [mask, colors] : h.raw()) {
    const KSet e(mask);
    if (!is_gamma_shaped(g.part_, k, e)) continue;
    g.edges_.push_back(KSet(mask | (std::uint64_t{1} << (colors.front() + n - 1))));
  }
  std::sort(g.edges_.begin(), g.edges_.end(), lex_less);
  return g;
}

ColoredHypergraph restrict_to_gamma_shape(const ColoredHypergraph& h) {
  const int k = h.k();
  if (k < 2 || h.n() % (k - 1) != 0) throw Error(ErrorKind::InvalidInput, "need (k-1) | n");
  const GammaPartition part{h.n(), h.n() / (k - 1)};
  ColoredHypergraph out(h.n(), k, h.r(), h.multi_color());
  for (const auto& [mask, colors] : h.raw()) {
    if (!is_gamma_shaped(part, k, KSet(mask))) continue;
    for (int c : colors) out.add(KSet(mask), c);
  }
  return out;
}

RainbowCertificate gamma_cycle_to_rainbow(const GammaGraph& g, std::span<const KSet> cycle) {
  const GammaPartition& part = g.partition();
  const int k = g.base().k();
  const int m = part.m;
  auto fail = [](const std::string& why) -> RainbowCertificate { throw Error(ErrorKind::InvalidCycle, why); };

  if (static_cast<int>(cycle.size()) != m) return fail("cycle must have m edges");
  const KSet x = part.x_mask();
  const KSet y = part.y_mask();
  const KSet z = part.z_mask();

  std::vector<int> joints(static_cast<std::size_t>(m));  // joint between edge i-1 and edge i
  for (int i = 0; i < m; ++i) {
    const KSet e = cycle[static_cast<std::size_t>(i)];
    if (e.size() != k + 1) return fail("edge " + e.str() + " is not a (k+1)-set");
    if (!g.has_edge(e)) return fail("edge " + e.str() + " is not in the gamma graph");
    if ((e & z).size() != 1) return fail("edge " + e.str() + " must contain exactly one Z vertex");
    const KSet prev = cycle[static_cast<std::size_t>((i + m - 1) % m)];
    const KSet shared = prev & e;
    if (shared.size() != 1) return fail("consecutive edges must meet in exactly one vertex");
    if ((shared & x).size() != 1) return fail("consecutive edges meet outside X");
    joints[static_cast<std::size_t>(i)] = shared.max_vertex();
  }

  std::vector<int> sorted_joints = joints;
  std::sort(sorted_joints.begin(), sorted_joints.end());
  if (std::adjacent_find(sorted_joints.begin(), sorted_joints.end()) != sorted_joints.end()) {
    return fail("joints repeat");
  }
  // Spanning: X once as joints, Y and Z once each.
  std::uint64_t covered = 0;
  for (KSet e : cycle) covered |= e.mask();
  if (covered != (x | y | z).mask()) return fail("cycle does not span [n+m]");

  std::vector<int> pi;
  pi.reserve(static_cast<std::size_t>(part.n));
  std::vector<int> colors;
  for (int i = 0; i < m; ++i) {
    const KSet e = cycle[static_cast<std::size_t>(i)];
    pi.push_back(joints[static_cast<std::size_t>(i)]);
    for (int v : (e & y).vertices()) pi.push_back(v);
    colors.push_back((e & z).max_vertex() - part.n);
  }
  const CycleSpec spec = CycleSpec::make(part.n, k, 1);
  Hamperm hp(std::move(pi), spec);
  RainbowCertificate cert{hp, edges_of_hamperm(hp), colors};
  if (!verify_certificate(g.base(), cert)) return fail("mapped cycle is not a rainbow cycle of the base graph");
  return cert;
}

std::vector<KSet> rainbow_to_gamma_cycle(const GammaGraph& g, const RainbowCertificate& cert) {
  const GammaPartition& part = g.partition();
  const CycleSpec& spec = cert.hamperm.spec();
  if (spec.ell != 1 || spec.n != part.n) throw Error(ErrorKind::InvalidCycle, "certificate is not a loose cycle");
  std::vector<KSet> out;
  for (std::size_t i = 0; i < cert.edges.size(); ++i) {
    const int joint = cert.hamperm.at(static_cast<int>(i) * spec.block() + 1);
    if (!part.in_x(joint)) throw Error(ErrorKind::InvalidCycle, "joint outside X");
    out.push_back(KSet(cert.edges[i].mask() | (std::uint64_t{1} << (cert.colors[i] + part.n - 1))));
  }
  return out;
}

std::optional<std::vector<KSet>> find_gamma_cycle(const GammaGraph& g) {
  const GammaPartition& part = g.partition();
  const int m = part.m;
  if (m < 3) return std::nullopt;
  const KSet x = part.x_mask();

  // Edges incident to each X vertex.
  std::vector<std::vector<KSet>> at(static_cast<std::size_t>(m) + 1);
  for (KSet e : g.edges())
    for (int v : (e & x).vertices()) at[static_cast<std::size_t>(v)].push_back(e);

  // Vertex 1 is a joint of every such cycle; start there and walk joint to
  // joint, keeping every non-X vertex used at most once.
  std::vector<KSet> path;
  std::uint64_t used = 0;
  auto dfs = [&](auto&& self, int joint) -> bool {
    if (static_cast<int>(path.size()) == m) return joint == 1;
    for (KSet e : at[static_cast<std::size_t>(joint)]) {
      const KSet rest(e.mask() & ~(std::uint64_t{1} << (joint - 1)));
      const int next = (rest & x).max_vertex();
      const bool closing = static_cast<int>(path.size()) == m - 1;
      if (closing ? next != 1 : (next == 1 || (used >> (next - 1)) & 1U)) continue;
      const std::uint64_t fresh = rest.mask() & ~x.mask();
      if (fresh & used) continue;
      used |= fresh | (closing ? 0 : std::uint64_t{1} << (next - 1));
      path.push_back(e);
      if (self(self, next)) return true;
      path.pop_back();
      used &= ~(fresh | (closing ? 0 : std::uint64_t{1} << (next - 1)));
    }
    return false;
  };
  used |= 1;  // vertex 1
  if (!dfs(dfs, 1)) return std::nullopt;
  return path;
}

std::vector<std::pair<KSet, KSet>> detect_color_collisions(std::span<const KSet> edges) {
  // Two distinct (k+1)-sets share at most one k-subset, so bucketing by
  // k-subset lists every colliding pair exactly once.
  std::unordered_map<std::uint64_t, std::vector<KSet>> buckets;
  for (KSet e : edges)
    for (std::uint64_t rest = e.mask(); rest != 0; rest &= rest - 1) {
      const std::uint64_t bit = rest & (~rest + 1);
      buckets[e.mask() & ~bit].push_back(e);
    }
  std::vector<std::pair<KSet, KSet>> out;
  for (auto& [sub, list] : buckets) {
    std::sort(list.begin(), list.end(), lex_less);
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) out.emplace_back(list[i], list[j]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return lex_less(a.first, b.first);
    return lex_less(a.second, b.second);
  });
  return out;
}

}  // namespace rlab
