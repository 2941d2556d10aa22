#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "rlab/models.hpp"
#include "rlab/rng.hpp"
#include "rlab/solver.hpp"

using namespace rlab;

TEST_CASE("binomial and k-set enumeration") {
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(64, 32) == 1832624140942590534ULL);
  CHECK(binomial(5, 7) == 0);
  CHECK_THROWS_AS(binomial(70, 35), Error);
  std::vector<KSet> seen;
  for_each_kset(5, 2, [&](KSet e) { seen.push_back(e); });
  CHECK(seen.size() == 10);
  CHECK(std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("derive_seed is a fixed function") {
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(derive_seed(1, 2, 3) == mix64(mix64(mix64(1) ^ 2) ^ 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("sample_colored extremes") {
  for (SampleMode mode : {SampleMode::Enumerate, SampleMode::Binomial}) {
    CHECK(sample_colored(8, 3, 0.0, 5, 1, mode).edge_count() == 0);
    const ColoredHypergraph full = sample_colored(8, 3, 1.0, 5, 1, mode);
    CHECK(full.edge_count() == 56);
    for (const auto& e : full.sorted_edges()) {
      CHECK(e.color >= 1);
      CHECK(e.color <= 5);
    }
  }
  CHECK_THROWS_AS(sample_colored(8, 3, 1.5, 5, 1), Error);
}

TEST_CASE("sample_colored is reproducible per seed") {
  for (SampleMode mode : {SampleMode::Enumerate, SampleMode::Binomial}) {
    const auto a = sample_colored(10, 3, 0.3, 4, 99, mode);
    const auto b = sample_colored(10, 3, 0.3, 4, 99, mode);
    const auto c = sample_colored(10, 3, 0.3, 4, 100, mode);
    CHECK(a.raw() == b.raw());
    CHECK(a.raw() != c.raw());
  }
}

TEST_CASE("edge count follows Binomial(C(n,k), p)") {
  // n = 10, k = 3: 120 k-sets, mean 24, sd sqrt(19.2).
  for (SampleMode mode : {SampleMode::Enumerate, SampleMode::Binomial}) {
    const int seeds = 10000;
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) sum += static_cast<double>(sample_colored(10, 3, 0.2, 3, derive_seed(5, s), mode).edge_count());
    const double mean = sum / seeds;
    const double se = std::sqrt(120 * 0.2 * 0.8 / seeds);
    CHECK(std::abs(mean - 24.0) < 3.0 * se);
  }
}

TEST_CASE("both sampling modes give the same edge-count and color laws") {
  // Chi-square homogeneity on binned edge counts and on color frequencies.
  const int n = 7;
  const int k = 3;
  const int r = 3;
  const double p = 0.3;
  const int seeds = 4000;
  std::map<int, std::pair<long, long>> count_hist;
  std::array<std::array<long, 3>, 2> color_hist{};
  for (int s = 0; s < seeds; ++s) {
    const auto a = sample_colored(n, k, p, r, derive_seed(11, s), SampleMode::Enumerate);
    const auto b = sample_colored(n, k, p, r, derive_seed(12, s), SampleMode::Binomial);
    const int ba = std::clamp(static_cast<int>(a.edge_count()), 5, 16);
    const int bb = std::clamp(static_cast<int>(b.edge_count()), 5, 16);
    ++count_hist[ba].first;
    ++count_hist[bb].second;
    for (const auto& e : a.sorted_edges()) ++color_hist[0][static_cast<std::size_t>(e.color - 1)];
    for (const auto& e : b.sorted_edges()) ++color_hist[1][static_cast<std::size_t>(e.color - 1)];
  }
  // Two-sample chi-square homogeneity statistic.
  auto homogeneity = [](const std::vector<std::pair<long, long>>& cells) {
    double na = 0;
    double nb = 0;
    for (auto [a, b] : cells) {
      na += a;
      nb += b;
    }
    double stat = 0.0;
    for (auto [a, b] : cells) {
      const double tot = a + b;
      const double ea = tot * na / (na + nb);
      const double eb = tot * nb / (na + nb);
      stat += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
    }
    return stat;
  };
  std::vector<std::pair<long, long>> counts;
  for (auto& [bucket, pair] : count_hist) counts.push_back(pair);
  std::vector<std::pair<long, long>> colors;
  for (int c = 0; c < r; ++c) colors.emplace_back(color_hist[0][static_cast<std::size_t>(c)], color_hist[1][static_cast<std::size_t>(c)]);

  const boost::math::chi_squared count_dist(static_cast<double>(counts.size() - 1));
  const boost::math::chi_squared color_dist(static_cast<double>(r - 1));
  CHECK(boost::math::cdf(boost::math::complement(count_dist, homogeneity(counts))) > 1e-3);
  CHECK(boost::math::cdf(boost::math::complement(color_dist, homogeneity(colors))) > 1e-3);
}

TEST_CASE("CoupledInstance nests and keeps colors") {
  const CoupledInstance ci(8, 3, 4, 1234);
  const auto h0 = ci.realize(0.0);
  const auto h5 = ci.realize(0.5);
  const auto h1 = ci.realize(1.0);
  CHECK(h0.edge_count() == 0);
  CHECK(h1.edge_count() == 56);
  for (const auto& e : h5.sorted_edges()) {
    CHECK(h1.has(e.vertices, e.color));
    CHECK(ci.color(e.vertices) == e.color);
    CHECK(ci.uniform(e.vertices) < 0.5);
  }
  CHECK(CoupledInstance(8, 3, 4, 1234).realize(0.3).raw() == ci.realize(0.3).raw());
}

TEST_CASE("coupled realizations are monotone for rainbow Hamiltonicity") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const CycleSpec spec = CycleSpec::make(8, 3, 1);
  int found_pairs = 0;
  for (int t = 0; t < 100; ++t) {
    const CoupledInstance ci(8, 3, 4, gen());
    double p = unit(gen);
    double p2 = unit(gen);
    if (p > p2) std::swap(p, p2);
    const bool lo = find_rainbow_cycle(ci.realize(p), spec).status == SearchStatus::Found;
    const bool hi = find_rainbow_cycle(ci.realize(p2), spec).status == SearchStatus::Found;
    if (lo) {
      CHECK(hi);
      ++found_pairs;
    }
  }
  CHECK(found_pairs > 0);
}

TEST_CASE("q_from_p") {
  CHECK(q_from_p(0.0) == 0.0);
  CHECK(q_from_p(0.125) == doctest::Approx(0.25).epsilon(1e-15));
  const double q = q_from_p(0.1);
  CHECK(q == doctest::Approx(0.1381966011250105).epsilon(1e-12));
  CHECK(std::abs(q - 2 * q * q - 0.1) < 1e-12);
  for (double p = 1e-9; p < 0.125; p *= 1.7) {
    const double x = q_from_p(p);
    CHECK(std::abs(x - 2 * x * x - p) < 1e-12 * std::max(1.0, p));
  }
  try {
    q_from_p(0.2);
    FAIL("expected NoRealRoot");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoRealRoot);
  }
}

TEST_CASE("sample_directed") {
  CHECK(sample_directed(6, 3, 0.0, 3, 1).edge_count() == 0);
  const auto full = sample_directed(6, 3, 1.0, 1, 1);
  CHECK(full.multi_color());
  CHECK(full.edge_count() == 20);
  for (const auto& e : full.sorted_edges()) CHECK(e.color == 1);

  // P(fixed k-set gets >= 1 color) = 1 - (1 - q)^{k!}.
  const double q = 0.05;
  const int seeds = 10000;
  const KSet target = KSet::of({1, 3, 5});
  int hits = 0;
  for (int s = 0; s < seeds; ++s) hits += sample_directed(6, 3, q, 3, derive_seed(77, s)).has_edge(target);
  const double expect = 1.0 - std::pow(1.0 - q, 6);
  const double se = std::sqrt(expect * (1 - expect) / seeds);
  CHECK(std::abs(static_cast<double>(hits) / seeds - expect) < 3 * se);
}

TEST_CASE("build_gamma partitions and maps edges") {
  ColoredHypergraph h(6, 3, 3);
  h.add(KSet::of({1, 2, 4}), 2);
  h.add(KSet::of({1, 2, 3}), 1);
  h.add(KSet::of({1, 4, 5}), 3);
  const GammaGraph g = build_gamma(h);
  CHECK(g.partition().m == 3);
  CHECK(g.partition().x_mask() == KSet::of({1, 2, 3}));
  CHECK(g.partition().y_mask() == KSet::of({4, 5, 6}));
  CHECK(g.partition().z_mask() == KSet::of({7, 8, 9}));
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0] == KSet::of({1, 2, 4, 8}));
  CHECK(g.has_edge(KSet::of({1, 2, 4, 8})));
  const ColoredHypergraph gh = g.as_hypergraph();
  CHECK(gh.n() == 9);
  CHECK(gh.k() == 4);
  CHECK(gh.colors(KSet::of({1, 2, 4, 8})).front() == 2);

  CHECK_THROWS_AS(build_gamma(ColoredHypergraph(6, 3, 4)), Error);  // r != m
  CHECK_THROWS_AS(build_gamma(ColoredHypergraph(7, 3, 3)), Error);
  CHECK_THROWS_AS(build_gamma(ColoredHypergraph(6, 3, 3, true)), Error);
  CHECK(is_gamma_shaped(g.partition(), 3, KSet::of({2, 3, 6})));
  CHECK_FALSE(is_gamma_shaped(g.partition(), 3, KSet::of({1, 2, 3})));
  CHECK(restrict_to_gamma_shape(h).edge_count() == 1);
}

TEST_CASE("gamma cycle maps back to a rainbow loose cycle") {
  ColoredHypergraph h(6, 3, 3);
  h.add(KSet::of({1, 2, 4}), 2);
  h.add(KSet::of({2, 3, 5}), 1);
  h.add(KSet::of({1, 3, 6}), 3);
  const GammaGraph g = build_gamma(h);
  const std::vector<KSet> cycle{KSet::of({1, 2, 4, 8}), KSet::of({2, 3, 5, 7}), KSet::of({1, 3, 6, 9})};
  const RainbowCertificate cert = gamma_cycle_to_rainbow(g, cycle);
  CHECK(cert.edges == std::vector<KSet>{KSet::of({1, 2, 4}), KSet::of({2, 3, 5}), KSet::of({1, 3, 6})});
  CHECK(cert.colors == std::vector<int>{2, 1, 3});
  CHECK(verify_certificate(h, cert));
  CHECK(std::holds_alternative<RainbowCertificate>(validate_cycle(h, cert.hamperm)));

  const auto again = rainbow_to_gamma_cycle(g, cert);
  CHECK(again == cycle);

  const auto found = find_gamma_cycle(g);
  REQUIRE(found.has_value());
  CHECK(verify_certificate(h, gamma_cycle_to_rainbow(g, *found)));

  // Two edges meeting in Y vertex 4.
  ColoredHypergraph bad(6, 3, 3);
  bad.add(KSet::of({1, 2, 4}), 2);
  bad.add(KSet::of({2, 3, 4}), 1);
  bad.add(KSet::of({1, 3, 6}), 3);
  const GammaGraph gb = build_gamma(bad);
  const std::vector<KSet> wrong{KSet::of({1, 2, 4, 8}), KSet::of({2, 3, 4, 7}), KSet::of({1, 3, 6, 9})};
  try {
    gamma_cycle_to_rainbow(gb, wrong);
    FAIL("expected InvalidCycle");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCycle);
  }
  CHECK_FALSE(find_gamma_cycle(gb).has_value());
}

TEST_CASE("detect_color_collisions") {
  const std::vector<KSet> planted{KSet::of({1, 2, 4, 8}), KSet::of({1, 2, 4, 9}), KSet::of({3, 5, 6, 7})};
  const auto pairs = detect_color_collisions(planted);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first == KSet::of({1, 2, 4, 8}));
  CHECK(pairs[0].second == KSet::of({1, 2, 4, 9}));
  const std::vector<KSet> disjoint{KSet::of({1, 2, 3, 4}), KSet::of({5, 6, 7, 8})};
  CHECK(detect_color_collisions(disjoint).empty());

  std::mt19937_64 gen(3);
  for (int round = 0; round < 200; ++round) {
    std::vector<KSet> edges;
    for (int i = 0; i < 12; ++i) {
      std::vector<int> pool{1, 2, 3, 4, 5, 6, 7};
      std::shuffle(pool.begin(), pool.end(), gen);
      edges.push_back(KSet::of(std::span<const int>(pool.data(), 4)));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    CHECK(detect_color_collisions(edges) == oracle::collisions(edges, 3));
  }
}

TEST_CASE("collision frequency at a sparse density is small") {
  // n = 30, k = 3, m = 15: draw about 2 log n colored shape-conforming sets
  // (two vertices in X, one in Y) with replacement and lift them.
  const int n = 30;
  const int m = n / 2;
  const int draws = static_cast<int>(std::ceil(2.0 * std::log(n)));
  int with_collision = 0;
  const int samples = 1000;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(31, s));
    std::vector<KSet> g;
    for (int i = 0; i < draws; ++i) {
      const int x1 = rng.between(1, m);
      int x2 = rng.between(1, m - 1);
      if (x2 >= x1) ++x2;
      g.push_back(KSet::of({x1, x2, rng.between(m + 1, n), n + rng.between(1, m)}));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    const auto found = detect_color_collisions(g);
    CHECK(found == oracle::collisions(g, 3));
    if (!found.empty()) ++with_collision;
  }
  CHECK(static_cast<double>(with_collision) / samples < 0.05);
}
