#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rlab/chg_io.hpp"
#include "rlab/core.hpp"

using namespace rlab;

namespace {

std::vector<std::vector<int>> as_lists(const std::vector<KSet>& edges) {
  std::vector<std::vector<int>> out;
  for (KSet e : edges) out.push_back(e.vertices());
  return out;
}

ColoredHypergraph complete_distinct(int n, int k) {
  std::vector<KSet> all;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
    if (std::popcount(mask) == k) all.emplace_back(mask);
  ColoredHypergraph h(n, k, static_cast<int>(all.size()));
  int c = 1;
  for (KSet e : all) h.add(e, c++);
  return h;
}

}  // namespace

TEST_CASE("KSet canonical form and ordering") {
  const KSet a = KSet::of({3, 1, 2});
  CHECK(a.vertices() == std::vector<int>{1, 2, 3});
  CHECK(a.str() == "{1,2,3}");
  CHECK(a.size() == 3);
  CHECK(a.max_vertex() == 3);
  CHECK_THROWS_AS(KSet::of({1, 1, 2}), Error);
  CHECK_THROWS_AS(KSet::of({0, 2}), Error);
  CHECK_THROWS_AS(KSet::of({65}), Error);

  // Lexicographic on the sorted lists: {1,2,9} < {1,3,4} < {2,3,4}.
  CHECK(KSet::of({1, 2, 9}) < KSet::of({1, 3, 4}));
  CHECK(KSet::of({1, 3, 4}) < KSet::of({2, 3, 4}));
  CHECK_FALSE(KSet::of({2, 3, 4}) < KSet::of({1, 3, 4}));
  CHECK(KSet::of({1, 2}) < KSet::of({1, 2, 3}));
  CHECK_FALSE(a < a);
}

TEST_CASE("lexicographic order matches std::vector comparison") {
  for (std::uint64_t x = 1; x < 256; ++x)
    for (std::uint64_t y = 1; y < 256; ++y) {
      const KSet a(x);
      const KSet b(y);
      CHECK(lex_less(a, b) == (a.vertices() < b.vertices()));
    }
}

TEST_CASE("CycleSpec validation") {
  const CycleSpec s = CycleSpec::make(6, 3, 1);
  CHECK(s.m == 3);
  CHECK(s.block() == 2);
  CHECK(s.loose());
  CHECK(CycleSpec::make(5, 3, 2).tight());
  CHECK_THROWS_AS(CycleSpec::make(3, 3, 1), Error);  // n = k
  CHECK_THROWS_AS(CycleSpec::make(7, 3, 1), Error);  // 2 does not divide 7
  CHECK_THROWS_AS(CycleSpec::make(6, 3, 3), Error);
  CHECK_THROWS_AS(CycleSpec::make(6, 3, 0), Error);
  CHECK_THROWS_AS(CycleSpec::make(6, 1, 0), Error);
  try {
    CycleSpec::make(7, 3, 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidSpec);
  }

  for (const CycleSpec& spec : all_specs_up_to(8)) {
    CHECK(spec.n > spec.k);
    CHECK(spec.n % spec.block() == 0);
    CHECK(spec.m * spec.block() == spec.n);
  }
}

TEST_CASE("edges_of_hamperm on the identity") {
  const auto loose = edges_of_hamperm(Hamperm::identity(CycleSpec::make(6, 3, 1)));
  CHECK(as_lists(loose) == std::vector<std::vector<int>>{{1, 2, 3}, {3, 4, 5}, {1, 5, 6}});

  const auto tight = edges_of_hamperm(Hamperm::identity(CycleSpec::make(4, 3, 2)));
  CHECK(as_lists(tight) == std::vector<std::vector<int>>{{1, 2, 3}, {2, 3, 4}, {1, 3, 4}, {1, 2, 4}});
}

TEST_CASE("edges_of_hamperm matches the set-based oracle and covers every vertex") {
  for (const CycleSpec& spec : all_specs_up_to(8)) {
    std::vector<int> pi(static_cast<std::size_t>(spec.n));
    std::iota(pi.begin(), pi.end(), 1);
    std::reverse(pi.begin(), pi.end());
    std::rotate(pi.begin(), pi.begin() + 2, pi.end());
    const auto edges = edges_of_hamperm(Hamperm(pi, spec));
    const auto expect = oracle::cycle_edges(pi, spec.k, spec.ell);
    REQUIRE(edges.size() == static_cast<std::size_t>(spec.m));
    std::uint64_t cover = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      CHECK(edges[i] == oracle::to_kset(expect[i]));
      cover |= edges[i].mask();
    }
    CHECK(cover == (std::uint64_t{1} << spec.n) - 1);
  }
}

TEST_CASE("Hamperm rejects non-bijections") {
  const CycleSpec spec = CycleSpec::make(6, 3, 1);
  CHECK_THROWS_AS(Hamperm({1, 2, 3, 4, 5, 5}, spec), Error);
  CHECK_THROWS_AS(Hamperm({1, 2, 3, 4, 5}, spec), Error);
  CHECK_THROWS_AS(Hamperm({0, 1, 2, 3, 4, 5}, spec), Error);
  const Hamperm h({2, 3, 4, 5, 6, 1}, spec);
  CHECK(h.at(1) == 2);
  CHECK(h.at(7) == 2);
}

TEST_CASE("ColoredHypergraph bookkeeping") {
  ColoredHypergraph h(6, 3, 4);
  h.add(KSet::of({1, 2, 3}), 2);
  CHECK(h.has_edge(KSet::of({1, 2, 3})));
  CHECK(h.has(KSet::of({1, 2, 3}), 2));
  CHECK_FALSE(h.has(KSet::of({1, 2, 3}), 1));
  CHECK_THROWS_AS(h.add(KSet::of({1, 2, 3}), 3), Error);  // second color, single mode
  CHECK_THROWS_AS(h.add(KSet::of({1, 2}), 1), Error);
  CHECK_THROWS_AS(h.add(KSet::of({1, 2, 7}), 1), Error);
  CHECK_THROWS_AS(h.add(KSet::of({1, 2, 4}), 5), Error);
  h.set_color(KSet::of({1, 2, 3}), 4);
  CHECK(h.colors(KSet::of({1, 2, 3})).front() == 4);
  h.erase(KSet::of({1, 2, 3}));
  CHECK(h.edge_count() == 0);

  ColoredHypergraph multi(6, 3, 4, true);
  multi.add(KSet::of({1, 2, 3}), 3);
  multi.add(KSet::of({1, 2, 3}), 1);
  CHECK_THROWS_AS(multi.add(KSet::of({1, 2, 3}), 1), Error);
  CHECK(multi.edge_count() == 1);
  CHECK(multi.colored_edge_count() == 2);
  auto colors = multi.colors(KSet::of({1, 2, 3}));
  CHECK(std::vector<int>(colors.begin(), colors.end()) == std::vector<int>{1, 3});
}

TEST_CASE("validate_cycle outcomes") {
  SUBCASE("complete, distinctly colored graph yields a certificate") {
    const ColoredHypergraph h = complete_distinct(6, 3);
    const Hamperm pi = Hamperm::identity(CycleSpec::make(6, 3, 1));
    const Validation v = validate_cycle(h, pi);
    REQUIRE(std::holds_alternative<RainbowCertificate>(v));
    CHECK(verify_certificate(h, std::get<RainbowCertificate>(v)));
  }
  SUBCASE("missing second edge") {
    ColoredHypergraph h = complete_distinct(6, 3);
    h.erase(KSet::of({3, 4, 5}));
    const Validation v = validate_cycle(h, Hamperm::identity(CycleSpec::make(6, 3, 1)));
    REQUIRE(std::holds_alternative<MissingEdge>(v));
    CHECK(std::get<MissingEdge>(v).index == 2);
  }
  SUBCASE("pigeonhole on a repeated color") {
    ColoredHypergraph h(4, 3, 3);
    h.add(KSet::of({1, 2, 3}), 1);
    h.add(KSet::of({2, 3, 4}), 1);
    h.add(KSet::of({1, 3, 4}), 2);
    h.add(KSet::of({1, 2, 4}), 3);
    CHECK(std::holds_alternative<NotRainbow>(validate_cycle(h, Hamperm::identity(CycleSpec::make(4, 3, 2)))));
  }
  SUBCASE("multi-color lists need a matching, not a greedy pick") {
    // Greedy on sorted lists takes color 1 for the first edge and then fails.
    ColoredHypergraph h(6, 3, 3, true);
    h.add(KSet::of({1, 2, 3}), 1);
    h.add(KSet::of({1, 2, 3}), 2);
    h.add(KSet::of({3, 4, 5}), 1);
    h.add(KSet::of({1, 5, 6}), 1);
    h.add(KSet::of({1, 5, 6}), 3);
    const Validation v = validate_cycle(h, Hamperm::identity(CycleSpec::make(6, 3, 1)));
    REQUIRE(std::holds_alternative<RainbowCertificate>(v));
    const auto& cert = std::get<RainbowCertificate>(v);
    CHECK(cert.colors == std::vector<int>{2, 1, 3});
    CHECK(verify_certificate(h, cert));
  }
  SUBCASE("size mismatch throws") {
    ColoredHypergraph h(7, 3, 3);
    CHECK_THROWS_AS(validate_cycle(h, Hamperm::identity(CycleSpec::make(6, 3, 1))), Error);
  }
}

TEST_CASE("verify_certificate rejects tampered certificates") {
  const ColoredHypergraph h = complete_distinct(6, 3);
  const auto cert = std::get<RainbowCertificate>(validate_cycle(h, Hamperm::identity(CycleSpec::make(6, 3, 1))));

  RainbowCertificate same_colors = cert;
  same_colors.colors[1] = same_colors.colors[0];
  CHECK_FALSE(verify_certificate(h, same_colors));

  RainbowCertificate wrong_edges = cert;
  std::swap(wrong_edges.edges[0], wrong_edges.edges[1]);
  CHECK_FALSE(verify_certificate(h, wrong_edges));

  RainbowCertificate short_list = cert;
  short_list.colors.pop_back();
  CHECK_FALSE(verify_certificate(h, short_list));

  ColoredHypergraph recolored = h;
  recolored.set_color(cert.edges[0], cert.colors[0] == 1 ? 2 : 1);
  CHECK_FALSE(verify_certificate(recolored, cert));
}

TEST_CASE("distinct_color_system agrees with backtracking") {
  std::mt19937 gen(7);
  for (int round = 0; round < 500; ++round) {
    const int lists_n = 1 + static_cast<int>(gen() % 6);
    std::vector<std::vector<int>> lists(static_cast<std::size_t>(lists_n));
    for (auto& l : lists) {
      std::set<int> pick;
      const int len = 1 + static_cast<int>(gen() % 3);
      while (static_cast<int>(pick.size()) < len) pick.insert(1 + static_cast<int>(gen() % 5));
      l.assign(pick.begin(), pick.end());
    }
    std::vector<std::span<const int>> spans(lists.begin(), lists.end());
    const auto sdr = distinct_color_system(spans);
    std::set<int> used;
    CHECK(sdr.has_value() == oracle::distinct_choice(lists, 0, used));
    if (sdr) {
      std::set<int> seen;
      for (std::size_t i = 0; i < lists.size(); ++i) {
        const int c = (*sdr)[i];
        CHECK(std::find(lists[i].begin(), lists[i].end(), c) != lists[i].end());
        CHECK(seen.insert(c).second);
      }
    }
  }
}

TEST_CASE(".chg round trip and parse errors") {
  ColoredHypergraph h(5, 3, 4, true);
  h.add(KSet::of({1, 2, 3}), 1);
  h.add(KSet::of({1, 2, 3}), 4);
  h.add(KSet::of({2, 4, 5}), 2);
  std::stringstream ss;
  write_chg(ss, h, {{"seed", "17"}});
  CHECK(ss.str().find("# seed: 17") != std::string::npos);
  const ColoredHypergraph back = read_chg(ss);
  CHECK(back.n() == 5);
  CHECK(back.k() == 3);
  CHECK(back.r() == 4);
  CHECK(back.multi_color());
  CHECK(back.raw() == h.raw());

  auto parse = [](const std::string& text) {
    std::stringstream in(text);
    return read_chg(in);
  };
  CHECK(parse("# c\n4 3 2\n1 2 3 1\n\n2 3 4 2\n").edge_count() == 2);
  CHECK_THROWS_AS(parse("4 3 2\n1 2 3 1\n1 2 3 2\n"), Error);        // second color without multi
  CHECK_THROWS_AS(parse("4 3 2 multi\n1 2 3 1\n1 2 3 1\n"), Error);  // repeated pair
  CHECK_THROWS_AS(parse("4 3 2\n2 1 3 1\n"), Error);                 // not increasing
  CHECK_THROWS_AS(parse("4 3 2\n1 2 5 1\n"), Error);                 // vertex out of range
  CHECK_THROWS_AS(parse("4 3 2\n1 2 3 3\n"), Error);                 // color out of range
  CHECK_THROWS_AS(parse("4 3 2\n1 2 3\n"), Error);                   // short line
  CHECK_THROWS_AS(parse(""), Error);
  try {
    parse("4 3 2\n1 2 3 1\nbogus\n");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
