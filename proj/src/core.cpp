#include "rlab/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace rlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NoRealRoot: return "NoRealRoot";
    case ErrorKind::InvalidCycle: return "InvalidCycle";
    case ErrorKind::Parse: return "Parse";
  }
  return "Error";
}

KSet KSet::of(std::span<const int> vertices) {
  std::uint64_t mask = 0;
  for (int v : vertices) {
    if (v < 1 || v > kMaxVertices) {
      throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(v) + " out of range");
    }
    const std::uint64_t bit = std::uint64_t{1} << (v - 1);
    if (mask & bit) throw Error(ErrorKind::InvalidInput, "repeated vertex " + std::to_string(v));
    mask |= bit;
  }
  return KSet(mask);
}

std::vector<int> KSet::vertices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
  return out;
}

std::string KSet::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int v : vertices()) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  os << '}';
  return os.str();
}

bool lex_less(KSet a, KSet b) {
  std::uint64_t x = a.mask();
  std::uint64_t y = b.mask();
  while (x != 0 && y != 0) {
    const int va = std::countr_zero(x);
    const int vb = std::countr_zero(y);
    if (va != vb) return va < vb;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

bool operator<(KSet a, KSet b) { return lex_less(a, b); }

CycleSpec CycleSpec::make(int n, int k, int ell) {
  if (k < 2) throw Error(ErrorKind::InvalidSpec, "k must be at least 2");
  if (ell < 1 || ell >= k) throw Error(ErrorKind::InvalidSpec, "need 1 <= ell < k");
  if (n <= k) throw Error(ErrorKind::InvalidSpec, "need n > k");
  if (n % (k - ell) != 0) throw Error(ErrorKind::InvalidSpec, "(k - ell) must divide n");
  return CycleSpec{n, k, ell, n / (k - ell)};
}

std::vector<CycleSpec> all_specs_up_to(int max_n) {
  std::vector<CycleSpec> out;
  for (int n = 3; n <= max_n; ++n)
    for (int k = 2; k < n; ++k)
      for (int ell = 1; ell < k; ++ell)
        if (n % (k - ell) == 0) out.push_back(CycleSpec::make(n, k, ell));
  return out;
}

ColoredHypergraph::ColoredHypergraph(int n, int k, int r, bool multi_color)
    : n_(n), k_(k), r_(r), multi_(multi_color) {
  if (n < 1 || n > kMaxVertices) throw Error(ErrorKind::InvalidInput, "n out of range [1, 64]");
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidInput, "need 1 <= k <= n");
  if (r < 1) throw Error(ErrorKind::InvalidInput, "need r >= 1");
}

void ColoredHypergraph::check_edge(KSet e, int color) const {
  if (e.size() != k_) throw Error(ErrorKind::InvalidInput, "edge " + e.str() + " is not a k-set");
  if (e.max_vertex() > n_) throw Error(ErrorKind::InvalidInput, "edge " + e.str() + " leaves [1, n]");
  if (color < 1 || color > r_) {
    throw Error(ErrorKind::InvalidInput, "color " + std::to_string(color) + " outside [1, r]");
  }
}

void ColoredHypergraph::add(KSet e, int color) {
  check_edge(e, color);
  auto& cs = edges_[e.mask()];
  if (!cs.empty() && !multi_) {
    if (cs.front() == color) {
      throw Error(ErrorKind::InvalidInput, "duplicate edge " + e.str() + " color " + std::to_string(color));
    }
    throw Error(ErrorKind::InvalidInput, "edge " + e.str() + " has two colors in single-color mode");
  }
  auto it = std::lower_bound(cs.begin(), cs.end(), color);
  if (it != cs.end() && *it == color) {
    throw Error(ErrorKind::InvalidInput, "duplicate edge " + e.str() + " color " + std::to_string(color));
  }
  cs.insert(it, color);
}

void ColoredHypergraph::set_color(KSet e, int color) {
  check_edge(e, color);
  edges_[e.mask()] = {color};
}

void ColoredHypergraph::erase(KSet e) { edges_.erase(e.mask()); }

bool ColoredHypergraph::has(KSet e, int color) const {
  auto cs = colors(e);
  return std::binary_search(cs.begin(), cs.end(), color);
}

std::span<const int> ColoredHypergraph::colors(KSet e) const {
  auto it = edges_.find(e.mask());
  if (it == edges_.end()) return {};
  return it->second;
}

std::size_t ColoredHypergraph::colored_edge_count() const {
  std::size_t total = 0;
  for (const auto& [mask, cs] : edges_) total += cs.size();
  return total;
}

std::vector<ColoredEdge> ColoredHypergraph::sorted_edges() const {
  std::vector<ColoredEdge> out;
  out.reserve(colored_edge_count());
  for (const auto& [mask, cs] : edges_)
    for (int c : cs) out.push_back({KSet(mask), c});
  std::stable_sort(out.begin(), out.end(), [](const ColoredEdge& a, const ColoredEdge& b) {
    if (a.vertices == b.vertices) return a.color < b.color;
    return lex_less(a.vertices, b.vertices);
  });
  return out;
}

Hamperm::Hamperm(std::vector<int> pi, CycleSpec spec) : pi_(std::move(pi)), spec_(spec) {
  if (static_cast<int>(pi_.size()) != spec_.n) {
    throw Error(ErrorKind::InvalidInput, "permutation length differs from n");
  }
  std::vector<char> seen(static_cast<std::size_t>(spec_.n) + 1, 0);
  for (int v : pi_) {
    if (v < 1 || v > spec_.n || seen[static_cast<std::size_t>(v)]) {
      throw Error(ErrorKind::InvalidInput, "not a permutation of [1, n]");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Hamperm Hamperm::identity(CycleSpec spec) {
  std::vector<int> pi(static_cast<std::size_t>(spec.n));
  std::iota(pi.begin(), pi.end(), 1);
  return Hamperm(std::move(pi), spec);
}

std::vector<KSet> edges_of_hamperm(const Hamperm& pi) {
  const CycleSpec& s = pi.spec();
  // Re-validate: a default-constructed or hand-assembled spec may be off.
  (void)CycleSpec::make(s.n, s.k, s.ell);
  std::vector<KSet> out;
  out.reserve(static_cast<std::size_t>(s.m));
  for (int i = 1; i <= s.m; ++i) {
    std::uint64_t mask = 0;
    for (int j = 1; j <= s.k; ++j) mask |= std::uint64_t{1} << (pi.at((i - 1) * s.block() + j) - 1);
    out.emplace_back(mask);
  }
  return out;
}

std::optional<std::vector<int>> distinct_color_system(std::span<const std::span<const int>> lists) {
  // Kuhn's augmenting-path matching, lists on the left, colors on the right.
  std::unordered_map<int, int> owner;  // color -> list index
  std::vector<int> chosen(lists.size(), 0);

  for (std::size_t root = 0; root < lists.size(); ++root) {
    std::unordered_map<int, int> visited;
    auto augment = [&](auto&& self, std::size_t i) -> bool {
      for (int c : lists[i]) {
        if (visited[c]) continue;
        visited[c] = 1;
        auto it = owner.find(c);
        if (it == owner.end() || self(self, static_cast<std::size_t>(it->second))) {
          owner[c] = static_cast<int>(i);
          chosen[i] = c;
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, root)) return std::nullopt;
  }
  return chosen;
}

Validation validate_cycle(const ColoredHypergraph& h, const Hamperm& pi) {
  const CycleSpec& s = pi.spec();
  if (h.n() != s.n || h.k() != s.k) {
    throw Error(ErrorKind::InvalidInput, "hypergraph and cycle spec disagree on n or k");
  }
  const std::vector<KSet> edges = edges_of_hamperm(pi);
  std::vector<std::span<const int>> lists;
  lists.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto cs = h.colors(edges[i]);
    if (cs.empty()) return MissingEdge{static_cast<int>(i) + 1};
    lists.push_back(cs);
  }
  auto system = distinct_color_system(lists);
  if (!system) return NotRainbow{};
  return RainbowCertificate{pi, edges, std::move(*system)};
}

bool verify_certificate(const ColoredHypergraph& h, const RainbowCertificate& cert) {
  const CycleSpec& s = cert.hamperm.spec();
  if (h.n() != s.n || h.k() != s.k) return false;
  if (cert.edges.size() != static_cast<std::size_t>(s.m) || cert.colors.size() != cert.edges.size()) {
    return false;
  }
  try {
    // The hamperm constructor validated bijectivity; recheck against a fresh copy.
    Hamperm fresh(cert.hamperm.pi(), s);
    if (edges_of_hamperm(fresh) != cert.edges) return false;
  } catch (const Error&) {
    return false;
  }
  std::vector<int> sorted = cert.colors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 0; i < cert.edges.size(); ++i) {
    if (!h.has(cert.edges[i], cert.colors[i])) return false;
  }
  return true;
}

}  // namespace rlab
