#include "rlab/chg_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rlab {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::vector<long long> read_ints(const std::string& text, int line, std::string* trailing_word) {
  std::istringstream is(text);
  std::vector<long long> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) {
      if (trailing_word != nullptr && trailing_word->empty() && !(is >> std::ws).good()) {
        *trailing_word = tok;
        break;
      }
      parse_fail(line, "unexpected token '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

ColoredHypergraph read_chg(std::istream& in) {
  std::string text;
  int line = 0;
  bool have_header = false;
  ColoredHypergraph h;
  while (std::getline(in, text)) {
    ++line;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;

    if (!have_header) {
      std::string word;
      auto nums = read_ints(text, line, &word);
      if (nums.size() != 3) parse_fail(line, "header must be 'n k r [multi]'");
      if (!word.empty() && word != "multi") parse_fail(line, "unknown header flag '" + word + "'");
      try {
        h = ColoredHypergraph(static_cast<int>(nums[0]), static_cast<int>(nums[1]), static_cast<int>(nums[2]),
                              word == "multi");
      } catch (const Error& e) {
        parse_fail(line, e.what());
      }
      have_header = true;
      continue;
    }

    auto nums = read_ints(text, line, nullptr);
    if (static_cast<int>(nums.size()) != h.k() + 1) {
      parse_fail(line, "expected " + std::to_string(h.k()) + " vertices and a color");
    }
    std::vector<int> vs;
    for (int i = 0; i < h.k(); ++i) {
      if (nums[static_cast<std::size_t>(i)] < 1 || nums[static_cast<std::size_t>(i)] > h.n()) {
        parse_fail(line, "vertex outside [1, n]");
      }
      if (i > 0 && nums[static_cast<std::size_t>(i)] <= nums[static_cast<std::size_t>(i) - 1]) {
        parse_fail(line, "vertices must be strictly increasing");
      }
      vs.push_back(static_cast<int>(nums[static_cast<std::size_t>(i)]));
    }
    try {
      h.add(KSet::of(vs), static_cast<int>(nums.back()));
    } catch (const Error& e) {
      parse_fail(line, e.what());
    }
  }
  if (!have_header) parse_fail(line, "missing 'n k r' header");
  return h;
}

ColoredHypergraph read_chg_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  return read_chg(in);
}

void write_chg(std::ostream& out, const ColoredHypergraph& h, const HeaderFields& header) {
  for (const auto& [key, value] : header) out << "# " << key << ": " << value << '\n';
  out << h.n() << ' ' << h.k() << ' ' << h.r();
  if (h.multi_color()) out << " multi";
  out << '\n';
  for (const auto& e : h.sorted_edges()) {
    for (int v : e.vertices.vertices()) out << v << ' ';
    out << e.color << '\n';
  }
}

void write_chg_file(const std::string& path, const ColoredHypergraph& h, const HeaderFields& header) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  write_chg(out, h, header);
}

}  // namespace rlab
