#pragma once

// Colored hypergraph text format (.chg):
//
//   # comment lines start with '#'
//   n k r [multi]
//   v_1 v_2 ... v_k color      (one edge per line, 1-based, vertices increasing)
//
// A k-set may repeat with a different color only under `multi`; a repeated
// (k-set, color) pair is always a parse error.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rlab/core.hpp"

namespace rlab {

using HeaderFields = std::vector<std::pair<std::string, std::string>>;

// Throws Error(Parse) with a line number on malformed input.
ColoredHypergraph read_chg(std::istream& in);
ColoredHypergraph read_chg_file(const std::string& path);

// Header fields become "# key: value" comment lines.
void write_chg(std::ostream& out, const ColoredHypergraph& h, const HeaderFields& header = {});
void write_chg_file(const std::string& path, const ColoredHypergraph& h, const HeaderFields& header = {});

}  // namespace rlab
