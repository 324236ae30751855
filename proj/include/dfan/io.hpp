#pragma once

#include "dfan/diffop.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dfan {

enum class RingMode {
    Plain,      // commutator [d,v] = 1, z rejected
    Homogenized // commutator [d,v] = z, z legal
};

// Grammar: variables x<i>, t<j>, dx<i>, dt<j>, z; rational coefficients a or
// a/b; operators + - * ^ and juxtaposition; products associate left-to-right
// and are noncommutative. Throws ParseError with line/col.
DiffOp parse_operator(const std::string& text, RingSignature sig, RingMode mode,
                      int line_offset = 1);

// Canonical printing: terms descending in the canonical exponent order,
// factors in the fixed variable order, "a/b" coefficients. parse(print(P))
// reproduces P exactly in either mode.
std::string print_operator(const DiffOp& P);

std::string print_exponent(const ExponentVector& e); // bracketed flat list

struct InputProblem {
    RingSignature sig;
    bool raw = false;            // true: `gen =` lines; false: `f<j> =` lines
    std::vector<DiffOp> f;       // polynomial map components (x variables only)
    std::vector<DiffOp> raw_gens;
};

// Line 1: `n=<int> p=<int>`. Then either `f<j> = <poly>` for every j in
// 1..p, or `gen = <operator>` lines. Blank lines and `#` comments skipped.
InputProblem parse_input(std::istream& in);
InputProblem parse_input_file(const std::string& path);

} // namespace dfan
