#pragma once

// Input language for algebra and module presentations:
//   algebra F2[t]/(t^2+t)
//   algebra F3[x,y]/(x^2 - y; y^2; x*y)
//   module Z4[e1,e2]/(2e1 + 2e2; 2e2)
// Diagnostics carry line/column positions; presentations round-trip
// through the formatter.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wittkit/fpalg.hpp"
#include "wittkit/zpn.hpp"

namespace wittkit {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " +
                             std::to_string(c)),
          line(l), column(c) {}
};

enum class PresentationKind { Algebra, Module, Extension };

// polynomial with integer coefficients on named generators
using PolyTerm = std::map<std::string, std::uint32_t>;  // generator -> exponent
struct Polynomial {
    std::map<PolyTerm, std::int64_t> terms;
};

struct Presentation {
    PresentationKind kind = PresentationKind::Algebra;
    std::uint32_t p = 2;        // prime (algebra) or prime of Z/p^n (module)
    std::uint32_t n = 1;        // 1 for algebras; exponent for modules
    std::vector<std::string> generators;
    std::vector<Polynomial> relators;
    std::uint32_t dimension_cap = 64;

    bool operator==(const Presentation& o) const;
};

Presentation parse_presentation(const std::string& text);
std::string format_presentation(const Presentation& p);

// Build the structure-constant table by Gaussian elimination on the
// monomial spanning set (graded-lex order), with the dimension cap.
FpAlgebra algebra_from_presentation(const Presentation& pres);

// Linear module presentations over Z/p^n.
ZpnModule module_from_presentation(const Presentation& pres);

}  // namespace wittkit
