#pragma once

// Exact linear algebra over Z/p^n: Howell canonical forms, finitely
// presented modules, duality and exactness certificates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wittkit/common.hpp"

namespace wittkit {

// Coefficient ring Z/p^n. p prime, p^n < 2^31 so that products fit in
// uint64 without overflow.
struct Mod {
    std::uint32_t p = 2;
    std::uint32_t n = 1;
    std::uint64_t q = 2;  // p^n

    Mod() = default;
    Mod(std::uint32_t p_, std::uint32_t n_);
    bool operator==(const Mod& o) const { return p == o.p && n == o.n; }
    bool operator!=(const Mod& o) const { return !(*this == o); }

    std::uint64_t reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(q);
        if (r < 0) r += static_cast<std::int64_t>(q);
        return static_cast<std::uint64_t>(r);
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % q; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + q - b % q) % q; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a % q) * (b % q) % q; }
    std::uint64_t neg(std::uint64_t a) const { return (q - a % q) % q; }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    // p-adic valuation in [0, n], with val(0) = n.
    std::uint32_t val(std::uint64_t a) const;
    bool is_unit(std::uint64_t a) const { return a % p != 0; }
    // Inverse of a unit.
    std::uint64_t inv(std::uint64_t a) const;
    // a / b when b | a exactly (b = unit * p^v with v <= val(a)).
    std::uint64_t div_exact(std::uint64_t a, std::uint64_t b) const;
};

using Vec = std::vector<std::uint64_t>;

// Dense matrix over Z/p^n, rows x cols.
struct ZpnMat {
    Mod mod;
    std::size_t rows = 0, cols = 0;
    Vec a;

    ZpnMat() = default;
    ZpnMat(Mod m, std::size_t r, std::size_t c) : mod(m), rows(r), cols(c), a(r * c, 0) {}
    static ZpnMat identity(Mod m, std::size_t k);
    static ZpnMat from_rows(Mod m, const std::vector<Vec>& rows);

    std::uint64_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
    Vec row(std::size_t r) const { return Vec(a.begin() + r * cols, a.begin() + (r + 1) * cols); }
    void append_row(const Vec& v);
    bool operator==(const ZpnMat& o) const;

    ZpnMat transpose() const;
    ZpnMat mul(const ZpnMat& o) const;
    Vec apply(const Vec& x) const;         // x * this  (row vector convention)
    ZpnMat vstack(const ZpnMat& o) const;  // rows of this, then rows of o
};

// Howell canonical form: unique for a given row span. Rows with pivot
// entries p^v at strictly increasing pivot columns, entries above a pivot
// reduced mod p^v, zero rows dropped.
ZpnMat howell_form(const ZpnMat& m);

// Generators of { x : x * m = 0 }.
ZpnMat nullspace(const ZpnMat& m);

// Solve x * m = t; nullopt if unsolvable.
std::optional<Vec> solve_left(const ZpnMat& m, const Vec& t);

bool same_row_span(const ZpnMat& a, const ZpnMat& b);
bool in_row_span(const ZpnMat& h_or_any, const Vec& v);

// Finitely presented module (Z/p^n)^ambient / rowspan(relations).
// Elements are ambient coordinate vectors; reduce() gives the canonical
// representative with respect to the Howell form of the relations.
struct ZpnModule {
    Mod mod;
    std::size_t ambient = 0;
    ZpnMat rel;  // Howell form, rel.cols == ambient

    ZpnModule() = default;
    ZpnModule(Mod m, std::size_t amb);  // free module
    ZpnModule(Mod m, std::size_t amb, const ZpnMat& relations);
    static ZpnModule zero(Mod m) { return ZpnModule(m, 0); }

    Vec reduce(const Vec& x) const;
    bool is_zero_elem(const Vec& x) const;
    bool elems_equal(const Vec& x, const Vec& y) const;
    std::uint64_t size() const;        // number of elements
    std::uint32_t length() const;      // composition length over Z/p^n
    bool is_zero_module() const { return length() == 0; }
    // Enumerate all elements (canonical representatives). Guarded.
    std::vector<Vec> elements() const;
};

// A map of presented modules, x -> x * matrix. Well-definedness
// (relations of the domain land in the relation span of the codomain) is
// checked at construction.
struct ModuleMap {
    ZpnModule domain;
    ZpnModule codomain;
    ZpnMat matrix;  // domain.ambient x codomain.ambient

    ModuleMap() = default;
    ModuleMap(ZpnModule dom, ZpnModule cod, ZpnMat m);
    static ModuleMap zero(ZpnModule dom, ZpnModule cod);
    static ModuleMap identity(ZpnModule m);

    Vec apply(const Vec& x) const { return codomain.reduce(matrix.apply(x)); }
    ModuleMap compose(const ModuleMap& then) const;  // this, then `then`
    bool is_zero_map() const;
};

// Kernel of f as a presented module K together with the inclusion K -> domain.
struct KernelResult {
    ZpnModule module;
    ModuleMap inclusion;
};
KernelResult kernel(const ModuleMap& f);

// Cokernel: codomain / image, with the projection.
struct CokernelResult {
    ZpnModule module;
    ModuleMap projection;
};
CokernelResult cokernel(const ModuleMap& f);

// Image of f as a row-span in the codomain ambient (relations of the
// codomain included).
ZpnMat image_span(const ModuleMap& f);

struct ExactnessResult {
    bool exact = false;
    int failing_node = -1;  // index into the interior nodes, -1 if exact
    std::string reason;
};

// seq[0], seq[1], ... composable maps. Checks image == kernel at every
// interior node.
ExactnessResult is_exact(const std::vector<ModuleMap>& seq);

// Pontryagin dual Hom(M, Z/p^n). Generators of the dual are homomorphisms
// represented by their value vectors on the ambient basis of M; the dual
// is presented on those generators.
struct DualResult {
    ZpnModule module;        // presented on `hom_generators`
    ZpnMat hom_generators;   // rows: ambient value-vectors, each kills rel(M)
};
DualResult pontryagin_dual(const ZpnModule& m);

// Dual of a map: f : M -> N induces f^T : N^dual -> M^dual.
ModuleMap dual_map(const ModuleMap& f, const DualResult& dual_dom_of_codomain,
                   const DualResult& dual_cod_of_domain);

// Diagonal form over the local ring Z/p^n: u * m * w = d with u, w
// invertible and d diagonal with entries p^{e_1} | p^{e_2} | ...
struct SmithResult {
    ZpnMat u, d, w;
};
SmithResult smith_form(const ZpnMat& m);

// Invariant factors p^{f_1} >= p^{f_2} >= ... of a presented module
// (free summands count as p^n).
std::vector<std::uint32_t> invariant_factors(const ZpnModule& m);

}  // namespace wittkit
