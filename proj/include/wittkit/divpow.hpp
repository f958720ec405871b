#pragma once

// Divided powers Gamma^d and symmetric powers Sym^d of presented modules
// over Z/p^n, with symbol calculus and the generator presentation of
// Gamma^d(M/N); plus the Verschiebung/Frobenius sequences of a free
// module over an F_p-algebra and their splice.

#include <functional>
#include <map>
#include <vector>

#include "wittkit/fpalg.hpp"
#include "wittkit/zpn.hpp"

namespace wittkit {

using MultiIndex = std::vector<std::uint32_t>;

std::vector<MultiIndex> compositions(std::size_t slots, std::uint32_t total);

// Sparse element of the degree-graded symbol algebra of a free module:
// multi-index -> coefficient.
using SymbolDist = std::map<MultiIndex, std::uint64_t>;

// [x]_t expanded on the multi-symbol basis of Gamma^t(F), x in F-coords.
SymbolDist expand_pure_symbol(Mod mod, const Vec& x, std::uint32_t t);
// product of two symbol distributions: [e]_a * [e]_b = prod C(a_i+b_i, a_i) [e]_{a+b}
SymbolDist symbol_merge(Mod mod, const SymbolDist& u, const SymbolDist& v);

// Gamma^d of a presented module M = F/N over Z/p^n, presented on the
// multi-symbol basis of Gamma^d(F) modulo the span of
// { [x+y]_d - [x]_d : x in F, y in R * generators(N) }.
struct GammaModule {
    Mod mod;
    std::uint32_t d = 1;
    ZpnModule source;                 // M
    std::vector<MultiIndex> basis;    // of Gamma^d(F)
    std::map<MultiIndex, std::size_t> index;
    ZpnModule module;                 // the presented Gamma^d(M)

    Vec dist_to_coords(const SymbolDist& s) const;
    Vec pure_symbol(const Vec& x_in_F) const;       // class of [x]_d
    Vec reduce(const Vec& v) const { return module.reduce(v); }
};

// reduced_generators: use x over the basis of F plus pairwise sums instead
// of all of F (an optimization; cross-checked against full enumeration in
// the tests before use anywhere else).
GammaModule gamma_module(Mod mod, const ZpnModule& m, std::uint32_t d,
                         bool reduced_generators = false);

// functorial map Gamma^d(f) on symbol expansions
ModuleMap gamma_map(const GammaModule& dom, const GammaModule& cod, const ModuleMap& f);

// Sym^d of a presented module, on the monomial basis of Sym^d(F) modulo
// N * Sym^{d-1}(F).
struct SymModule {
    Mod mod;
    std::uint32_t d = 1;
    ZpnModule source;
    std::vector<MultiIndex> basis;
    std::map<MultiIndex, std::size_t> index;
    ZpnModule module;

    // expansion of x_1 ... x_d (each x_i in F-coords) on the monomial basis
    Vec product_of(const std::vector<Vec>& xs) const;
};
SymModule sym_module(Mod mod, const ZpnModule& m, std::uint32_t d);

// j_p : Sym^p(M) -> Gamma^p(M), x_1...x_p -> 1/(p-1)! [x_1]_1...[x_p]_1;
// on monomial bases e^a -> (prod a_i!) / (p-1)! * m_a.
ModuleMap divided_symbol_map(const SymModule& s, const GammaModule& g);

// multiplication on Gamma^d(R) for a module R that carries a ring
// structure: matrix-expansion rule through Gamma^d(R (x) R) -> Gamma^d(R).
// `mult` multiplies two canonical F-coordinate vectors in R.
Vec gamma_ring_product(const GammaModule& g, const Vec& u, const Vec& v,
                       const std::function<Vec(const Vec&, const Vec&)>& mult);

// A degree-homogeneous polynomial law presented by its generic-point
// coefficient family: coeffs_at(x_1..x_k) returns the coefficients of
// F(u_1 x_1 + ... + u_k x_k) indexed by monomials u^a with |a| = degree.
struct PolynomialLaw {
    std::uint32_t degree = 1;
    std::function<std::map<MultiIndex, Vec>(const std::vector<Vec>&)> coeffs_at;
    std::function<Vec(const Vec&)> value;
};
PolynomialLaw pure_symbol_law(const GammaModule& g);

// ----- free modules over an F_p-algebra (the bundle-side calculus) -----

// matrix over A acting on row vectors of free A-modules
struct AMat {
    FpAlgebra alg;
    std::size_t rows = 0, cols = 0;
    std::vector<Vec> e;  // entries, row-major, each an element of A

    AMat() = default;
    AMat(FpAlgebra a, std::size_t r, std::size_t c);
    static AMat identity(const FpAlgebra& a, std::size_t k);
    Vec& at(std::size_t r, std::size_t c) { return e[r * cols + c]; }
    const Vec& at(std::size_t r, std::size_t c) const { return e[r * cols + c]; }
    AMat mul(const AMat& o) const;
    AMat transpose() const;
    // expansion to an F_p matrix of shape (rows*dim) x (cols*dim)
    ZpnMat to_fp() const;
    bool operator==(const AMat& o) const { return e == o.e && rows == o.rows && cols == o.cols; }
};

// Verschiebung/Frobenius calculus of V = A^r in degree p.
struct BundleOps {
    FpAlgebra alg;
    std::uint32_t rank = 1;
    std::vector<MultiIndex> deg_p;        // monomials / multi-symbols of degree p
    std::vector<std::size_t> pure;        // positions of the p-th powers v_i^p
    std::vector<std::size_t> nonpure;     // the complementary positions
    AMat ver;        // Frob^*(V) -> Sym^p(V):  v_i (x) 1 -> v_i^p
    AMat frob;       // Gamma^p(V) -> Frob^*(V): m_a -> [a = p e_i] v_i (x) 1
    AMat sym_proj;   // Sym^p(V) -> SymBar (cokernel of ver, basis = nonpure monomials)
    AMat gamma_incl; // GammaBar (basis = nonpure symbols) -> Gamma^p(V)
    AMat alpha;      // Sym^p(V) -> Gamma^p(V): e^a -> (prod a_i!) m_a
    AMat alpha_bar;  // SymBar -> GammaBar (the induced map)
};
BundleOps bundle_ops(const FpAlgebra& a, std::uint32_t rank);

// exactness of a chain of A-matrices between free modules (via F_p expansion)
ExactnessResult amat_exact(const std::vector<AMat>& chain);

bool gamma_zero_iso_is_bijective(const BundleOps& b);

// dual of EVer(V^dual) is canonically isomorphic to EFrob(V); returns true
// and the witness matrices when the identification squares commute.
bool duality_check(const FpAlgebra& a, std::uint32_t rank);

// 0 -> Frob^*(V) -> Sym^p(V) -> Gamma^p(V) -> Frob^*(V) -> 0
struct FourTermSequence {
    BundleOps ops;
    AMat left;    // ver
    AMat middle;  // alpha
    AMat right;   // frob
    ExactnessResult exact;
};
FourTermSequence fundamental_two_extension(const FpAlgebra& a, std::uint32_t rank);

}  // namespace wittkit
