#pragma once

// Finite abelian p-groups with verified cyclic decompositions, and finite
// commutative rings presented on additive cyclic generators.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wittkit/zpn.hpp"

namespace wittkit {

// Verified decomposition of an enumerated abelian p-group into cyclic
// factors. Elements are caller indices in [0, count); coords are tuples
// (c_0, ..., c_{k-1}) with c_i in [0, p^exps[i]).
struct FinAbGroup {
    std::uint32_t p = 2;
    std::vector<std::uint32_t> exps;
    std::vector<std::size_t> basis;           // element index per cyclic factor
    std::vector<Vec> coords_of;               // element index -> coords
    std::map<Vec, std::size_t> index_of;      // coords -> element index

    std::size_t size() const { return coords_of.size(); }
};

// Decompose the group given by `add` on indices [0, count) with identity
// `zero`. Throws logic_error if the callbacks are not a p-group.
FinAbGroup decompose_abelian_p_group(std::uint32_t p, std::size_t count,
                                     const std::function<std::size_t(std::size_t, std::size_t)>& add,
                                     std::size_t zero);

// Finite commutative unital ring, additively ⊕ Z/p^exps[i], with the
// multiplication table on the additive generators. Associativity,
// commutativity and unitality are verified at construction.
struct FiniteRing {
    std::uint32_t p = 2;
    std::vector<std::uint32_t> exps;
    std::vector<std::vector<Vec>> prod;  // prod[i][j] = coords of g_i * g_j
    Vec unit;

    FiniteRing() = default;
    FiniteRing(std::uint32_t p_, std::vector<std::uint32_t> exps_, std::vector<std::vector<Vec>> prod_,
               Vec unit_);

    // (Z/p^n)[t]/(monic), coefficients low-to-high; free of rank deg over Z/p^n.
    static FiniteRing modpn_univariate(std::uint32_t p, std::uint32_t n, const Vec& monic);
    static FiniteRing modpn(std::uint32_t p, std::uint32_t n);  // Z/p^n
    // From a characteristic-p structure-constant algebra.
    static FiniteRing from_fp_algebra(const struct FpAlgebra& a);

    std::size_t rank() const { return exps.size(); }
    std::uint32_t scalar_level() const;  // max exps (ring killed by p^level)
    std::uint64_t order_of_factor(std::size_t i) const { return pow_u64(p, exps[i]); }
    std::uint64_t size() const;
    std::uint64_t characteristic() const;  // additive order of 1

    Vec zero() const { return Vec(rank(), 0); }
    Vec one() const { return unit; }
    Vec reduce(const Vec& x) const;
    Vec add(const Vec& a, const Vec& b) const;
    Vec sub(const Vec& a, const Vec& b) const;
    Vec neg(const Vec& a) const;
    Vec scale(std::int64_t c, const Vec& a) const;
    Vec mul(const Vec& a, const Vec& b) const;
    Vec pow(const Vec& a, std::uint64_t e) const;
    bool is_zero(const Vec& a) const;
    std::vector<Vec> elements() const;

    // Presented module over Z/p^N, N >= scalar_level(): ambient = rank,
    // relators p^exps[i] * e_i.
    ZpnModule as_module(std::uint32_t big_n) const;

    bool operator==(const FiniteRing& o) const {
        return p == o.p && exps == o.exps && prod == o.prod && unit == o.unit;
    }
};

// Ring homomorphism given by images of the additive generators; additive
// well-definedness, multiplicativity and unitality verified.
struct RingHom {
    FiniteRing domain, codomain;
    std::vector<Vec> images;

    RingHom() = default;
    RingHom(FiniteRing dom, FiniteRing cod, std::vector<Vec> im);
    static RingHom identity(const FiniteRing& r);

    Vec apply(const Vec& x) const;
    RingHom compose(const RingHom& then) const;
    // span of the image inside codomain's module over Z/p^N
    ZpnMat image_span_mat(std::uint32_t big_n) const;
    bool is_surjective() const;
    // generators of ker as rows over Z/p^N (includes the order relators? no:
    // kernel elements as codomain... domain coords)
    ZpnMat kernel_span(std::uint32_t big_n) const;
    bool is_injective() const;
};

// Cyclic coordinates for a presented Z/p^n-module via its Smith form:
// project() maps ambient vectors to tuples over ⊕ Z/p^vexp[k], section()
// lifts the k-th cyclic generator back to ambient coordinates.
struct SmithCoords {
    Mod mod;
    ZpnMat w, winv;
    std::vector<std::size_t> keep;
    std::vector<std::uint32_t> vexp;  // exponents of the kept factors

    static SmithCoords of(const ZpnModule& m);
    Vec project(const Vec& ambient) const;
    Vec section(std::size_t k) const;
    std::vector<std::uint32_t> exps() const { return vexp; }
};

// Quotient of a ring by an ideal given as a row-span of additive
// generators (must be an ideal; the constructor of the quotient verifies
// ring axioms and multiplicative closure).
struct QuotientRing {
    FiniteRing ring;      // the quotient
    RingHom projection;   // R -> R/I
    std::vector<Vec> section;  // coords in R for each quotient generator
};
QuotientRing quotient_ring(const FiniteRing& r, const ZpnMat& ideal_rows);

// Verify that a row span is multiplicatively closed under the ring.
bool is_ideal(const FiniteRing& r, const ZpnMat& rows);

// Build a FiniteRing from an enumerated ring via cyclic decomposition.
struct EnumRing {
    std::size_t count;
    std::function<std::size_t(std::size_t, std::size_t)> add;
    std::function<std::size_t(std::size_t, std::size_t)> mul;
    std::size_t zero, one;
};
struct EnumeratedRing {
    FiniteRing ring;
    FinAbGroup group;  // coords_of maps enumeration indices to ring coords
};
EnumeratedRing ring_from_enumeration(std::uint32_t p, const EnumRing& e);

}  // namespace wittkit
