#pragma once

// Truncated Witt vectors W_n(A) over a characteristic-p algebra, with the
// structure polynomials computed once per (p, n) by exact symbolic
// recursion on ghost components.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <vector>

#include "wittkit/finring.hpp"
#include "wittkit/fpalg.hpp"

namespace wittkit {

using BigInt = boost::multiprecision::cpp_int;

// Integer polynomial in 2n variables x_0..x_{n-1}, y_0..y_{n-1} (sparse).
struct IntPoly {
    // exponent vector (size 2n) -> coefficient
    std::map<std::vector<std::uint32_t>, BigInt> terms;

    static IntPoly zero() { return {}; }
    static IntPoly variable(std::size_t nvars, std::size_t i);
    static IntPoly constant(std::size_t nvars, const BigInt& c);
    IntPoly add(const IntPoly& o) const;
    IntPoly sub(const IntPoly& o) const;
    IntPoly mul(const IntPoly& o) const;
    IntPoly pow(std::uint64_t e, std::size_t nvars) const;
    IntPoly scale(const BigInt& c) const;
    // divide every coefficient by c exactly; throws if not exact
    IntPoly div_exact(const BigInt& c) const;
    bool is_zero() const { return terms.empty(); }
};

// The addition, multiplication and negation polynomials of W_n, with the
// ghost-component identities verified symbolically over the integers.
struct WittPolynomials {
    std::uint32_t p = 2, n = 1;
    std::vector<IntPoly> sum;   // S_0..S_{n-1} in x_*, y_*
    std::vector<IntPoly> prod;  // P_0..P_{n-1}
    std::vector<IntPoly> neg;   // N_0..N_{n-1} in x_* only (y's unused)

    // Every monomial of S_m/P_m/N_m is isobaric of weight p^m when x_i and
    // y_i carry weight p^i (checked at construction).
    bool isobaric_checked = false;
};

// Cached per (p, n); thread-safe single initialization.
const WittPolynomials& witt_polynomials(std::uint32_t p, std::uint32_t n);

// Witt vectors over a structure-constant F_p-algebra. A WittVec holds n
// components, each an element of the base algebra.
using WittVec = std::vector<Vec>;

struct WittRing {
    FpAlgebra base;
    std::uint32_t n = 1;

    WittRing() = default;
    WittRing(FpAlgebra a, std::uint32_t len);

    WittVec zero() const;
    WittVec one() const { return teichmuller(base.unit); }
    WittVec teichmuller(const Vec& x) const;
    WittVec add(const WittVec& u, const WittVec& v) const;
    WittVec sub(const WittVec& u, const WittVec& v) const;
    WittVec neg(const WittVec& u) const;
    WittVec mul(const WittVec& u, const WittVec& v) const;
    WittVec scale(std::int64_t c, const WittVec& u) const;  // c * u, c an integer
    WittVec pow(const WittVec& u, std::uint64_t e) const;
    bool is_zero(const WittVec& u) const;
    bool equal(const WittVec& u, const WittVec& v) const;
    // componentwise p-th power (a ring endomorphism in characteristic p)
    WittVec frobenius(const WittVec& u) const;
    std::uint64_t size() const;
    std::vector<WittVec> elements() const;
    std::uint64_t index_of(const WittVec& u) const;  // mixed-radix enumeration index
    WittVec from_index(std::uint64_t idx) const;
};

// pi_{n,m}: truncation to the first m components (a surjective ring map).
WittVec project(const WittRing& from, const WittVec& u, std::uint32_t m);
// i_{m,n}: prepend n-m zeros; additive with image ker(pi_{n,n-(n-m)} ...).
WittVec inject(const WittRing& into, const WittVec& shorter);

// log on (1 + i(W_n))^x inside W_{n+1} with values in (W_n, +), p odd.
// Argument u must have first component 1; u = 1 - i(a) and
// log(u) = a + (p/2) a^2 + (p^2/3) a^3 + ... evaluated in W_n.
WittVec witt_log(const WittRing& wn1, const WittVec& u);
// Inverse map: t in W_n -> 1 - i(t - (p/2!) t^2 + (p^2/3!) t^3 - ...).
WittVec witt_exp(const WittRing& wn1, const WittVec& t);

// W_n(B) as a FiniteRing with conversions both ways.
struct WittRingTable {
    WittRing wr;
    FiniteRing ring;
    FinAbGroup group;
    Vec to_coords(const WittVec& u) const { return group.coords_of[wr.index_of(u)]; }
    WittVec from_coords(const Vec& c) const { return wr.from_index(group.index_of.at(ring.reduce(c))); }
};
WittRingTable witt_ring_table(const WittRing& wr);

// The canonical ring map W_n(B) -> R for a (Z/p^n)-algebra R with
// B = R/pR, sending the multiplicative representative of xbar to
// x^(p^{n-1}). Built from the component formula sum_i p^i lift(a_i)^(p^{n-1-i})
// and verified to be a ring homomorphism; Teichmüller representatives are
// checked to span W_n(B) additively, which pins the map uniquely.
struct CanonicalLift {
    FiniteRing target;          // R
    FpAlgebra reduction;        // B = R/pR
    std::vector<Vec> lift_of_basis;  // coords in R lifting each basis elt of B
    WittRing witt;              // W_n(B)
    std::uint32_t n = 1;

    Vec lift(const Vec& b) const;        // any set-lift B -> R
    Vec apply(const WittVec& w) const;   // the ring map W_n(B) -> R
};
CanonicalLift canonical_lift_hom(const FiniteRing& r);

// The natural isomorphism W_n(A_f) = W_n(A)_{tau(f)} for finite A, as a
// mutually inverse pair of verified ring maps.
struct WittLocalization {
    WittRing source;        // W_n(A)
    Localization loc;       // A -> A_f
    WittRing witt_local;    // W_n(A_f)
    FiniteRing witt_of_local;   // table of W_n(A_f)
    FiniteRing localized_witt;  // W_n(A)_{tau(f)}
    RingHom forward;        // W_n(A)_{tau(f)} -> W_n(A_f)
    RingHom backward;       // W_n(A_f) -> W_n(A)_{tau(f)}
};
WittLocalization witt_localization(const FpAlgebra& a, const Vec& f, std::uint32_t n);

}  // namespace wittkit
