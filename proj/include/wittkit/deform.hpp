#pragma once

// Square-zero extensions of finite reduced F_p-algebras: the connecting
// invariant of multiplication by p, Baer calculus, the canonical
// extensions attached to Frobenius, flat Z/p^2-lifts and Frobenius-split
// lifting, and the canonical W_2-module extension of a free bundle.

#include <functional>
#include <memory>
#include <optional>

#include "wittkit/divpow.hpp"
#include "wittkit/finring.hpp"
#include "wittkit/witt.hpp"

namespace wittkit {

// 0 -> M -> T -> A -> 0 with M an A-module, T a finite ring, iota(M) a
// square-zero ideal equal to ker(pi). All structural conditions are
// verified at construction.
struct SquareZeroExt {
    FpAlgebra base;           // A
    AModule kernel_module;    // M with its A-action
    FiniteRing total;         // T
    std::vector<Vec> iota;    // per M-basis vector: T-coordinates
    std::vector<Vec> pi;      // per T-generator: A-coordinates

    Vec apply_pi(const Vec& t) const;
    Vec apply_iota(const Vec& m) const;
    // preimage of a under pi with iota-part zeroed against a fixed section
    Vec section(const Vec& a) const;
    // iota^{-1} on ker(pi)
    Vec iota_inv(const Vec& t) const;
};

SquareZeroExt make_square_zero(FpAlgebra a, AModule m, FiniteRing t, std::vector<Vec> iota,
                               std::vector<Vec> pi);
SquareZeroExt split_extension(const FpAlgebra& a, const AModule& m);

// kappa of multiplication by p: A -> M, s -> iota^{-1}(p * lift(s)).
ZpnMat kappa(const SquareZeroExt& e);

// pushforward along an A-linear map f : M -> M' (rows: images of M-basis)
SquareZeroExt pushforward_ext(const SquareZeroExt& e, const ZpnMat& f, const AModule& m2);
// pullback along an algebra map g : A' -> A
SquareZeroExt pullback_ext(const SquareZeroExt& e, const AlgebraMorphism& g);
SquareZeroExt baer_sum(const SquareZeroExt& e1, const SquareZeroExt& e2);
SquareZeroExt baer_neg(const SquareZeroExt& e);
SquareZeroExt baer_diff(const SquareZeroExt& e1, const SquareZeroExt& e2);

// Isomorphism of extensions (identity on M and A); found by a linear
// solver over F_p on the section-correction map.
struct ExtIso {
    const SquareZeroExt* from = nullptr;
    const SquareZeroExt* to = nullptr;
    std::map<Vec, Vec> correction;  // a in A -> delta(a) in M
    Vec apply(const Vec& t1) const;
};
std::optional<ExtIso> find_extension_iso(const SquareZeroExt& e1, const SquareZeroExt& e2);

// canonical data of a reduced algebra
struct CanonicalExts {
    FpAlgebra base;
    AModule frob_push;        // Frob_*(A)
    AModule cokernel;         // Frob_*(B^1) = coker(Frobenius)
    ZpnMat frob_map;          // A -> Frob_*(A), x -> x^p (F_p matrix)
    ZpnMat d_map;             // Frob_*(A) -> Frob_*(B^1)
    SquareZeroExt witt2;      // 0 -> Frob_*(A) -> W_2(A) -> A -> 0
    SquareZeroExt cartier;    // d_*(witt2), killed by p
};
CanonicalExts canonical_extensions(const FpAlgebra& a);  // requires a reduced

// view a ring B of characteristic p^2 that is free over Z/p^2 as the flat
// lift 0 -> B/p -> B -> B/p -> 0 with the regular kernel module
SquareZeroExt flat_lift_extension(const FiniteRing& b);
// W_2(A) as a flat lift of a perfect A (kernel identified via x -> x^{1/p})
SquareZeroExt witt2_as_flat_lift(const FpAlgebra& a);

// flat lifts: M is the regular module and kappa = identity
bool is_flat_lift(const SquareZeroExt& e);
// total ring is free over Z/p^2 (the other face of flatness)
bool total_is_free_over_zp2(const SquareZeroExt& e);

// the equivalence for flat lifts: e  <->  (F, witness d_*(F) ~ cartier)
struct MarkedExtension {
    SquareZeroExt f;          // extension of A by Frob_*(A), killed by p
    SquareZeroExt d_push;     // d_*(F)
    ExtIso witness;           // d_*(F) ~ CW2(A)
    std::shared_ptr<SquareZeroExt> d_push_box, cartier_box;  // witness targets
};
MarkedExtension to_marked(const CanonicalExts& c, const SquareZeroExt& flat);
SquareZeroExt from_marked(const CanonicalExts& c, const SquareZeroExt& f);

// search for a ring endomorphism of the total lifting Frobenius
std::optional<std::vector<Vec>> detect_frobenius_lift(const SquareZeroExt& e);

// splitting s of 0 -> A -> Frob_*(A) -> Frob_*(B^1) -> 0 (A-linear, d o s = id)
std::optional<ZpnMat> find_frobenius_splitting(const CanonicalExts& c);
SquareZeroExt lift_from_splitting(const CanonicalExts& c, const ZpnMat& s);

// ---------------------------------------------------------------------
// The canonical W_2(A)-module extension of a free bundle V = A^r:
// 0 -> Frob_*(Sym^p V) -> T -> V -> 0 with the multiplicative section.
struct BundleExtension {
    FpAlgebra base;
    std::uint32_t rank = 1;
    FiniteRing w2;                      // W_2(A) acting on everything
    WittRingTable w2_table;
    std::vector<MultiIndex> sym_basis;  // degree-p monomials
    std::uint64_t v_size = 0, sym_size = 0;

    // elements are pairs (x, s), x in V = A^r, s in Sym^p(V), indexed
    std::uint64_t index(const std::vector<Vec>& x, const Vec& s_coords) const;
    std::pair<std::vector<Vec>, Vec> unindex(std::uint64_t) const;

    // the group law (x,s)+(y,t) = (x+y, s+t+c(x,y)) and the W_2(A)-action
    std::uint64_t add(std::uint64_t, std::uint64_t) const;
    std::uint64_t act(const Vec& w2_coords, std::uint64_t) const;
    std::uint64_t neg(std::uint64_t) const;
    Vec cocycle(const std::vector<Vec>& x, const std::vector<Vec>& y) const;  // in Sym^p
    std::uint64_t section_of(const std::vector<Vec>& x) const;  // s_V(x) = (x, 0)
    std::uint64_t inject_sym(const Vec& s) const;               // i_V(s) = (0, s)
    Vec kappa_of(const std::vector<Vec>& x) const;              // p * s_V(x), in Sym^p
    Vec sym_power(const std::vector<Vec>& x) const;             // x^p as Sym-coords
};
BundleExtension bundle_w2_extension(const FpAlgebra& a, std::uint32_t rank);

// the pushforward of the bundle extension by the quotient of the
// symmetric power is the Baer inverse of the Frobenius-kernel extension
bool bundle_pushforward_identity(const BundleExtension& b);

// Reconstruct a W_2-module lift of V from the marked extension produced
// by a free lift; returns true when the round trip yields a free
// W_2(A)-module of rank `rank` reducing to V.
bool bundle_lift_round_trip(const FpAlgebra& a, std::uint32_t rank);

}  // namespace wittkit
