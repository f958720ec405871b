#pragma once

// Construction of W_{n+1} out of divided powers of W_n: the ring
// Gamma^p_{Z/p^{n+1}}(R)/Jtilde for a ring R killed by p^n, the power law
// homomorphism attached to a p-elementary surjection, the recursion onto
// W_{n+1}(B) with its kernel description, and lifting of towers of
// p-elementary surjections.

#include <optional>

#include "wittkit/divpow.hpp"
#include "wittkit/finring.hpp"
#include "wittkit/witt.hpp"

namespace wittkit {

// Surjective ring map whose kernel I satisfies pI = I^p = 0. Carries the
// verified kernel span and the map V(x) = p * (any preimage of x).
struct PElementaryMap {
    RingHom hom;     // f : R' -> R
    ZpnMat kernel;   // span of ker(f) in R'-coordinates over Z/p^level

    Vec v_of(const Vec& x_in_codomain) const;  // p * preimage
    Vec preimage(const Vec& x_in_codomain) const;
};
PElementaryMap p_elementary(const RingHom& f);

// The divided-power ring Gamma^p_{Z/p^{n+1}}(R) / Jtilde for a finite ring
// R killed by p^n, together with its distinguished maps.
struct GammaRing {
    std::uint32_t p = 2, n = 1;   // R killed by p^n, coefficients Z/p^{n+1}
    FiniteRing r;
    GammaModule gamma;            // Gamma^p of the underlying module
    SymModule sym;                // Sym^p of the underlying module
    ModuleMap j_map;              // Sym^p -> Gamma^p (divided symbol map)
    ZpnMat j_ideal;               // span of the image of ker(Sym^p -> R)
    ZpnModule phi_module;         // Gamma / j_ideal (same ambient)
    SmithCoords coords;           // cyclic coordinates of phi_module
    FiniteRing phi;               // the quotient ring
    Vec unit_ambient;             // [1]_p in Gamma-ambient coordinates

    Vec reduce_ambient(const Vec& gamma_coords) const { return phi_module.reduce(gamma_coords); }
    Vec project(const Vec& gamma_coords) const { return coords.project(gamma_coords); }
    Vec gamma_pure(const Vec& r_elem) const;       // [x]_p, Gamma-ambient coords
    Vec gamma_ideal_elem(const Vec& r_elem) const; // phi_{n+1}(x), Gamma-ambient coords
    Vec pure_symbol(const Vec& r_elem) const { return project(gamma_pure(r_elem)); }
    Vec ideal_elem(const Vec& r_elem) const { return project(gamma_ideal_elem(r_elem)); }
    Vec mult_ambient(const Vec& u, const Vec& v) const;  // the ring product upstairs
};
GammaRing build_gamma_ring(const FiniteRing& r);

// functoriality of the construction in R
RingHom gamma_ring_map(const GammaRing& dom, const GammaRing& cod, const RingHom& f);

// L_{n+1}(f) : Phi(R) -> R' for a p-elementary f : R' -> R, sending the
// pure symbol of f(x) to x^p. Well-definedness across preimage choices is
// verified; the returned RingHom re-verifies the ring axioms.
RingHom power_law_hom(const GammaRing& phi_of_r, const PElementaryMap& f);

// The canonical surjection s : Phi(W_n(B)) -> W_{n+1}(B) with its kernel.
struct WittRecursion {
    FpAlgebra base;
    std::uint32_t n = 1;
    WittRingTable wn, wn1;
    GammaRing phi;
    std::vector<Vec> kernel_gens;  // the stated generators, phi coordinates
    RingHom s;                     // phi.phi -> wn1.ring
    bool is_isomorphism = false;
    std::uint64_t kernel_order = 1;
};
WittRecursion witt_recursion(const FpAlgebra& b, std::uint32_t n);

// A tower of p-elementary surjections under W_*(B), commuting up to
// Frobenius and compatible with the additive shift.
struct LiftDiagram {
    FpAlgebra base;
    std::vector<WittRingTable> witt;      // W_1(B) .. W_k(B)
    std::vector<FiniteRing> rings;        // R_1 .. R_k
    std::vector<RingHom> maps;            // f_i : W_i(B) -> R_i
    std::vector<PElementaryMap> steps;    // F_i : R_i -> R_{i-1}, index i-2
    std::uint32_t level() const { return static_cast<std::uint32_t>(rings.size()); }
};

// level-1 diagram: any B-algebra R_1 (f_1 a ring map W_1(B) = B -> R_1)
LiftDiagram initial_diagram(const FpAlgebra& b, const FiniteRing& r1, const RingHom& f1);

// verify the two diagram conditions at every level
void check_diagram(const LiftDiagram& d);

// extend the tower through a new p-elementary surjection; the produced
// f_{n+1} is canonical (choice-independence is verified internally).
LiftDiagram lift_diagram(const LiftDiagram& d, const PElementaryMap& next);

}  // namespace wittkit
