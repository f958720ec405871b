#include <doctest.h>

#include "wittkit/wittrec.hpp"

using namespace wittkit;

namespace {

RingHom projection_hom(const WittRingTable& big, const WittRingTable& small) {
    std::vector<Vec> im;
    for (std::size_t i = 0; i < big.ring.rank(); ++i) {
        Vec gi = big.ring.zero();
        gi[i] = 1;
        im.push_back(small.to_coords(project(big.wr, big.from_coords(gi), small.wr.n)));
    }
    return RingHom(big.ring, small.ring, std::move(im));
}

RingHom frobenius_hom(const WittRingTable& t) {
    std::vector<Vec> im;
    for (std::size_t i = 0; i < t.ring.rank(); ++i) {
        Vec gi = t.ring.zero();
        gi[i] = 1;
        im.push_back(t.to_coords(t.wr.frobenius(t.from_coords(gi))));
    }
    return RingHom(t.ring, t.ring, std::move(im));
}

}  // namespace

TEST_CASE("the truncation of witt rings is p-elementary") {
    auto b = FpAlgebra::quadratic_field(2);
    auto w2 = witt_ring_table(WittRing(b, 2));
    auto w1 = witt_ring_table(WittRing(b, 1));
    auto pe = p_elementary(projection_hom(w2, w1));
    CHECK(pe.kernel.rows > 0);
    // V(x) = p * preimage: for x = tau(c), V(x) = p tau(c-lift) = i(tau(c^p))
    for (auto& c : b.elements()) {
        Vec x = w1.to_coords(w1.wr.teichmuller(c));
        Vec v = pe.v_of(x);
        WittRing w1r(b, 1);
        Vec expect = w2.to_coords(inject(w2.wr, w1r.teichmuller(b.pow(c, 2))));
        CHECK(v == expect);
    }
}

TEST_CASE("divided power ring of F_2 at level one is Z/4") {
    auto g = build_gamma_ring(FiniteRing::from_fp_algebra(FpAlgebra::prime_field(2)));
    CHECK(g.phi.size() == 4);
    CHECK(g.phi.characteristic() == 4);
    // j sends the unit monomial to p: ideal_elem(1) = p * [1]_p = p * unit
    Vec phi1 = g.ideal_elem(g.r.one());
    CHECK(phi1 == g.phi.scale(2, g.phi.one()));
}

TEST_CASE("image of the divided map is an ideal (multiplication by generators)") {
    // exercised inside build_gamma_ring; run it на a ring with nontrivial J
    auto b = FpAlgebra::dual_numbers(2);
    auto g = build_gamma_ring(FiniteRing::from_fp_algebra(b));
    CHECK(g.j_ideal.rows > 0);
    // phi(x) * phi(y) stays in the ideal span: check via in_row_span
    ZpnMat full = howell_form(g.phi_module.rel);
    for (auto& x : g.r.elements())
        for (auto& y : g.r.elements()) {
            Vec u = g.gamma_ideal_elem(x);
            Vec v = g.gamma_ideal_elem(y);
            Vec prod = g.mult_ambient(u, v);
            // the product of two ideal elements lies in the ideal + relators span:
            // phi(x) phi(y) = phi(x * s(y))-type element; at least it must be a
            // multiple of an ideal element. Verify it is killed by the projection
            // composed with the quotient by the ideal generated by phi(R).
            (void)prod;
        }
    // the formal statement tested: image of phi is an ideal of Phi
    std::vector<Vec> idgens;
    for (auto& x : g.r.elements()) idgens.push_back(g.ideal_elem(x));
    Mod pm(2, g.phi.scalar_level());
    ZpnMat idmat = ZpnMat::from_rows(pm, idgens);
    CHECK(is_ideal(g.phi, idmat));
}

TEST_CASE("recursion at level one: Phi(W_1(F_2)) = W_2(F_2) = Z/4") {
    auto rec = witt_recursion(FpAlgebra::prime_field(2), 1);
    CHECK(rec.phi.phi.size() == 4);
    CHECK(rec.is_isomorphism);
    CHECK(rec.kernel_order == 1);
    CHECK(rec.s.is_surjective());
}

TEST_CASE("recursion is an isomorphism for perfect bases") {
    // F_4 at n = 1 and n = 2
    auto f4 = FpAlgebra::quadratic_field(2);
    auto r1 = witt_recursion(f4, 1);
    CHECK(r1.is_isomorphism);
    CHECK(r1.phi.phi.size() == r1.wn1.ring.size());
    auto r2 = witt_recursion(f4, 2);
    CHECK(r2.is_isomorphism);
    CHECK(r2.phi.phi.size() == 64);  // |B|^3
    // F_2 x F_2 at n = 2
    auto f2 = FpAlgebra::prime_field(2);
    auto prod = f2.tensor_with(f2);
    auto r3 = witt_recursion(prod, 2);
    CHECK(r3.is_isomorphism);
}

TEST_CASE("recursion kernel for a non-reduced base equals the generator span") {
    // the two-sided comparison runs inside witt_recursion (throws on failure)
    auto b = FpAlgebra::dual_numbers(2);
    auto r1 = witt_recursion(b, 1);
    CHECK(r1.kernel_order == 1);  // at level one the construction is exact for every base
    auto r2 = witt_recursion(b, 2);
    CHECK(r2.kernel_order > 1);   // imperfection shows up from level two on
    CHECK(!r2.is_isomorphism);
}

TEST_CASE("Frobenius composed with the recursion is the power-law map") {
    for (auto b : {FpAlgebra::prime_field(2), FpAlgebra::quadratic_field(2),
                   FpAlgebra::dual_numbers(2)}) {
        auto rec = witt_recursion(b, 1);
        auto pe = p_elementary(projection_hom(rec.wn1, rec.wn));
        RingHom l = power_law_hom(rec.phi, pe);
        RingHom frob_s = rec.s.compose(frobenius_hom(rec.wn1));
        for (std::size_t i = 0; i < rec.phi.phi.rank(); ++i) {
            Vec gi = rec.phi.phi.zero();
            gi[i] = 1;
            CHECK(l.apply(gi) == frob_s.apply(gi));
        }
    }
}

TEST_CASE("power-law map of the mod-p quotient of Z/8") {
    // f = reduction Z/8 -> Z/4 is p-elementary; L([f(x)]_p) = x^p
    FiniteRing z8 = FiniteRing::modpn(2, 3);
    FiniteRing z4 = FiniteRing::modpn(2, 2);
    RingHom red(z8, z4, {Vec{1}});
    auto pe = p_elementary(red);
    auto phi = build_gamma_ring(z4);
    RingHom l = power_law_hom(phi, pe);
    for (std::uint64_t x = 0; x < 8; ++x) {
        Vec sym = phi.pure_symbol(Vec{x % 4});
        CHECK(l.apply(sym) == Vec{x * x % 8});
    }
    // L(phi(f(x))) = p * x
    for (std::uint64_t x = 0; x < 8; ++x) {
        Vec v = l.apply(phi.ideal_elem(Vec{x % 4}));
        CHECK(v == Vec{2 * x % 8});
    }
}

TEST_CASE("perfection balances the orders |Phi(W_n(B))| = |B|^{n+1}") {
    for (auto b : {FpAlgebra::prime_field(2), FpAlgebra::quadratic_field(2)}) {
        for (std::uint32_t n : {1u, 2u}) {
            auto rec = witt_recursion(b, n);
            std::uint64_t expect = 1;
            for (std::uint32_t i = 0; i <= n; ++i) expect *= b.size();
            CHECK(rec.phi.phi.size() == expect);
        }
    }
}

TEST_CASE("the construction is functorial in the ring") {
    // quotient F_2[t]/(t^2) -> F_2 induces Phi(B) -> Phi(F_2)
    auto b = FpAlgebra::dual_numbers(2);
    FiniteRing rb = FiniteRing::from_fp_algebra(b);
    FiniteRing r2 = FiniteRing::from_fp_algebra(FpAlgebra::prime_field(2));
    auto gb = build_gamma_ring(rb);
    auto g2 = build_gamma_ring(r2);
    RingHom quot(rb, r2, {Vec{1}, Vec{0}});
    RingHom induced = gamma_ring_map(gb, g2, quot);
    // compatible with pure symbols
    for (auto& x : rb.elements())
        CHECK(induced.apply(gb.pure_symbol(x)) == g2.pure_symbol(quot.apply(x)));
}

TEST_CASE("tower lifting: the example with R_n = W_n(B) returns Frobenius powers") {
    auto b = FpAlgebra::quadratic_field(2);
    auto w1 = witt_ring_table(WittRing(b, 1));
    auto w2 = witt_ring_table(WittRing(b, 2));
    auto w3 = witt_ring_table(WittRing(b, 3));
    LiftDiagram d = initial_diagram(b, w1.ring, RingHom::identity(w1.ring));
    d = lift_diagram(d, p_elementary(projection_hom(w2, w1)));
    // f_2 = Frobenius on W_2(B)
    RingHom fr2 = frobenius_hom(w2);
    for (std::size_t i = 0; i < w2.ring.rank(); ++i) {
        Vec gi = w2.ring.zero();
        gi[i] = 1;
        CHECK(d.maps[1].apply(gi) == fr2.apply(gi));
    }
    d = lift_diagram(d, p_elementary(projection_hom(w3, w2)));
    // f_3 = Frobenius^2 on W_3(B)
    RingHom fr3 = frobenius_hom(w3);
    RingHom fr3sq = fr3.compose(fr3);
    for (std::size_t i = 0; i < w3.ring.rank(); ++i) {
        Vec gi = w3.ring.zero();
        gi[i] = 1;
        CHECK(d.maps[2].apply(gi) == fr3sq.apply(gi));
    }
}

TEST_CASE("tower lifting recovers the canonical map on Z/p^i quotients") {
    // R_i = Z/2^i with the reductions; starting from the identity the tower
    // reproduces the canonical W_n(B) -> R ring map
    FiniteRing z8 = FiniteRing::modpn(2, 3);
    FiniteRing z4 = FiniteRing::modpn(2, 2);
    FiniteRing z2 = FiniteRing::modpn(2, 1);
    auto b = FpAlgebra::prime_field(2);
    auto w1 = witt_ring_table(WittRing(b, 1));
    RingHom f1(w1.ring, z2, {Vec{1}});
    LiftDiagram d = initial_diagram(b, z2, f1);
    d = lift_diagram(d, p_elementary(RingHom(z4, z2, {Vec{1}})));
    d = lift_diagram(d, p_elementary(RingHom(z8, z4, {Vec{1}})));
    auto cl = canonical_lift_hom(z8);
    auto w3 = witt_ring_table(WittRing(b, 3));
    for (auto& w : w3.wr.elements()) CHECK(d.maps[2].apply(w3.to_coords(w)) == cl.apply(w));
    // and for a non-trivial base ring: Z/4[t]/(t^2+t) over F_2[t]/(t^2+t)
    FiniteRing r = FiniteRing::modpn_univariate(2, 2, {0, 1, 1});
    auto clr = canonical_lift_hom(r);
    Mod m2(2, 2);
    ZpnMat prel(m2, 2, 2);
    prel.at(0, 0) = 2;
    prel.at(1, 1) = 2;
    auto q = quotient_ring(r, prel);
    auto wb1 = witt_ring_table(WittRing(clr.reduction, 1));
    // f_1 : B -> R/p via the basis correspondence of the canonical quotient
    std::vector<Vec> f1im;
    for (std::size_t i = 0; i < wb1.ring.rank(); ++i) {
        Vec gi = wb1.ring.zero();
        gi[i] = 1;
        f1im.push_back(q.projection.apply(clr.lift(gi)));
    }
    LiftDiagram dr = initial_diagram(clr.reduction, q.ring, RingHom(wb1.ring, q.ring, f1im));
    dr = lift_diagram(dr, p_elementary(q.projection));
    auto wb2 = witt_ring_table(WittRing(clr.reduction, 2));
    for (auto& w : wb2.wr.elements()) CHECK(dr.maps[1].apply(wb2.to_coords(w)) == clr.apply(w));
}
