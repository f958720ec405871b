#include <doctest.h>

#include <map>

#include "wittkit/witt.hpp"

using namespace wittkit;

namespace {

std::map<std::vector<std::uint32_t>, BigInt> poly_terms(const IntPoly& p) { return p.terms; }

// exhaustive ring-axiom check, guarded by size
void check_ring_axioms(const WittRing& w) {
    auto elems = w.elements();
    for (auto& u : elems) {
        CHECK(w.add(u, w.zero()) == u);
        CHECK(w.mul(u, w.one()) == u);
        CHECK(w.is_zero(w.add(u, w.neg(u))));
    }
    for (auto& u : elems)
        for (auto& v : elems) {
            CHECK(w.add(u, v) == w.add(v, u));
            CHECK(w.mul(u, v) == w.mul(v, u));
        }
    // associativity and distributivity on all triples if small, else sampled
    if (elems.size() <= 16) {
        for (auto& u : elems)
            for (auto& v : elems)
                for (auto& t : elems) {
                    CHECK(w.add(w.add(u, v), t) == w.add(u, w.add(v, t)));
                    CHECK(w.mul(w.mul(u, v), t) == w.mul(u, w.mul(v, t)));
                    CHECK(w.mul(u, w.add(v, t)) == w.add(w.mul(u, v), w.mul(u, t)));
                }
    } else {
        Rng rng(42);
        for (int i = 0; i < 300; ++i) {
            auto& u = elems[rng.below(elems.size())];
            auto& v = elems[rng.below(elems.size())];
            auto& t = elems[rng.below(elems.size())];
            CHECK(w.add(w.add(u, v), t) == w.add(u, w.add(v, t)));
            CHECK(w.mul(w.mul(u, v), t) == w.mul(u, w.mul(v, t)));
            CHECK(w.mul(u, w.add(v, t)) == w.add(w.mul(u, v), w.mul(u, t)));
        }
    }
}

}  // namespace

TEST_CASE("structure polynomials at small (p, n) match the ghost recursion") {
    // S_0 = x_0 + y_0 and P_0 = x_0 y_0 for any p
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const auto& wp = witt_polynomials(p, 1);
        IntPoly s0 = IntPoly::variable(2, 0).add(IntPoly::variable(2, 1));
        IntPoly p0 = IntPoly::variable(2, 0).mul(IntPoly::variable(2, 1));
        CHECK(poly_terms(wp.sum[0]) == poly_terms(s0));
        CHECK(poly_terms(wp.prod[0]) == poly_terms(p0));
    }
    // p = 2, n = 2: S_1 = x_1 + y_1 - x_0 y_0, P_1 = x_0^2 y_1 + x_1 y_0^2 + 2 x_1 y_1
    const auto& wp = witt_polynomials(2, 2);
    auto x0 = IntPoly::variable(4, 0), x1 = IntPoly::variable(4, 1);
    auto y0 = IntPoly::variable(4, 2), y1 = IntPoly::variable(4, 3);
    IntPoly s1 = x1.add(y1).sub(x0.mul(y0));
    CHECK(poly_terms(wp.sum[1]) == poly_terms(s1));
    IntPoly p1 = x0.mul(x0).mul(y1).add(x1.mul(y0).mul(y0)).add(x1.mul(y1).scale(2));
    CHECK(poly_terms(wp.prod[1]) == poly_terms(p1));
    CHECK(wp.isobaric_checked);
    // the constructor verifies the ghost identities symbolically; (3, 3) too
    CHECK(witt_polynomials(3, 3).isobaric_checked);
}

TEST_CASE("W_2(F_2): small identities and transport to Z/4") {
    WittRing w(FpAlgebra::prime_field(2), 2);
    WittVec one = w.one();
    CHECK(w.add(one, one) == WittVec{Vec{0}, Vec{1}});  // (1,0)+(1,0) = (0,1)
    for (auto& u : w.elements()) CHECK(w.mul(one, u) == u);
    // transport along (a_0, a_1) -> lift(a_0) + 2 lift(a_1) mod 4; oracle over all 16 pairs
    auto to_z4 = [](const WittVec& u) { return (u[0][0] + 2 * u[1][0]) % 4; };
    for (auto& u : w.elements())
        for (auto& v : w.elements()) {
            CHECK(to_z4(w.add(u, v)) == (to_z4(u) + to_z4(v)) % 4);
            CHECK(to_z4(w.mul(u, v)) == (to_z4(u) * to_z4(v)) % 4);
        }
}

TEST_CASE("ring axioms hold exhaustively on the test grid") {
    check_ring_axioms(WittRing(FpAlgebra::prime_field(2), 2));
    check_ring_axioms(WittRing(FpAlgebra::prime_field(2), 3));
    check_ring_axioms(WittRing(FpAlgebra::quadratic_field(2), 2));
    check_ring_axioms(WittRing(FpAlgebra::univariate_quotient(2, {0, 1, 1}), 2));
    check_ring_axioms(WittRing(FpAlgebra::prime_field(3), 2));
    check_ring_axioms(WittRing(FpAlgebra::univariate_quotient(3, {0, 1, 1}), 2));
}

TEST_CASE("teichmuller is multiplicative and splits the projection") {
    auto f4 = FpAlgebra::quadratic_field(2);
    WittRing w(f4, 2);
    for (auto& x : f4.elements())
        for (auto& y : f4.elements())
            CHECK(w.mul(w.teichmuller(x), w.teichmuller(y)) == w.teichmuller(f4.mul(x, y)));
    for (auto& x : f4.elements()) {
        CHECK(project(w, w.teichmuller(x), 1) == WittVec{x});
    }
}

TEST_CASE("injection identities from the ghost construction") {
    // i(x) i(y) = p i(xy) in W_3 over F_2[t]/(t^2+t)
    auto a = FpAlgebra::univariate_quotient(2, {0, 1, 1});
    WittRing w3(a, 3);
    WittRing w2(a, 2);
    for (auto& x : w2.elements())
        for (auto& y : w2.elements()) {
            WittVec lhs = w3.mul(inject(w3, x), inject(w3, y));
            WittVec rhs = inject(w3, w2.scale(2, w2.mul(x, y)));
            CHECK(lhs == rhs);
        }
    // p tau_{n+1}(x) = i(tau_n(x^p)) for p = 3, n = 1, A = F_3[t]/(t^2+t)
    auto b = FpAlgebra::univariate_quotient(3, {0, 1, 1});
    WittRing v2(b, 2);
    WittRing v1(b, 1);
    for (auto& x : b.elements()) {
        WittVec lhs = v2.scale(3, v2.teichmuller(x));
        WittVec rhs = inject(v2, v1.teichmuller(b.pow(x, 3)));
        CHECK(lhs == rhs);
    }
    // the injection is additive and spans ker(projection)
    for (auto& x : w2.elements())
        for (auto& y : w2.elements())
            CHECK(w3.add(inject(w3, x), inject(w3, y)) == inject(w3, w2.add(x, y)));
}

TEST_CASE("exact sequence 0 -> W_{n-m} -> W_n -> W_m -> 0 elementwise") {
    auto a = FpAlgebra::prime_field(2);
    WittRing w3(a, 3), w2(a, 2), w1(a, 1);
    // kernel of project(.,1) equals image of inject from W_2
    std::map<std::uint64_t, bool> ker, img;
    for (auto& u : w3.elements())
        if (w1.is_zero(project(w3, u, 1))) ker[w3.index_of(u)] = true;
    for (auto& x : w2.elements()) img[w3.index_of(inject(w3, x))] = true;
    CHECK(ker == img);
    // surjectivity of the projection
    std::map<std::uint64_t, bool> hit;
    for (auto& u : w3.elements()) hit[w2.index_of(project(w3, u, 2))] = true;
    CHECK(hit.size() == w2.size());
}

TEST_CASE("multiplication-by-p lifting map of W_2 equals Frobenius on the base") {
    // p * (any lift of s) = (0, s^p) in W_2(A); the connecting map of
    // 0 -> Frob_*(A) -> W_2(A) -> A -> 0 with f = multiplication by p
    for (auto a : {FpAlgebra::prime_field(2), FpAlgebra::quadratic_field(2),
                   FpAlgebra::univariate_quotient(2, {0, 1, 1}), FpAlgebra::prime_field(3)}) {
        WittRing w2(a, 2);
        for (auto& u : w2.elements()) {
            WittVec pu = w2.scale(a.p, u);
            CHECK(pu[0] == a.zero());
            CHECK(pu[1] == a.pow(u[0], a.p));  // depends only on s = u[0]; equals s^p
        }
    }
}

TEST_CASE("witt log and exp are mutually inverse homomorphisms for odd p") {
    auto f3 = FpAlgebra::prime_field(3);
    // log(1) = 0
    {
        WittRing w2(f3, 2);
        WittRing w1(f3, 1);
        CHECK(w1.is_zero(witt_log(w2, w2.one())));
        // p=3, n=1: log(1 - i(x)) = x  (higher terms vanish)
        for (auto& x : f3.elements()) {
            WittVec u = w2.sub(w2.one(), inject(w2, WittVec{x}));
            CHECK(witt_log(w2, u) == WittVec{x});
        }
    }
    // p=3, n=2 over F_3: exp(log(u)) = u on all of 1 + i(W_2), and
    // log(uv) = log(u) + log(v); 81 pairs checked
    {
        WittRing w3(f3, 3);
        WittRing w2(f3, 2);
        for (auto& t : w2.elements()) {
            WittVec u = w3.sub(w3.one(), inject(w3, t));
            CHECK(witt_exp(w3, witt_log(w3, u)) == u);
            CHECK(witt_log(w3, witt_exp(w3, t)) == t);
        }
        for (auto& t1 : w2.elements())
            for (auto& t2 : w2.elements()) {
                WittVec u = w3.sub(w3.one(), inject(w3, t1));
                WittVec v = w3.sub(w3.one(), inject(w3, t2));
                CHECK(witt_log(w3, w3.mul(u, v)) == w2.add(witt_log(w3, u), witt_log(w3, v)));
            }
    }
    // p = 2 rejected with an explicit message
    WittRing w2f2(FpAlgebra::prime_field(2), 2);
    CHECK_THROWS_AS((void)witt_log(w2f2, w2f2.one()), std::invalid_argument);
}

TEST_CASE("canonical map W_n(R/p) -> R") {
    // R = Z/4: f_2(tau(1)) = 1, f_2((0,1)) = 2, an isomorphism onto Z/4
    {
        auto cl = canonical_lift_hom(FiniteRing::modpn(2, 2));
        CHECK(cl.n == 2);
        CHECK(cl.apply(cl.witt.one()) == Vec{1});
        WittVec v01 = cl.witt.zero();
        v01[1] = cl.reduction.unit;
        CHECK(cl.apply(v01) == Vec{2});
        // bijective here: 4 distinct images
        std::map<Vec, bool> imgs;
        for (auto& u : cl.witt.elements()) imgs[cl.apply(u)] = true;
        CHECK(imgs.size() == 4);
    }
    // R = Z/4[t]/(t^2+t): f_2(tau(tbar)) = t^2
    {
        FiniteRing r = FiniteRing::modpn_univariate(2, 2, {0, 1, 1});  // t^2 = -t = 3t
        auto cl = canonical_lift_hom(r);
        // find the basis element of B reducing from t
        Vec tbar = cl.reduction.zero();
        // lift_of_basis[i] lifts basis b_i; find i with lift ~ t + 2Z
        for (std::size_t i = 0; i < cl.lift_of_basis.size(); ++i) {
            Vec l = cl.lift_of_basis[i];
            if (l[1] % 2 == 1 && l[0] % 2 == 0) tbar[i] = 1;
        }
        REQUIRE(!cl.reduction.is_zero(tbar));
        Vec img = cl.apply(cl.witt.teichmuller(tbar));
        Vec t{0, 1};
        CHECK(img == r.mul(t, t));
    }
    // n = 1: the identity on B
    {
        FiniteRing r = FiniteRing::from_fp_algebra(FpAlgebra::quadratic_field(2));
        auto cl = canonical_lift_hom(r);
        CHECK(cl.n == 1);
        for (auto& x : cl.reduction.elements())
            CHECK(cl.apply(cl.witt.teichmuller(x)) == cl.lift(x));
    }
}

TEST_CASE("witt vectors of a localization agree with localizing the witt ring") {
    // f = 1: both sides the whole ring
    {
        auto a = FpAlgebra::quadratic_field(2);
        auto wl = witt_localization(a, a.unit, 2);
        CHECK(wl.localized_witt.size() == wl.source.size());
        CHECK(wl.witt_of_local.size() == wl.source.size());
    }
    // A = F_2 x F_2, f = (1,0), n = 2: both sides Z/4
    {
        auto f2 = FpAlgebra::prime_field(2);
        auto a = f2.tensor_with(f2);
        auto wl = witt_localization(a, Vec{1, 0}, 2);
        CHECK(wl.localized_witt.size() == 4);
        CHECK(wl.witt_of_local.size() == 4);
        CHECK(wl.localized_witt.exps == std::vector<std::uint32_t>{2});  // cyclic Z/4
    }
    // A = F_2[t]/(t^2), f = t nilpotent: both sides the zero ring
    {
        auto a = FpAlgebra::dual_numbers(2);
        auto wl = witt_localization(a, Vec{0, 1}, 2);
        CHECK(wl.localized_witt.size() == 1);
    }
}

TEST_CASE("witt ring tables decompose the additive group correctly") {
    // W_2(F_2[t]/(t^2)) is Z/4 + Z/2 + Z/2 of order 16
    WittRing w(FpAlgebra::dual_numbers(2), 2);
    auto t = witt_ring_table(w);
    CHECK(t.ring.size() == 16);
    std::vector<std::uint32_t> exps = t.ring.exps;
    std::sort(exps.rbegin(), exps.rend());
    CHECK(exps == std::vector<std::uint32_t>{2, 1, 1});
    // conversions are mutually inverse
    for (auto& u : w.elements()) CHECK(t.from_coords(t.to_coords(u)) == u);
}
