#include <doctest.h>

#include <algorithm>

#include "wittkit/finring.hpp"
#include "wittkit/fpalg.hpp"

using namespace wittkit;

TEST_CASE("decomposition of Z/4 x Z/2 given as an enumerated group") {
    // elements 0..7 = (a mod 4, b mod 2) with index a + 4b
    auto add = [](std::size_t x, std::size_t y) {
        std::size_t a = (x % 4 + y % 4) % 4, b = (x / 4 + y / 4) % 2;
        return a + 4 * b;
    };
    auto g = decompose_abelian_p_group(2, 8, add, 0);
    std::vector<std::uint32_t> exps = g.exps;
    std::sort(exps.rbegin(), exps.rend());
    CHECK(exps == std::vector<std::uint32_t>{2, 1});
    // coords are a bijection
    CHECK(g.index_of.size() == 8);
}

TEST_CASE("finite ring from univariate presentation and quotients") {
    // Z/4[t]/(t^2+t)
    FiniteRing r = FiniteRing::modpn_univariate(2, 2, {0, 1, 1});
    CHECK(r.size() == 16);
    CHECK(r.characteristic() == 4);
    Vec t{0, 1};
    CHECK(r.mul(t, t) == r.neg(t));  // t^2 = -t

    // quotient by the ideal (2): F_2[t]/(t^2+t)
    Mod m(2, 2);
    ZpnMat ideal(m, 1, 2);
    ideal.at(0, 0) = 2;
    ZpnMat full(m, 2, 2);
    full.at(0, 0) = 2;
    full.at(1, 1) = 2;
    CHECK(is_ideal(r, full));
    auto q = quotient_ring(r, full);
    CHECK(q.ring.size() == 4);
    CHECK(q.ring.characteristic() == 2);
    // projection is a surjective ring hom
    CHECK(q.projection.is_surjective());
}

TEST_CASE("ring homs verify their axioms") {
    FiniteRing z4 = FiniteRing::modpn(2, 2);
    FiniteRing z2 = FiniteRing::modpn(2, 1);
    RingHom red(z4, z2, {Vec{1}});
    CHECK(red.is_surjective());
    CHECK(!red.is_injective());
    // x -> 2x is not a ring hom (unit not preserved)
    CHECK_THROWS(RingHom(z4, z4, {Vec{2}}));
    // kernel of the reduction is 2Z/4
    ZpnMat k = red.kernel_span(2);
    CHECK(k.rows == 1);
    CHECK(k.at(0, 0) == 2);
}

TEST_CASE("galois ring Z/4[x]/(x^2+x+1)") {
    FiniteRing gr = FiniteRing::modpn_univariate(2, 2, {1, 1, 1});
    CHECK(gr.size() == 16);
    CHECK(gr.characteristic() == 4);
    // reduction mod 2 is F_4: 4 elements, every nonzero element of the
    // quotient invertible is not checked here; just sizes
    Mod m(2, 2);
    ZpnMat ideal(m, 2, 2);
    ideal.at(0, 0) = 2;
    ideal.at(1, 1) = 2;
    auto q = quotient_ring(gr, ideal);
    CHECK(q.ring.size() == 4);
}
