#include <doctest.h>

#include "wittkit/deform.hpp"

using namespace wittkit;

namespace {

std::vector<FpAlgebra> reduced_corpus() {
    return {FpAlgebra::prime_field(2), FpAlgebra::quadratic_field(2),
            FpAlgebra::univariate_quotient(2, {0, 1, 1}),          // F_2[t]/(t^2+t)
            FpAlgebra::univariate_quotient(3, {0, 2, 0, 1})};      // F_3[t]/(t^3-t)
}

std::vector<FiniteRing> flat_corpus() {
    return {FiniteRing::modpn(2, 2),                               // Z/4
            FiniteRing::modpn_univariate(2, 2, {1, 1, 1}),         // GR(4,2) over F_4
            FiniteRing::modpn_univariate(2, 2, {0, 1, 1}),         // Z/4[t]/(t^2+t)
            FiniteRing::modpn_univariate(3, 2, {0, 8, 0, 1})};     // Z/9[t]/(t^3-t)
}

}  // namespace

TEST_CASE("the canonical witt extension has Frobenius connecting map") {
    for (auto& a : reduced_corpus()) {
        auto c = canonical_extensions(a);
        CHECK(kappa(c.witt2) == c.frob_map);  // elementwise on the basis
        // split extensions have vanishing connecting map
        auto s = split_extension(a, c.frob_push);
        ZpnMat k = kappa(s);
        for (auto v : k.a) CHECK(v == 0);
    }
}

TEST_CASE("non-reduced bases are rejected with the hypothesis message") {
    auto bad = FpAlgebra::univariate_quotient(2, {0, 1, 0, 1});  // t^3 + t = t(t+1)^2
    CHECK(!is_reduced(bad));
    CHECK_THROWS_WITH_AS((void)canonical_extensions(bad),
                         doctest::Contains("reduced"), std::invalid_argument);
}

TEST_CASE("every finite reduced F_p-algebra here is perfect, so the cokernel vanishes") {
    // finite reduced F_p-algebras are products of finite fields; Frobenius
    // is bijective on them, hence B^1 = 0 on the whole corpus
    for (auto& a : reduced_corpus()) {
        auto c = canonical_extensions(a);
        CHECK(c.cokernel.dim == 0);
        CHECK(frobenius(a).is_bijective());
    }
}

TEST_CASE("flat lift of Z/4-type rings: kappa is the identity") {
    for (auto& b : flat_corpus()) {
        auto e = flat_lift_extension(b);
        CHECK(is_flat_lift(e));
        CHECK(total_is_free_over_zp2(e));
        CHECK(kappa(e) == ZpnMat::identity(Mod(e.base.p, 1), e.base.dim));
    }
    // the two flatness criteria agree, and differ on the W_2 side when
    // Frobenius moves the base: over F_4 the witt extension has kappa = Frob
    // on a twisted kernel, so it is not a flat-lift object as presented
    auto a = FpAlgebra::quadratic_field(2);
    auto c = canonical_extensions(a);
    CHECK(total_is_free_over_zp2(c.witt2));  // free total...
    CHECK(!is_flat_lift(c.witt2));           // ...but the kernel marking differs
}

TEST_CASE("baer calculus: inverse, neutral element, additivity of kappa") {
    auto a = FpAlgebra::univariate_quotient(2, {0, 1, 1});
    auto c = canonical_extensions(a);
    // e - e is split
    auto diff = baer_diff(c.witt2, c.witt2);
    auto split = split_extension(a, c.frob_push);
    CHECK(find_extension_iso(diff, split).has_value());
    // kappa(e1 - e2) = kappa(e1) - kappa(e2): 2 Frob = 0 at p = 2
    ZpnMat k = kappa(diff);
    for (auto v : k.a) CHECK(v == 0);
    // split + e = e
    auto sum = baer_sum(split, c.witt2);
    CHECK(find_extension_iso(sum, c.witt2).has_value());
    // kappa additivity on the corpus pairs
    for (auto& alg : reduced_corpus()) {
        auto cc = canonical_extensions(alg);
        auto twice = baer_sum(cc.witt2, cc.witt2);
        ZpnMat k2 = kappa(twice);
        Mod fp(alg.p, 1);
        ZpnMat expect(fp, alg.dim, alg.dim);
        for (std::size_t i = 0; i < expect.a.size(); ++i)
            expect.a[i] = 2 * cc.frob_map.a[i] % alg.p;
        CHECK(k2 == expect);
    }
}

TEST_CASE("pushforward along the identity and pullback along Frobenius") {
    auto a = FpAlgebra::univariate_quotient(2, {0, 1, 1});
    auto c = canonical_extensions(a);
    ZpnMat id = ZpnMat::identity(Mod(2, 1), a.dim);
    auto same = pushforward_ext(c.witt2, id, c.frob_push);
    CHECK(find_extension_iso(same, c.witt2).has_value());

    // Frob^*(flat lift) is the witt extension (as extensions by Frob_*(A))
    auto flat = flat_lift_extension(FiniteRing::modpn_univariate(2, 2, {0, 1, 1}));
    // align the base algebra with the one used by the canonical data
    REQUIRE(flat.base.dim == a.dim);
    auto pulled = pullback_ext(flat, frobenius(a));
    CHECK(pulled.total.size() == c.witt2.total.size());
    auto iso = find_extension_iso(pulled, c.witt2);
    CHECK(iso.has_value());
}

TEST_CASE("round trips of the flat-lift equivalence on the corpus") {
    for (auto& b : flat_corpus()) {
        auto e = flat_lift_extension(b);
        auto c = canonical_extensions(e.base);
        auto marked = to_marked(c, e);
        // the marked object is killed by p with zero connecting map
        CHECK(marked.f.total.characteristic() == e.base.p);
        auto back = from_marked(c, marked.f);
        CHECK(is_flat_lift(back));
        CHECK(find_extension_iso(back, e).has_value());
    }
}

TEST_CASE("round trip through a marked extension built from the split datum") {
    // Psi(Phi(e)) = e and Phi(Psi(F)) = F on the trivial marked object
    auto a = FpAlgebra::prime_field(2);
    auto c = canonical_extensions(a);
    auto split = split_extension(a, c.frob_push);
    auto e = from_marked(c, split);
    CHECK(is_flat_lift(e));
    auto again = to_marked(c, e);
    CHECK(find_extension_iso(again.f, split).has_value());
}

TEST_CASE("frobenius lifts are found on the corpus") {
    // perfect base: W_2(A) carries the componentwise Frobenius
    auto f4 = FpAlgebra::quadratic_field(2);
    auto e = witt2_as_flat_lift(f4);
    auto lift = detect_frobenius_lift(e);
    CHECK(lift.has_value());

    // A = F_2, total Z/4: a lift exists (the identity reduces to Frobenius);
    // oracle: exhaustive search over all 4^4 self-maps ofiota Z/4
    auto z4 = flat_lift_extension(FiniteRing::modpn(2, 2));
    auto l2 = detect_frobenius_lift(z4);
    CHECK(l2.has_value());
    {
        bool found = false;
        // maps Z/4 -> Z/4 determined by image of 1: ring endos need 1 -> 1;
        // brute force all set maps and filter ring endomorphisms lifting x->x^2
        for (std::uint64_t im0 = 0; im0 < 4 && !found; ++im0)
            for (std::uint64_t im1 = 0; im1 < 4 && !found; ++im1)
                for (std::uint64_t im2 = 0; im2 < 4 && !found; ++im2)
                    for (std::uint64_t im3 = 0; im3 < 4 && !found; ++im3) {
                        Vec f{im0, im1, im2, im3};  // value at 0,1,2,3
                        auto ok = [&] {
                            for (std::uint64_t x = 0; x < 4; ++x)
                                for (std::uint64_t y = 0; y < 4; ++y) {
                                    if (f[(x + y) % 4] != (f[x] + f[y]) % 4) return false;
                                    if (f[x * y % 4] != f[x] * f[y] % 4) return false;
                                }
                            if (f[1] != 1) return false;
                            for (std::uint64_t x = 0; x < 4; ++x)
                                if (f[x] % 2 != x * x % 2) return false;
                            return true;
                        }();
                        if (ok) found = true;
                    }
        CHECK(found == l2.has_value());
    }

    // every corpus algebra is Frobenius-split here, so lifts always exist
    for (auto& b : flat_corpus()) {
        auto ee = flat_lift_extension(b);
        CHECK(detect_frobenius_lift(ee).has_value());
    }
}

TEST_CASE("frobenius-split lifting produces flat lifts; perfect bases give W_2") {
    for (auto& a : reduced_corpus()) {
        auto c = canonical_extensions(a);
        auto s = find_frobenius_splitting(c);
        REQUIRE(s.has_value());  // B^1 = 0 at desk scale: trivially split
        auto lift = lift_from_splitting(c, *s);
        CHECK(is_flat_lift(lift));
        CHECK(total_is_free_over_zp2(lift));
        // perfect input: the lift is the witt lift
        auto w2flat = witt2_as_flat_lift(a);
        CHECK(find_extension_iso(lift, w2flat).has_value());
    }
}

TEST_CASE("bundle extension of a free module: sizes, cocycle, connecting map") {
    auto f2 = FpAlgebra::prime_field(2);
    auto b = bundle_w2_extension(f2, 2);
    CHECK(b.v_size * b.sym_size == 32);  // |Sym^2| * |V| = 8 * 4
    // s_V(x+y) - s_V(x) - s_V(y) = i_V(x y) at p = 2
    for (std::uint64_t xi = 0; xi < b.v_size; ++xi)
        for (std::uint64_t yi = 0; yi < b.v_size; ++yi) {
            auto [x, s0] = b.unindex(xi);
            auto [y, t0] = b.unindex(yi);
            std::uint64_t lhs = b.add(b.section_of(x), b.section_of(y));
            std::vector<Vec> xy(2);
            for (int k = 0; k < 2; ++k) xy[k] = f2.add(x[k], y[k]);
            std::uint64_t rhs = b.add(b.section_of(xy), b.inject_sym(b.cocycle(x, y)));
            CHECK(lhs == rhs);
        }
    // kappa(x) = x^p
    for (std::uint64_t xi = 0; xi < b.v_size; ++xi) {
        auto [x, s0] = b.unindex(xi);
        CHECK(b.kappa_of(x) == b.sym_power(x));
    }
    // associativity of the cocycle addition (exhaustive at this size)
    std::uint64_t n = b.v_size * b.sym_size;
    Rng rng(5);
    for (int trial = 0; trial < 4000; ++trial) {
        std::uint64_t x = rng.below(n), y = rng.below(n), z = rng.below(n);
        CHECK(b.add(b.add(x, y), z) == b.add(x, b.add(y, z)));
    }
    // W_2(A)-action: associativity through the ring structure
    auto w2elems = b.w2.elements();
    for (int trial = 0; trial < 800; ++trial) {
        const Vec& u = w2elems[rng.below(w2elems.size())];
        const Vec& v = w2elems[rng.below(w2elems.size())];
        std::uint64_t x = rng.below(n);
        CHECK(b.act(b.w2.mul(u, v), x) == b.act(u, b.act(v, x)));
        CHECK(b.act(b.w2.add(u, v), x) == b.add(b.act(u, x), b.act(v, x)));
    }
}

TEST_CASE("pushforward of the bundle extension matches the inverse frobenius-kernel extension") {
    CHECK(bundle_pushforward_identity(bundle_w2_extension(FpAlgebra::prime_field(2), 1)));
    CHECK(bundle_pushforward_identity(bundle_w2_extension(FpAlgebra::prime_field(2), 2)));
    CHECK(bundle_pushforward_identity(bundle_w2_extension(FpAlgebra::prime_field(3), 1)));
}

TEST_CASE("free W_2-module lifts are recovered from their marked extensions") {
    CHECK(bundle_lift_round_trip(FpAlgebra::prime_field(2), 1));  // unique lift Z/4
    CHECK(bundle_lift_round_trip(FpAlgebra::prime_field(2), 2));
    CHECK(bundle_lift_round_trip(FpAlgebra::univariate_quotient(2, {0, 1, 1}), 2));
}
