// Acceptance suite: one exact check per criterion, one pass/fail line each.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "wittkit/deform.hpp"
#include "wittkit/projspace.hpp"
#include "wittkit/report.hpp"
#include "wittkit/witt.hpp"
#include "wittkit/wittrec.hpp"

using namespace wittkit;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<std::string()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_seconds) {
        ok = false;
        detail += " [runtime " + std::to_string(secs) + "s exceeds the budget of " +
                  std::to_string(budget_seconds) + "s]";
    }
    if (!ok) ++failures;
    std::printf("%s criterion-%d %s (%.2fs): %s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                secs, detail.c_str());
    std::fflush(stdout);
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

std::string check_ring_axioms(const FpAlgebra& a, std::uint32_t n) {
    WittRing w(a, n);
    std::uint64_t size = w.size();
    require(size * size * size <= enumeration_guard(), "guard too small for exhaustive triples");
    auto elems = w.elements();
    // tabulate both operations once, then check the laws by lookups
    std::vector<std::uint32_t> add_tab(size * size), mul_tab(size * size);
    for (std::uint64_t i = 0; i < size; ++i)
        for (std::uint64_t j = 0; j <= i; ++j) {
            std::uint32_t s = static_cast<std::uint32_t>(w.index_of(w.add(elems[i], elems[j])));
            std::uint32_t m = static_cast<std::uint32_t>(w.index_of(w.mul(elems[i], elems[j])));
            add_tab[i * size + j] = s;
            std::uint32_t s2 = static_cast<std::uint32_t>(w.index_of(w.add(elems[j], elems[i])));
            std::uint32_t m2 = static_cast<std::uint32_t>(w.index_of(w.mul(elems[j], elems[i])));
            require(s == s2, "addition not commutative");
            require(m == m2, "multiplication not commutative");
            add_tab[j * size + i] = s;
            mul_tab[i * size + j] = m;
            mul_tab[j * size + i] = m;
        }
    for (std::uint64_t u = 0; u < size; ++u)
        for (std::uint64_t v = 0; v < size; ++v)
            for (std::uint64_t t = 0; t < size; ++t) {
                require(add_tab[add_tab[u * size + v] * size + t] ==
                            add_tab[u * size + add_tab[v * size + t]],
                        "addition not associative");
                require(mul_tab[mul_tab[u * size + v] * size + t] ==
                            mul_tab[u * size + mul_tab[v * size + t]],
                        "multiplication not associative");
                require(mul_tab[u * size + add_tab[v * size + t]] ==
                            add_tab[mul_tab[u * size + v] * size + mul_tab[u * size + t]],
                        "distributivity fails");
            }
    // the two injection identities inside W_{n+1}
    WittRing big(a, n + 1);
    for (auto& x : elems)
        for (auto& y : elems)
            require(big.mul(inject(big, x), inject(big, y)) ==
                        inject(big, w.scale(a.p, w.mul(x, y))),
                    "shift product identity fails");
    for (auto& x : a.elements())
        require(big.scale(a.p, big.teichmuller(x)) == inject(big, w.teichmuller(a.pow(x, a.p))),
                "multiplicative lift identity fails");
    return std::to_string(size) + " elements";
}

}  // namespace

int main() {
    criterion(1, "witt-ring-axioms", 30.0, [] {
        std::uint64_t total = 0;
        struct Case {
            std::uint32_t p, n;
            FpAlgebra a;
        };
        std::vector<Case> cases;
        cases.push_back({2, 2, FpAlgebra::prime_field(2)});
        cases.push_back({2, 2, FpAlgebra::quadratic_field(2)});
        cases.push_back({2, 2, FpAlgebra::univariate_quotient(2, {0, 1, 1})});
        cases.push_back({2, 3, FpAlgebra::prime_field(2)});
        cases.push_back({2, 3, FpAlgebra::quadratic_field(2)});
        cases.push_back({2, 3, FpAlgebra::univariate_quotient(2, {0, 1, 1})});
        cases.push_back({3, 2, FpAlgebra::prime_field(3)});
        cases.push_back({3, 2, FpAlgebra::quadratic_field(3)});
        cases.push_back({3, 2, FpAlgebra::univariate_quotient(3, {0, 1, 1})});
        for (auto& c : cases) {
            check_ring_axioms(c.a, c.n);
            total += WittRing(c.a, c.n).size();
        }
        return "9 algebra/length pairs, exhaustive, " + std::to_string(total) +
               " elements in total";
    });

    criterion(2, "divided-power-recursion", 60.0, [] {
        // perfect bases: bijective at both levels
        for (auto b : {FpAlgebra::prime_field(2), FpAlgebra::quadratic_field(2),
                       FpAlgebra::prime_field(2).tensor_with(FpAlgebra::prime_field(2))}) {
            for (std::uint32_t n : {1u, 2u}) {
                auto rec = witt_recursion(b, n);
                require(rec.is_isomorphism, "perfect base but non-trivial kernel");
            }
        }
        // non-perfect base: the kernel equals the generator span, two-sided
        // and exhaustively (verified inside witt_recursion; it throws
        // otherwise); the map is an isomorphism at level 1 and not beyond
        auto dual = FpAlgebra::dual_numbers(2);
        auto r1 = witt_recursion(dual, 1);
        require(r1.kernel_order == 1, "level-1 recursion should be exact for every base");
        auto r2 = witt_recursion(dual, 2);
        require(r2.kernel_order > 1, "imperfect base must have a kernel at level 2");
        // the tower example: starting from the identity under the truncation
        // tower returns Frobenius powers
        auto b = FpAlgebra::quadratic_field(2);
        auto w1 = witt_ring_table(WittRing(b, 1));
        auto w2 = witt_ring_table(WittRing(b, 2));
        auto w3 = witt_ring_table(WittRing(b, 3));
        auto proj = [](const WittRingTable& big, const WittRingTable& small) {
            std::vector<Vec> im;
            for (std::size_t i = 0; i < big.ring.rank(); ++i) {
                Vec gi = big.ring.zero();
                gi[i] = 1;
                im.push_back(small.to_coords(project(big.wr, big.from_coords(gi), small.wr.n)));
            }
            return RingHom(big.ring, small.ring, std::move(im));
        };
        LiftDiagram d = initial_diagram(b, w1.ring, RingHom::identity(w1.ring));
        d = lift_diagram(d, p_elementary(proj(w2, w1)));
        d = lift_diagram(d, p_elementary(proj(w3, w2)));
        for (auto& w : w3.wr.elements()) {
            WittVec f2 = w3.wr.frobenius(w3.wr.frobenius(w));
            require(d.maps[2].apply(w3.to_coords(w)) == w3.to_coords(f2),
                    "tower does not return the Frobenius square");
        }
        // iterated lifting reproduces the canonical map onto Z/8
        FiniteRing z8 = FiniteRing::modpn(2, 3);
        FiniteRing z4 = FiniteRing::modpn(2, 2);
        FiniteRing z2 = FiniteRing::modpn(2, 1);
        auto bp = FpAlgebra::prime_field(2);
        auto v1 = witt_ring_table(WittRing(bp, 1));
        LiftDiagram t = initial_diagram(bp, z2, RingHom(v1.ring, z2, {Vec{1}}));
        t = lift_diagram(t, p_elementary(RingHom(z4, z2, {Vec{1}})));
        t = lift_diagram(t, p_elementary(RingHom(z8, z4, {Vec{1}})));
        auto cl = canonical_lift_hom(z8);
        auto v3 = witt_ring_table(WittRing(bp, 3));
        for (auto& w : v3.wr.elements())
            require(t.maps[2].apply(v3.to_coords(w)) == cl.apply(w),
                    "tower does not reproduce the canonical ring map");
        return "recursion exact where claimed; towers reproduce Frobenius powers and the "
               "canonical map";
    });

    criterion(3, "divided-powers", 30.0, [] {
        // invariant factors of the quadratic divided power of a 2-dim space
        Mod z4(2, 2);
        ZpnMat rel(z4, 2, 2);
        rel.at(0, 0) = 2;
        rel.at(1, 1) = 2;
        auto g = gamma_module(z4, ZpnModule(z4, 2, rel), 2);
        require(g.module.size() == 32, "order of the divided square is wrong");
        require(invariant_factors(g.module) == std::vector<std::uint32_t>{2, 2, 1},
                "invariant factors differ from (4,4,2)");
        // reduced generator scheme against full enumeration on the corpus
        struct M {
            Mod mod;
            std::size_t amb;
            std::vector<Vec> rel;
            std::uint32_t d;
        };
        Mod z8(2, 3), z9(3, 2);
        std::vector<M> corpus = {{z4, 2, {{2, 0}, {0, 2}}, 2},
                                 {z4, 1, {{2}}, 2},
                                 {z4, 2, {{2, 2}}, 2},
                                 {z8, 2, {{2, 0}, {0, 4}}, 2},
                                 {z9, 2, {{3, 0}, {0, 3}}, 3},
                                 {z9, 1, {{3}}, 3}};
        for (auto& m : corpus) {
            ZpnModule mod_m(m.mod, m.amb, ZpnMat::from_rows(m.mod, m.rel));
            auto full = gamma_module(m.mod, mod_m, m.d, false);
            auto red = gamma_module(m.mod, mod_m, m.d, true);
            require(full.module.rel == red.module.rel,
                    "reduced generator scheme differs from full enumeration");
        }
        // exact sequences and the induced comparison on every small bundle
        for (auto a : {FpAlgebra::prime_field(2), FpAlgebra::prime_field(3),
                       FpAlgebra::quadratic_field(2)}) {
            for (std::uint32_t rank = 1; rank <= 3; ++rank) {
                auto ops = bundle_ops(a, rank);
                AMat zl(a, 0, rank), zr(a, ops.nonpure.size(), 0);
                require(amat_exact({zl, ops.ver, ops.sym_proj, zr}).exact,
                        "the shift sequence is not exact");
                AMat zl2(a, 0, ops.nonpure.size()), zr2(a, rank, 0);
                require(amat_exact({zl2, ops.gamma_incl, ops.frob, zr2}).exact,
                        "the kernel sequence is not exact");
                require(gamma_zero_iso_is_bijective(ops), "the quotient comparison map fails");
                require(fundamental_two_extension(a, rank).exact.exact,
                        "the four-term splice is not exact");
            }
        }
        return "invariant factors (4,4,2); generator schemes agree on 6 modules; sequences "
               "exact for ranks 1..3 over F_2, F_3, F_4";
    });

    criterion(4, "section-duality", 120.0, [] {
        struct Case {
            std::uint32_t p, d, r;
            std::uint64_t order;
        };
        for (auto c : std::vector<Case>{{2, 2, 2, 32}, {2, 3, 2, 512}, {3, 2, 2, 729}}) {
            auto s = homogeneous_sections(c.p, c.d, c.r);
            require(s.order == c.order, "order formula fails");
            auto cech = cech_sections(c.p, c.d, c.r);
            require(cech.order == c.order, "chart model has the wrong order");
            require(models_agree(cech, s), "the two section models differ");
            auto dual = section_duality_iso(c.p, c.d, c.r);
            require(dual.ok(), "the pairing is not perfect");
        }
        return "orders 32, 512, 729; pairing perfect and models agree on the grid";
    });

    criterion(5, "deformation-equivalences", 60.0, [] {
        std::vector<FpAlgebra> corpus = {FpAlgebra::prime_field(2), FpAlgebra::quadratic_field(2),
                                         FpAlgebra::univariate_quotient(2, {0, 1, 1}),
                                         FpAlgebra::univariate_quotient(3, {0, 2, 0, 1})};
        std::vector<FiniteRing> lifts = {FiniteRing::modpn(2, 2),
                                         FiniteRing::modpn_univariate(2, 2, {1, 1, 1}),
                                         FiniteRing::modpn_univariate(2, 2, {0, 1, 1}),
                                         FiniteRing::modpn_univariate(3, 2, {0, 8, 0, 1})};
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const FpAlgebra& a = corpus[i];
            auto c = canonical_extensions(a);
            // kappa of the witt extension is Frobenius elementwise
            for (auto& x : a.elements()) {
                Vec pt = c.witt2.total.scale(a.p, c.witt2.section(x));
                require(c.witt2.iota_inv(pt) == a.pow(x, a.p),
                        "connecting map differs from Frobenius on an element");
            }
            // round trip of the equivalence on the matching flat lift
            auto e = flat_lift_extension(lifts[i]);
            require(e.base == a || e.base.dim == a.dim, "corpus mismatch");
            auto cc = canonical_extensions(e.base);
            auto marked = to_marked(cc, e);
            auto back = from_marked(cc, marked.f);
            require(find_extension_iso(back, e).has_value(), "round trip not isomorphic");
            // the two flatness criteria agree
            require(is_flat_lift(e) && total_is_free_over_zp2(e), "flatness criteria disagree");
            // splitting-based lifting
            auto s = find_frobenius_splitting(cc);
            require(s.has_value(), "no splitting for a finite reduced base");
            auto lift = lift_from_splitting(cc, *s);
            require(is_flat_lift(lift) && total_is_free_over_zp2(lift),
                    "split lifting is not flat");
            if (frobenius(e.base).is_bijective())
                require(find_extension_iso(lift, witt2_as_flat_lift(e.base)).has_value(),
                        "perfect base: split lift differs from the witt lift");
        }
        return "4 reduced algebras: round trips isomorphic, connecting maps and flatness "
               "criteria verified, split lifts flat";
    });

    criterion(6, "tautological-kernel", 60.0, [] {
        for (std::uint32_t d : {2u, 3u}) {
            auto t = tautological_w2_lift(2, d);
            require(t.surjective_per_chart, "chart surjectivity fails");
            require(t.kernel_verified, "kernel basis fails");
            require(t.reduction_matches_classical, "mod-p reduction differs");
            for (std::uint32_t i = 0; i < d; ++i)
                require(t.kernel_basis[i].size() == d - 1, "kernel rank is not d-1");
            if (d == 2)
                require(t.line_transition_matches && *t.line_transition_matches,
                        "transition data is not the multiplicative lift of the (-1)-twist");
        }
        return "d = 2, 3: chartwise surjective with free kernels reducing to the classical one";
    });

    criterion(7, "exclusion-honesty", 30.0, [] {
        SuiteOptions opt;
        Report rep = run_suite("all", opt);
        bool found = false;
        for (auto& c : rep.checks)
            if (c.id == "grassmannian-tautological-nonlifting" && c.status == "excluded" &&
                !c.detail.empty())
                found = true;
        require(found, "the full suite does not state the exclusion");
        require(rep.all_passed(), "the full suite has failing checks");
        return "suite `all` passes and states the out-of-scope exclusion explicitly";
    });

    std::printf("%s\n", failures == 0 ? "ACCEPTANCE: all criteria passed"
                                      : "ACCEPTANCE: some criteria failed");
    return failures == 0 ? 0 : 1;
}
