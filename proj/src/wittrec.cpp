#include "wittkit/wittrec.hpp"

#include <algorithm>
#include <map>

namespace wittkit {

namespace {

std::uint64_t multinomial_p(std::uint32_t p, const MultiIndex& a) {
    std::uint64_t num = 1;
    for (std::uint32_t k = 2; k <= p; ++k) num *= k;
    for (auto e : a)
        for (std::uint32_t k = 2; k <= e; ++k) num /= k;
    return num;
}

}  // namespace

Vec PElementaryMap::preimage(const Vec& x_in_codomain) const {
    std::uint32_t lvl = std::max(hom.domain.scalar_level(), hom.codomain.scalar_level());
    Mod mod(hom.domain.p, lvl);
    ZpnMat m(mod, hom.domain.rank(), hom.codomain.rank());
    for (std::size_t i = 0; i < hom.domain.rank(); ++i)
        for (std::size_t j = 0; j < hom.codomain.rank(); ++j) m.at(i, j) = hom.images[i][j] % mod.q;
    ZpnModule cm = hom.codomain.as_module(lvl);
    Vec target(hom.codomain.rank());
    for (std::size_t j = 0; j < target.size(); ++j) target[j] = x_in_codomain[j] % mod.q;
    auto sol = solve_left(m.vstack(cm.rel), target);
    if (!sol) throw std::logic_error("PElementaryMap: no preimage (map not surjective?)");
    Vec x(hom.domain.rank());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (*sol)[i];
    return hom.domain.reduce(x);
}

Vec PElementaryMap::v_of(const Vec& x_in_codomain) const {
    return hom.domain.scale(static_cast<std::int64_t>(hom.domain.p), preimage(x_in_codomain));
}

PElementaryMap p_elementary(const RingHom& f) {
    if (!f.is_surjective()) throw std::invalid_argument("p_elementary: map not surjective");
    std::uint32_t lvl = std::max(f.domain.scalar_level(), f.codomain.scalar_level());
    PElementaryMap pe;
    pe.hom = f;
    pe.kernel = f.kernel_span(lvl);
    const FiniteRing& r = f.domain;
    std::vector<Vec> kgens;
    for (std::size_t i = 0; i < pe.kernel.rows; ++i) kgens.push_back(r.reduce(pe.kernel.row(i)));
    for (auto& k : kgens) {
        if (!r.is_zero(r.scale(static_cast<std::int64_t>(r.p), k)))
            throw std::invalid_argument("p_elementary: p * I != 0");
    }
    // I^p = 0 on the spanning set (multilinear, so this suffices)
    std::function<void(std::size_t, std::uint32_t, const Vec&)> rec =
        [&](std::size_t start, std::uint32_t left, const Vec& acc) {
            if (left == 0) {
                if (!r.is_zero(acc)) throw std::invalid_argument("p_elementary: I^p != 0");
                return;
            }
            for (std::size_t i = start; i < kgens.size(); ++i) rec(i, left - 1, r.mul(acc, kgens[i]));
        };
    rec(0, r.p, r.one());
    // V(x) = p * preimage, independent of the chosen preimage (pI = 0);
    // exercise the definition on the codomain generators.
    for (std::size_t j = 0; j < f.codomain.rank(); ++j) {
        Vec gj = f.codomain.zero();
        gj[j] = 1;
        Vec x = pe.preimage(gj);
        for (auto& k : kgens) {
            Vec alt = r.add(x, k);
            if (r.scale(r.p, alt) != r.scale(r.p, x))
                throw std::invalid_argument("p_elementary: V not well-defined");
        }
    }
    return pe;
}

Vec GammaRing::gamma_pure(const Vec& r_elem) const {
    return gamma.dist_to_coords(expand_pure_symbol(gamma.mod, r.reduce(r_elem), p));
}

Vec GammaRing::gamma_ideal_elem(const Vec& r_elem) const {
    // j_p(x (x) 1 (x) ... (x) 1)
    std::vector<Vec> factors(p, r.one());
    factors[0] = r.reduce(r_elem);
    Vec mono = sym.product_of(factors);
    return j_map.matrix.apply(mono);
}

Vec GammaRing::mult_ambient(const Vec& u, const Vec& v) const {
    const FiniteRing rr = r;
    return gamma_ring_product(gamma, u, v,
                              [rr](const Vec& a, const Vec& b) { return rr.mul(a, b); });
}

GammaRing build_gamma_ring(const FiniteRing& r) {
    GammaRing g;
    g.p = r.p;
    g.n = r.scalar_level();
    g.r = r;
    Mod big(r.p, g.n + 1);
    ZpnModule rmod = r.as_module(g.n + 1);
    g.gamma = gamma_module(big, rmod, r.p);
    g.sym = sym_module(big, rmod, r.p);
    g.j_map = divided_symbol_map(g.sym, g.gamma);
    // multiplication map Sym^p(R) -> R and its kernel
    ZpnMat mm(big, g.sym.basis.size(), r.rank());
    for (std::size_t bi = 0; bi < g.sym.basis.size(); ++bi) {
        Vec prod = r.one();
        for (std::size_t i = 0; i < r.rank(); ++i) {
            if (!g.sym.basis[bi][i]) continue;
            Vec gi = r.zero();
            gi[i] = 1;
            prod = r.mul(prod, r.pow(gi, g.sym.basis[bi][i]));
        }
        for (std::size_t j = 0; j < r.rank(); ++j) mm.at(bi, j) = prod[j] % big.q;
    }
    ModuleMap mult_map(g.sym.module, rmod, mm);
    KernelResult jker = kernel(mult_map);
    std::vector<Vec> jrows;
    for (std::size_t i = 0; i < jker.inclusion.matrix.rows; ++i)
        jrows.push_back(g.j_map.matrix.apply(jker.inclusion.matrix.row(i)));
    g.j_ideal = jrows.empty() ? ZpnMat(big, 0, g.gamma.basis.size())
                              : howell_form(ZpnMat::from_rows(big, jrows));
    // the ring product descends modulo the symbol relators
    for (std::size_t i = 0; i < g.gamma.module.rel.rows; ++i)
        for (std::size_t b = 0; b < g.gamma.basis.size(); ++b) {
            Vec db(g.gamma.basis.size(), 0);
            db[b] = 1;
            Vec prod = g.mult_ambient(g.gamma.module.rel.row(i), db);
            if (!g.gamma.module.is_zero_elem(prod))
                throw std::logic_error("build_gamma_ring: product does not descend");
        }
    // the image of the kernel ideal is an ideal
    ZpnMat full_rel = g.gamma.module.rel.vstack(g.j_ideal);
    for (std::size_t i = 0; i < g.j_ideal.rows; ++i)
        for (std::size_t b = 0; b < g.gamma.basis.size(); ++b) {
            Vec db(g.gamma.basis.size(), 0);
            db[b] = 1;
            Vec prod = g.mult_ambient(g.j_ideal.row(i), db);
            if (!in_row_span(howell_form(full_rel), prod))
                throw std::logic_error("build_gamma_ring: j-image is not an ideal");
        }
    g.phi_module = ZpnModule(big, g.gamma.basis.size(), full_rel);
    g.coords = SmithCoords::of(g.phi_module);
    g.unit_ambient = g.gamma_pure(r.one());
    // assemble the quotient ring on the cyclic coordinates
    std::size_t k = g.coords.keep.size();
    std::vector<Vec> section;
    for (std::size_t i = 0; i < k; ++i) section.push_back(g.coords.section(i));
    std::vector<std::vector<Vec>> table(k, std::vector<Vec>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            table[i][j] = g.coords.project(g.mult_ambient(section[i], section[j]));
    g.phi = FiniteRing(r.p, g.coords.exps(), std::move(table), g.coords.project(g.unit_ambient));
    return g;
}

RingHom gamma_ring_map(const GammaRing& dom, const GammaRing& cod, const RingHom& f) {
    // on symbols: prod [e_i]_{a_i} -> prod [f(e_i)]_{a_i}
    Mod big = dom.gamma.mod;
    std::vector<Vec> images;
    for (std::size_t k = 0; k < dom.phi.rank(); ++k) {
        Vec amb = dom.coords.section(k);
        Vec out(cod.gamma.basis.size(), 0);
        for (std::size_t bi = 0; bi < dom.gamma.basis.size(); ++bi) {
            std::uint64_t c = amb[bi] % big.q;
            if (!c) continue;
            SymbolDist acc;
            acc[MultiIndex(cod.gamma.source.ambient, 0)] = 1;
            const MultiIndex& a = dom.gamma.basis[bi];
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (!a[i]) continue;
                Vec gi = dom.r.zero();
                gi[i] = 1;
                acc = symbol_merge(big, acc, expand_pure_symbol(big, f.apply(gi), a[i]));
            }
            Vec v = cod.gamma.dist_to_coords(acc);
            for (std::size_t j = 0; j < out.size(); ++j) out[j] = big.add(out[j], big.mul(c, v[j]));
        }
        images.push_back(cod.project(out));
    }
    return RingHom(dom.phi, cod.phi, std::move(images));
}

RingHom power_law_hom(const GammaRing& phi_of_r, const PElementaryMap& f) {
    const FiniteRing& target = f.hom.domain;
    const FiniteRing& r = phi_of_r.r;
    if (!(f.hom.codomain == r)) throw std::invalid_argument("power_law_hom: codomain mismatch");
    Mod big = phi_of_r.gamma.mod;
    std::vector<Vec> pre;
    for (std::size_t i = 0; i < r.rank(); ++i) {
        Vec gi = r.zero();
        gi[i] = 1;
        pre.push_back(f.preimage(gi));
    }
    auto value_on_ambient = [&](const Vec& amb, const std::vector<Vec>& x) {
        Vec acc = target.zero();
        for (std::size_t bi = 0; bi < phi_of_r.gamma.basis.size(); ++bi) {
            std::uint64_t c = amb[bi] % big.q;
            if (!c) continue;
            const MultiIndex& a = phi_of_r.gamma.basis[bi];
            Vec term = target.scale(static_cast<std::int64_t>(multinomial_p(r.p, a)), target.one());
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i]) term = target.mul(term, target.pow(x[i], a[i]));
            acc = target.add(acc, target.scale(static_cast<std::int64_t>(c), term));
        }
        return acc;
    };
    // well-defined: kills the symbol relators and the divided ideal
    for (std::size_t i = 0; i < phi_of_r.phi_module.rel.rows; ++i)
        if (!target.is_zero(value_on_ambient(phi_of_r.phi_module.rel.row(i), pre)))
            throw std::logic_error("power_law_hom: does not kill the presentation relators");
    // independent of the preimage choices
    if (f.kernel.rows > 0) {
        for (std::size_t i = 0; i < r.rank(); ++i) {
            std::vector<Vec> alt = pre;
            alt[i] = target.add(alt[i], target.reduce(f.kernel.row(0)));
            for (std::size_t b = 0; b < phi_of_r.gamma.basis.size(); ++b) {
                Vec db(phi_of_r.gamma.basis.size(), 0);
                db[b] = 1;
                if (value_on_ambient(db, alt) != value_on_ambient(db, pre))
                    throw std::logic_error("power_law_hom: depends on preimage choice");
            }
        }
    }
    std::vector<Vec> images;
    for (std::size_t k = 0; k < phi_of_r.phi.rank(); ++k)
        images.push_back(value_on_ambient(phi_of_r.coords.section(k), pre));
    return RingHom(phi_of_r.phi, target, std::move(images));
}

namespace {

// decompose w = tau(w_0) + i_{n,n+1}(b); returns (w_0, b)
std::pair<Vec, WittVec> teich_plus_shift(const WittRing& wn1, const WittVec& w) {
    WittVec diff = wn1.sub(w, wn1.teichmuller(w[0]));
    if (!wn1.base.is_zero(diff[0]))
        throw std::logic_error("teich_plus_shift: decomposition failed");
    WittVec b(diff.begin() + 1, diff.end());
    return {w[0], b};
}

}  // namespace

WittRecursion witt_recursion(const FpAlgebra& b, std::uint32_t n) {
    WittRecursion rec;
    rec.base = b;
    rec.n = n;
    rec.wn = witt_ring_table(WittRing(b, n));
    rec.wn1 = witt_ring_table(WittRing(b, n + 1));
    rec.phi = build_gamma_ring(rec.wn.ring);
    const FiniteRing& phi = rec.phi.phi;

    // kernel generators [i(tau_{n-1}(x))]_p - p^{p-1} * phi(tau_n(x)), x in B
    WittRing wnr = rec.wn.wr;
    WittRing wn1r = rec.wn1.wr;
    std::vector<Vec> kgens;
    for (auto& x : b.elements()) {
        Vec pure_part(phi.zero());
        if (n >= 1) {
            // i_{n-1,n}(tau_{n-1}(x)) inside W_n(B); zero when n = 1
            WittVec inj = wnr.zero();
            if (n > 1) {
                WittRing wm(b, n - 1);
                inj = inject(wnr, wm.teichmuller(x));
            }
            pure_part = rec.phi.pure_symbol(rec.wn.to_coords(inj));
        }
        Vec ideal_part = rec.phi.ideal_elem(rec.wn.to_coords(wnr.teichmuller(x)));
        std::int64_t pp1 = 1;
        for (std::uint32_t i = 0; i + 1 < b.p; ++i) pp1 *= b.p;  // p^{p-1}
        Vec gen = phi.sub(pure_part, phi.scale(pp1, ideal_part));
        if (!phi.is_zero(gen)) kgens.push_back(gen);
    }
    rec.kernel_gens = kgens;

    // quotient by the span of the generators (verified to be an ideal)
    Mod phim(b.p, phi.scalar_level());
    ZpnMat kmat = kgens.empty() ? ZpnMat(phim, 0, phi.rank()) : ZpnMat::from_rows(phim, kgens);
    if (!is_ideal(phi, kmat))
        throw std::logic_error("witt_recursion: kernel generator span is not an ideal");
    QuotientRing psi = quotient_ring(phi, kmat);

    // f : W_{n+1}(B) -> Psi, tau(w_0) + i(b) -> [tau(w_0)]_p + phi(b)
    auto fmap = [&](const WittVec& w) {
        auto [w0, sh] = teich_plus_shift(wn1r, w);
        Vec val = phi.add(rec.phi.pure_symbol(rec.wn.to_coords(wnr.teichmuller(w0))),
                          rec.phi.ideal_elem(rec.wn.to_coords(sh)));
        return psi.projection.apply(val);
    };
    // f is a ring isomorphism onto Psi (bijective + additive + multiplicative)
    std::map<Vec, std::uint64_t> image_index;
    std::vector<WittVec> elems = wn1r.elements();
    check_guard(elems.size() * elems.size(), "witt_recursion pair verification");
    for (auto& w : elems) {
        Vec v = fmap(w);
        if (image_index.count(v)) throw std::logic_error("witt_recursion: f not injective");
        image_index[v] = wn1r.index_of(w);
    }
    if (image_index.size() != psi.ring.size())
        throw std::logic_error("witt_recursion: f not surjective onto the quotient");
    for (auto& u : elems)
        for (auto& v : elems) {
            if (fmap(wn1r.add(u, v)) != psi.ring.add(fmap(u), fmap(v)))
                throw std::logic_error("witt_recursion: f not additive");
            if (fmap(wn1r.mul(u, v)) != psi.ring.mul(fmap(u), fmap(v)))
                throw std::logic_error("witt_recursion: f not multiplicative");
        }
    if (fmap(wn1r.one()) != psi.ring.one()) throw std::logic_error("witt_recursion: f misses unit");

    // s := f^{-1} after projecting to Psi; a verified ring hom
    std::vector<Vec> s_images;
    for (std::size_t k = 0; k < phi.rank(); ++k) {
        Vec gk = phi.zero();
        gk[k] = 1;
        Vec in_psi = psi.projection.apply(gk);
        std::uint64_t widx = image_index.at(in_psi);
        s_images.push_back(rec.wn1.to_coords(wn1r.from_index(widx)));
    }
    rec.s = RingHom(phi, rec.wn1.ring, std::move(s_images));
    // s sends the pure symbol of tau_n(x) to tau_{n+1}(x)
    for (auto& x : b.elements()) {
        Vec lhs = rec.s.apply(rec.phi.pure_symbol(rec.wn.to_coords(wnr.teichmuller(x))));
        Vec rhs = rec.wn1.to_coords(wn1r.teichmuller(x));
        if (lhs != rhs) throw std::logic_error("witt_recursion: s misses the multiplicative lift");
    }
    // kernel order, two-sided: enumerate {u : s(u) = 0} and the generator span
    std::uint64_t kercount = 0;
    std::map<Vec, bool> genspan;
    {
        for (auto& u : phi.elements())
            if (rec.wn1.ring.is_zero(rec.s.apply(u))) ++kercount;
        genspan[phi.zero()] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<Vec> cur;
            for (auto& [k, v] : genspan) cur.push_back(k);
            for (auto& u : cur)
                for (auto& g : kgens) {
                    Vec w = phi.add(u, g);
                    if (!genspan.count(w)) {
                        genspan[w] = true;
                        grew = true;
                    }
                }
        }
        for (auto& [u, flag] : genspan)
            if (!rec.wn1.ring.is_zero(rec.s.apply(u)))
                throw std::logic_error("witt_recursion: generator span not inside kernel");
        if (genspan.size() != kercount)
            throw std::logic_error("witt_recursion: kernel differs from the generator span");
    }
    rec.kernel_order = kercount;
    rec.is_isomorphism = (kercount == 1);
    return rec;
}

LiftDiagram initial_diagram(const FpAlgebra& b, const FiniteRing& r1, const RingHom& f1) {
    LiftDiagram d;
    d.base = b;
    d.witt.push_back(witt_ring_table(WittRing(b, 1)));
    if (!(f1.domain == d.witt[0].ring))
        throw std::invalid_argument("initial_diagram: f1 must start from W_1(B)");
    d.rings.push_back(r1);
    d.maps.push_back(f1);
    return d;
}

void check_diagram(const LiftDiagram& d) {
    for (std::uint32_t i = 2; i <= d.level(); ++i) {
        const WittRingTable& wi = d.witt[i - 1];
        const WittRingTable& wi1 = d.witt[i - 2];
        const PElementaryMap& step = d.steps[i - 2];
        // commutes up to Frobenius: f_{i-1} o pi o Frob = F_i o f_i
        for (auto& w : wi.wr.elements()) {
            WittVec fw = wi.wr.frobenius(w);
            Vec lhs = d.maps[i - 2].apply(wi1.to_coords(project(wi.wr, fw, i - 1)));
            Vec rhs = step.hom.apply(d.maps[i - 1].apply(wi.to_coords(w)));
            if (lhs != rhs) throw std::logic_error("check_diagram: Frobenius square fails");
        }
        // f_i(i_{i-1,i}(x)) = V(f_{i-1}(x))
        for (auto& x : wi1.wr.elements()) {
            Vec lhs = d.maps[i - 1].apply(wi.to_coords(inject(wi.wr, x)));
            Vec rhs = step.v_of(d.maps[i - 2].apply(wi1.to_coords(x)));
            if (lhs != rhs) throw std::logic_error("check_diagram: shift compatibility fails");
        }
    }
}

LiftDiagram lift_diagram(const LiftDiagram& d, const PElementaryMap& next) {
    if (!(next.hom.codomain == d.rings.back()))
        throw std::invalid_argument("lift_diagram: step does not end at the top ring");
    check_diagram(d);
    std::uint32_t n = d.level();
    LiftDiagram out = d;
    out.witt.push_back(witt_ring_table(WittRing(d.base, n + 1)));
    const WittRingTable& wn = d.witt[n - 1];
    const WittRingTable& wn1 = out.witt[n];
    const FiniteRing& target = next.hom.domain;  // R_{n+1}

    WittRecursion rec = witt_recursion(d.base, n);
    const GammaRing& phi = rec.phi;
    const Mod big = phi.gamma.mod;
    // G(m_a) = multinom(p;a) prod X_i^{a_i}, X_i a preimage of f_n(g_i)
    auto build_values = [&](std::uint32_t variant) {
        std::vector<Vec> pre;
        for (std::size_t i = 0; i < wn.ring.rank(); ++i) {
            Vec gi = wn.ring.zero();
            gi[i] = 1;
            Vec x = next.preimage(d.maps[n - 1].apply(gi));
            if (variant && next.kernel.rows)
                x = target.add(x, target.reduce(next.kernel.row(variant % next.kernel.rows)));
            pre.push_back(x);
        }
        return pre;
    };
    auto g_on_ambient = [&](const Vec& amb, const std::vector<Vec>& pre) {
        Vec acc = target.zero();
        for (std::size_t bi = 0; bi < phi.gamma.basis.size(); ++bi) {
            std::uint64_t c = amb[bi] % big.q;
            if (!c) continue;
            const MultiIndex& a = phi.gamma.basis[bi];
            Vec term =
                target.scale(static_cast<std::int64_t>(multinomial_p(d.base.p, a)), target.one());
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i]) term = target.mul(term, target.pow(pre[i], a[i]));
            acc = target.add(acc, target.scale(static_cast<std::int64_t>(c), term));
        }
        return acc;
    };
    std::vector<Vec> pre = build_values(0);
    // G kills the presentation relators and the recursion kernel generators
    for (std::size_t i = 0; i < phi.phi_module.rel.rows; ++i)
        if (!target.is_zero(g_on_ambient(phi.phi_module.rel.row(i), pre)))
            throw std::logic_error("lift_diagram: G does not kill the symbol relators");
    for (auto& k : rec.kernel_gens) {
        // bring the phi-coordinates back to Gamma-ambient coordinates
        Vec amb(phi.gamma.basis.size(), 0);
        for (std::size_t j = 0; j < k.size(); ++j) {
            Vec sec = phi.coords.section(j);
            for (std::size_t t = 0; t < amb.size(); ++t)
                amb[t] = big.add(amb[t], big.mul(k[j], sec[t]));
        }
        if (!target.is_zero(g_on_ambient(amb, pre)))
            throw std::logic_error("lift_diagram: G does not kill the recursion kernel");
    }
    // f_{n+1}(w) = G(canonical Phi-representative of w)
    auto fn1 = [&](const WittVec& w) {
        auto [w0, sh] = teich_plus_shift(wn1.wr, w);
        Vec amb1 = phi.gamma_pure(wn.to_coords(wn.wr.teichmuller(w0)));
        Vec amb2 = phi.gamma_ideal_elem(wn.to_coords(sh));
        Vec amb(amb1.size());
        for (std::size_t t = 0; t < amb.size(); ++t) amb[t] = big.add(amb1[t], amb2[t]);
        return g_on_ambient(amb, pre);
    };
    // choice independence
    if (next.kernel.rows) {
        std::vector<Vec> alt = build_values(1);
        for (auto& w : wn1.wr.elements()) {
            auto [w0, sh] = teich_plus_shift(wn1.wr, w);
            Vec amb1 = phi.gamma_pure(wn.to_coords(wn.wr.teichmuller(w0)));
            Vec amb2 = phi.gamma_ideal_elem(wn.to_coords(sh));
            Vec amb(amb1.size());
            for (std::size_t t = 0; t < amb.size(); ++t) amb[t] = big.add(amb1[t], amb2[t]);
            if (g_on_ambient(amb, pre) != g_on_ambient(amb, alt))
                throw std::logic_error("lift_diagram: result depends on preimage choices");
        }
    }
    std::vector<Vec> images;
    for (std::size_t k = 0; k < wn1.ring.rank(); ++k) {
        Vec gk = wn1.ring.zero();
        gk[k] = 1;
        images.push_back(fn1(wn1.from_coords(gk)));
    }
    out.rings.push_back(target);
    out.maps.emplace_back(wn1.ring, target, std::move(images));  // re-verifies ring axioms
    out.steps.push_back(next);
    // the generator extension agrees with the construction pointwise
    for (auto& w : wn1.wr.elements())
        if (out.maps.back().apply(wn1.to_coords(w)) != fn1(w))
            throw std::logic_error("lift_diagram: constructed map is not additive");
    check_diagram(out);
    return out;
}

}  // namespace wittkit
