#include "wittkit/projspace.hpp"

#include <algorithm>

namespace wittkit {

HFrac HFrac::of(const GradedAlgebra& r, GradedElem n, Monomial d) {
    HFrac f;
    f.ring = &r;
    f.num = std::move(n);
    f.den = std::move(d);
    return f;
}

HFrac HFrac::zero(const GradedAlgebra& r) {
    return of(r, GradedElem(r), Monomial(r.gen_degrees.size(), 0));
}

HFrac HFrac::one(const GradedAlgebra& r) {
    return of(r, GradedElem::constant(r, 1), Monomial(r.gen_degrees.size(), 0));
}

HFrac HFrac::variable_ratio(const GradedAlgebra& r, std::size_t k, std::size_t i) {
    Monomial d(r.gen_degrees.size(), 0);
    d[i] = 1;
    return of(r, GradedElem::generator(r, k), d);
}

namespace {

GradedElem monomial_elem(const GradedAlgebra& r, const Monomial& m) {
    return GradedElem::monomial(r, m, 1);
}

Monomial mono_add(const Monomial& a, const Monomial& b) {
    Monomial m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] + b[i];
    return m;
}

}  // namespace

HFrac HFrac::add(const HFrac& o) const {
    // common denominator den * o.den
    GradedElem n1 = num.mul(monomial_elem(*ring, o.den));
    GradedElem n2 = o.num.mul(monomial_elem(*ring, den));
    return of(*ring, n1.add(n2), mono_add(den, o.den));
}

HFrac HFrac::sub(const HFrac& o) const { return add(o.scale(ring->p - 1)); }

HFrac HFrac::mul(const HFrac& o) const {
    return of(*ring, num.mul(o.num), mono_add(den, o.den));
}

HFrac HFrac::scale(std::uint64_t c) const { return of(*ring, num.scale(c), den); }

bool HFrac::equals(const HFrac& o) const {
    GradedElem l = num.mul(monomial_elem(*ring, o.den));
    GradedElem r = o.num.mul(monomial_elem(*ring, den));
    return l == r;
}

namespace {

// evaluate an integer structure polynomial on fraction components
HFrac eval_frac_poly(std::uint32_t p, const IntPoly& poly, const WittFrac* xs, const WittFrac* ys,
                     std::uint32_t n, const GradedAlgebra& ring) {
    HFrac acc = HFrac::zero(ring);
    for (auto& [e, c] : poly.terms) {
        BigInt cm = c % p;
        if (cm < 0) cm += p;
        std::uint64_t cp = static_cast<std::uint64_t>(cm);
        if (!cp) continue;
        HFrac term = HFrac::one(ring);
        for (std::uint32_t i = 0; i < n; ++i) {
            for (std::uint32_t k = 0; k < e[i]; ++k) term = term.mul((*xs)[i]);
            if (ys)
                for (std::uint32_t k = 0; k < e[n + i]; ++k) term = term.mul((*ys)[i]);
        }
        acc = acc.add(term.scale(cp));
    }
    return acc;
}

}  // namespace

WittFrac wf_add(std::uint32_t p, const WittFrac& u, const WittFrac& v) {
    std::uint32_t n = static_cast<std::uint32_t>(u.size());
    const WittPolynomials& wp = witt_polynomials(p, n);
    const GradedAlgebra& ring = *u[0].ring;
    WittFrac r;
    for (std::uint32_t m = 0; m < n; ++m) r.push_back(eval_frac_poly(p, wp.sum[m], &u, &v, n, ring));
    return r;
}

WittFrac wf_mul(std::uint32_t p, const WittFrac& u, const WittFrac& v) {
    std::uint32_t n = static_cast<std::uint32_t>(u.size());
    const WittPolynomials& wp = witt_polynomials(p, n);
    const GradedAlgebra& ring = *u[0].ring;
    WittFrac r;
    for (std::uint32_t m = 0; m < n; ++m) r.push_back(eval_frac_poly(p, wp.prod[m], &u, &v, n, ring));
    return r;
}

WittFrac wf_neg(std::uint32_t p, const WittFrac& u) {
    std::uint32_t n = static_cast<std::uint32_t>(u.size());
    const WittPolynomials& wp = witt_polynomials(p, n);
    const GradedAlgebra& ring = *u[0].ring;
    WittFrac r;
    for (std::uint32_t m = 0; m < n; ++m)
        r.push_back(eval_frac_poly(p, wp.neg[m], &u, nullptr, n, ring));
    return r;
}

WittFrac wf_teich(const GradedAlgebra& r, std::uint32_t n, const HFrac& x) {
    WittFrac w(n, HFrac::zero(r));
    w[0] = x;
    return w;
}

bool wf_equal(const WittFrac& u, const WittFrac& v) {
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!u[i].equals(v[i])) return false;
    return true;
}

// ------------------------- homogeneous model --------------------------

Vec SectionModel::add(const Vec& a, const Vec& b) const {
    const WittPolynomials& wp = witt_polynomials(p, r);
    std::vector<GradedElem> x = components(a), y = components(b);
    std::vector<GradedElem> out;
    for (std::uint32_t m = 0; m < r; ++m) {
        GradedElem acc(sym);
        for (auto& [e, c] : wp.sum[m].terms) {
            BigInt cm = c % p;
            if (cm < 0) cm += p;
            std::uint64_t cp = static_cast<std::uint64_t>(cm);
            if (!cp) continue;
            GradedElem term = GradedElem::constant(sym, cp);
            for (std::uint32_t i = 0; i < r; ++i) {
                if (e[i]) term = term.mul(x[i].pow(e[i]));
                if (e[r + i]) term = term.mul(y[i].pow(e[r + i]));
            }
            acc = acc.add(term);
        }
        out.push_back(acc);
    }
    return from_components(out);
}

Vec SectionModel::neg(const Vec& a) const {
    const WittPolynomials& wp = witt_polynomials(p, r);
    std::vector<GradedElem> x = components(a);
    std::vector<GradedElem> out;
    for (std::uint32_t m = 0; m < r; ++m) {
        GradedElem acc(sym);
        for (auto& [e, c] : wp.neg[m].terms) {
            BigInt cm = c % p;
            if (cm < 0) cm += p;
            std::uint64_t cp = static_cast<std::uint64_t>(cm);
            if (!cp) continue;
            GradedElem term = GradedElem::constant(sym, cp);
            for (std::uint32_t i = 0; i < r; ++i)
                if (e[i]) term = term.mul(x[i].pow(e[i]));
            acc = acc.add(term);
        }
        out.push_back(acc);
    }
    return from_components(out);
}

Vec SectionModel::scale(std::int64_t c, const Vec& a) const {
    std::uint64_t q = pow_u64(p, r);
    std::int64_t cc = c % static_cast<std::int64_t>(q);
    if (cc < 0) cc += static_cast<std::int64_t>(q);
    Vec acc = zero(), base = a;
    std::uint64_t e = static_cast<std::uint64_t>(cc);
    while (e) {
        if (e & 1) acc = add(acc, base);
        base = add(base, base);
        e >>= 1;
    }
    return acc;
}

std::vector<GradedElem> SectionModel::components(const Vec& a) const {
    std::vector<GradedElem> out;
    for (std::uint32_t m = 0; m < r; ++m) {
        GradedElem g(sym);
        for (std::size_t j = 0; j < slice[m].size(); ++j) {
            std::uint64_t c = a[offsets[m] + j] % p;
            if (c) g.coeffs[slice[m][j]] = c;
        }
        out.push_back(g);
    }
    return out;
}

Vec SectionModel::from_components(const std::vector<GradedElem>& comps) const {
    Vec a(coord_dim, 0);
    for (std::uint32_t m = 0; m < r; ++m) {
        for (auto& [mono, c] : comps[m].coeffs) {
            auto it = std::find(slice[m].begin(), slice[m].end(), mono);
            if (it == slice[m].end())
                throw std::logic_error("SectionModel: component not homogeneous of the right degree");
            a[offsets[m] + static_cast<std::size_t>(it - slice[m].begin())] = c % p;
        }
    }
    return a;
}

std::vector<Vec> SectionModel::elements() const {
    check_guard(order, "SectionModel::elements");
    std::vector<Vec> out;
    out.reserve(order);
    for (std::uint64_t i = 0; i < order; ++i) out.push_back(from_index(i));
    return out;
}

std::uint64_t SectionModel::index_of(const Vec& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = coord_dim; i-- > 0;) idx = idx * p + a[i] % p;
    return idx;
}

Vec SectionModel::from_index(std::uint64_t idx) const {
    Vec a(coord_dim, 0);
    for (std::size_t i = 0; i < coord_dim; ++i) {
        a[i] = idx % p;
        idx /= p;
    }
    return a;
}

Vec SectionModel::restrict_to(const SectionModel& smaller, const Vec& a) const {
    Vec b(smaller.coord_dim, 0);
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(smaller.coord_dim), b.begin());
    return b;
}

Vec SectionModel::teich_section_from(const SectionModel& smaller, const Vec& b) const {
    if (b.size() != smaller.coord_dim)
        throw std::invalid_argument("teich_section_from: coordinate size mismatch");
    Vec a(coord_dim, 0);
    std::copy(b.begin(), b.end(), a.begin());
    return a;
}

SectionModel homogeneous_sections(std::uint32_t p, std::uint32_t d, std::uint32_t r) {
    SectionModel s;
    s.p = p;
    s.d = d;
    s.r = r;
    std::uint32_t pr = static_cast<std::uint32_t>(pow_u64(p, r - 1));
    std::uint32_t trunc = 3 * pr * pr + 2 * pr + 4;
    s.sym = GradedAlgebra::symmetric(p, d, trunc);
    s.coord_dim = 0;
    s.order = 1;
    for (std::uint32_t m = 0; m < r; ++m) {
        std::uint32_t deg = static_cast<std::uint32_t>(pow_u64(p, m));
        s.slice.push_back(s.sym.slice_basis(deg));
        s.offsets.push_back(s.coord_dim);
        s.coord_dim += s.slice.back().size();
        s.order *= pow_u64(p, static_cast<std::uint32_t>(s.slice.back().size()));
    }
    return s;
}

// --------------------------- Cech model -------------------------------

CechModel cech_sections(std::uint32_t p, std::uint32_t d, std::uint32_t r) {
    CechModel c;
    c.p = p;
    c.d = d;
    c.r = r;
    c.kdenom = static_cast<std::uint32_t>(pow_u64(p, r - 1));
    std::uint32_t trunc = 3 * c.kdenom * static_cast<std::uint32_t>(pow_u64(p, r - 1)) +
                          2 * c.kdenom + 2 * static_cast<std::uint32_t>(pow_u64(p, r - 1)) + 4;
    c.sym = GradedAlgebra::symmetric(p, d, trunc);
    Mod fp(p, 1);
    auto kbasis = c.sym.slice_basis(c.kdenom);
    std::size_t nb = kbasis.size();
    c.order = 1;
    for (std::uint32_t m = 0; m < r; ++m) {
        c.numer_basis.push_back(kbasis);
        // unknowns: numerator coefficients per chart: d * nb over F_p;
        // constraints per pair i < j: num_i e_i^{p^m} e_j^K = num_j e_j^{p^m} e_i^K
        std::uint32_t pm = static_cast<std::uint32_t>(pow_u64(p, m));
        std::size_t nu = static_cast<std::size_t>(d) * nb;
        // build as a matrix equation x * M = 0 with one column per
        // (pair, monomial of degree 2K + p^m)
        auto target_basis = c.sym.slice_basis(2 * c.kdenom + pm);
        std::map<Monomial, std::size_t> tindex;
        for (std::size_t t = 0; t < target_basis.size(); ++t) tindex[target_basis[t]] = t;
        std::size_t pairs = 0;
        for (std::uint32_t i = 0; i < d; ++i)
            for (std::uint32_t j = i + 1; j < d; ++j) ++pairs;
        ZpnMat constraints(fp, nu, pairs * target_basis.size());
        std::size_t pair_no = 0;
        for (std::uint32_t i = 0; i < d; ++i)
            for (std::uint32_t j = i + 1; j < d; ++j, ++pair_no) {
                for (std::size_t b = 0; b < nb; ++b) {
                    // chart i contribution: + mono * e_i^{p^m} e_j^K
                    Monomial mi = kbasis[b];
                    mi[i] += pm;
                    mi[j] += c.kdenom;
                    constraints.at(i * nb + b, pair_no * target_basis.size() + tindex.at(mi)) = 1;
                    // chart j contribution: - mono * e_j^{p^m} e_i^K
                    Monomial mj = kbasis[b];
                    mj[j] += pm;
                    mj[i] += c.kdenom;
                    constraints.at(j * nb + b, pair_no * target_basis.size() + tindex.at(mj)) =
                        (p - 1) % p;
                }
            }
        ZpnMat ns = nullspace(constraints);
        c.glued.push_back(ns);
        c.order *= pow_u64(p, static_cast<std::uint32_t>(ns.rows));
    }
    return c;
}

Vec cech_of_homogeneous(const CechModel& c, const SectionModel& s, const Vec& a,
                        std::uint32_t component) {
    // numerator on chart i: g_m * e_i^{K - p^m}
    std::vector<GradedElem> comps = s.components(a);
    std::uint32_t pm = static_cast<std::uint32_t>(pow_u64(c.p, component));
    std::size_t nb = c.numer_basis[component].size();
    std::map<Monomial, std::size_t> bindex;
    for (std::size_t b = 0; b < nb; ++b) bindex[c.numer_basis[component][b]] = b;
    Vec out(static_cast<std::size_t>(c.d) * nb, 0);
    for (std::uint32_t i = 0; i < c.d; ++i) {
        for (auto& [mono, coef] : comps[component].coeffs) {
            Monomial mm = mono;
            mm[i] += c.kdenom - pm;
            out[i * nb + bindex.at(mm)] = coef % c.p;
        }
    }
    return out;
}

bool models_agree(const CechModel& c, const SectionModel& s) {
    if (c.order != s.order) return false;
    Mod fp(c.p, 1);
    // the image of the homogeneous model lands in the glued space and is
    // injective per component; with equal orders this gives a bijection
    for (std::uint32_t m = 0; m < c.r; ++m) {
        std::size_t sd = s.slice[m].size();
        // map the slice basis
        std::vector<Vec> images;
        for (std::size_t j = 0; j < sd; ++j) {
            Vec a = s.zero();
            a[s.offsets[m] + j] = 1;
            Vec img = cech_of_homogeneous(c, s, a, m);
            if (!in_row_span(howell_form(c.glued[m]), img)) return false;
            images.push_back(img);
        }
        ZpnMat im = ZpnMat::from_rows(fp, images);
        if (nullspace(im).rows != 0) return false;  // injective
        if (c.glued[m].rows != sd) return false;    // same dimension
    }
    // the group operations agree: chart-wise Witt addition of fractions
    // against the mapped homogeneous sum, on sampled pairs
    Rng rng(19);
    std::vector<std::map<Monomial, std::size_t>> bindex(c.r);
    for (std::uint32_t m = 0; m < c.r; ++m)
        for (std::size_t b = 0; b < c.numer_basis[m].size(); ++b)
            bindex[m][c.numer_basis[m][b]] = b;
    auto chart_fractions = [&](const Vec& a, std::uint32_t chart) {
        WittFrac w;
        std::vector<GradedElem> comps = s.components(a);
        for (std::uint32_t m = 0; m < c.r; ++m) {
            std::uint32_t pm = static_cast<std::uint32_t>(pow_u64(c.p, m));
            GradedElem num(c.sym);
            for (auto& [mono, coef] : comps[m].coeffs) {
                Monomial mm = mono;
                mm[chart] += c.kdenom - pm;
                num.coeffs[mm] = coef;
            }
            Monomial den(c.d, 0);
            den[chart] = c.kdenom;
            w.push_back(HFrac::of(c.sym, num, den));
        }
        return w;
    };
    std::uint64_t samples = std::min<std::uint64_t>(s.order, 12);
    for (std::uint64_t t1 = 0; t1 < samples; ++t1)
        for (std::uint64_t t2 = 0; t2 < samples; ++t2) {
            Vec a = s.from_index(rng.below(s.order));
            Vec b = s.from_index(rng.below(s.order));
            Vec sum = s.add(a, b);
            for (std::uint32_t chart = 0; chart < c.d; ++chart) {
                WittFrac wa = chart_fractions(a, chart);
                WittFrac wb = chart_fractions(b, chart);
                WittFrac ws = wf_add(c.p, wa, wb);
                if (!wf_equal(ws, chart_fractions(sum, chart))) return false;
            }
        }
    return true;
}

std::vector<GradedElem> evaluate_section(const SectionModel& s, const Vec& a) {
    return s.components(a);
}

// ----------------------------- pairing --------------------------------

namespace {

ModPoly modpoly_mul(Mod mod, const ModPoly& a, const ModPoly& b) {
    ModPoly r;
    for (auto& [m1, c1] : a)
        for (auto& [m2, c2] : b) {
            Monomial m(m1.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = m1[i] + m2[i];
            std::uint64_t c = c1 * c2 % mod.q;
            if (!c) continue;
            auto it = r.find(m);
            std::uint64_t v = ((it == r.end() ? 0 : it->second) + c) % mod.q;
            if (v)
                r[m] = v;
            else if (it != r.end())
                r.erase(it);
        }
    return r;
}

ModPoly modpoly_pow(Mod mod, const ModPoly& a, std::uint64_t e) {
    ModPoly r;
    r[Monomial(a.empty() ? 0 : a.begin()->first.size(), 0)] = 1 % mod.q;
    if (a.empty()) {
        if (e == 0) return r;
        return {};
    }
    ModPoly b = a;
    while (e) {
        if (e & 1) r = modpoly_mul(mod, r, b);
        b = modpoly_mul(mod, b, b);
        e >>= 1;
    }
    return r;
}

}  // namespace

ModPoly SectionPairing::law_polynomial(const Vec& section) const {
    std::vector<GradedElem> comps = sections.components(section);
    ModPoly acc;
    std::uint64_t pm = 1;
    for (std::uint32_t m = 0; m < r; ++m) {
        // lift the F_p coefficients and raise to the power p^{r-1-m}
        ModPoly g;
        for (auto& [mono, c] : comps[m].coeffs) g[mono] = c % coeff.q;
        if (g.empty()) {
            pm *= p;
            continue;
        }
        std::uint64_t e = pow_u64(p, r - 1 - m);
        ModPoly powd = modpoly_pow(coeff, g, e);
        for (auto& [mono, c] : powd) {
            std::uint64_t v = (acc.count(mono) ? acc[mono] : 0);
            v = (v + pm % coeff.q * c) % coeff.q;
            if (v)
                acc[mono] = v;
            else
                acc.erase(mono);
        }
        pm *= p;
    }
    return acc;
}

std::uint64_t SectionPairing::pair_basis(const MultiIndex& a, const Vec& section) const {
    ModPoly f = law_polynomial(section);
    Monomial m(a.begin(), a.end());
    auto it = f.find(m);
    return it == f.end() ? 0 : it->second;
}

Vec SectionPairing::pair_vector(const Vec& section) const {
    ModPoly f = law_polynomial(section);
    Vec out(gamma.basis.size(), 0);
    for (std::size_t i = 0; i < gamma.basis.size(); ++i) {
        Monomial m(gamma.basis[i].begin(), gamma.basis[i].end());
        auto it = f.find(m);
        out[i] = it == f.end() ? 0 : it->second;
    }
    return out;
}

SectionPairing section_pairing(std::uint32_t p, std::uint32_t d, std::uint32_t r) {
    SectionPairing sp{p, d, r, Mod(p, r), {}, {}};
    Mod zr(p, r);
    ZpnMat rel(zr, d, d);
    for (std::uint32_t i = 0; i < d; ++i) rel.at(i, i) = p;
    ZpnModule dual_space(zr, d, rel);  // the dual of V as a Z/p^r-module
    sp.gamma = gamma_module(zr, dual_space, static_cast<std::uint32_t>(pow_u64(p, r - 1)));
    sp.sections = homogeneous_sections(p, d, r);
    return sp;
}

DualityCheck section_duality_iso(std::uint32_t p, std::uint32_t d, std::uint32_t r) {
    DualityCheck out;
    SectionPairing sp = section_pairing(p, d, r);
    const SectionModel& H = sp.sections;
    out.order = H.order;
    // order formula of the section group
    std::uint64_t expect = 1;
    for (std::uint32_t m = 0; m < r; ++m) {
        std::uint32_t pm = static_cast<std::uint32_t>(pow_u64(p, m));
        expect *= pow_u64(p, static_cast<std::uint32_t>(binomial_u64(pm + d - 1, d - 1)));
    }
    out.orders_match = (H.order == expect) && (sp.gamma.module.size() == H.order);
    // pairing is additive in the section argument
    out.pairing_additive = true;
    {
        Rng rng(2);
        std::vector<Vec> elems = H.elements();
        for (int t = 0; t < 200; ++t) {
            const Vec& a = elems[rng.below(elems.size())];
            const Vec& b = elems[rng.below(elems.size())];
            Vec pa = sp.pair_vector(a), pb = sp.pair_vector(b), pab = sp.pair_vector(H.add(a, b));
            for (std::size_t i = 0; i < pa.size(); ++i)
                if (pab[i] != (pa[i] + pb[i]) % sp.coeff.q) out.pairing_additive = false;
        }
    }
    // well-defined on the presented divided power module: relators pair to 0
    out.kills_relators = true;
    {
        std::vector<Vec> elems = H.elements();
        for (std::size_t rr = 0; rr < sp.gamma.module.rel.rows; ++rr) {
            Vec rel = sp.gamma.module.rel.row(rr);
            for (auto& s : elems) {
                Vec pv = sp.pair_vector(s);
                std::uint64_t acc = 0;
                for (std::size_t i = 0; i < pv.size(); ++i)
                    acc = (acc + rel[i] % sp.coeff.q * pv[i]) % sp.coeff.q;
                if (acc) out.kills_relators = false;
            }
        }
    }
    // the induced map into the dual is a bijection
    {
        DualResult dual = pontryagin_dual(sp.gamma.module);
        std::set<Vec> images;
        bool all_solve = true;
        for (auto& s : H.elements()) {
            Vec pv = sp.pair_vector(s);
            auto c = solve_left(dual.hom_generators, pv);
            if (!c) {
                all_solve = false;
                break;
            }
            images.insert(dual.module.reduce(*c));
        }
        out.bijective = all_solve && images.size() == H.order && dual.module.size() == H.order;
        out.invariants = invariant_factors(sp.gamma.module);
    }
    // naturality square with the level below (only for r >= 2)
    out.natural_square = true;
    if (r >= 2) {
        SectionPairing sp1 = section_pairing(p, d, r - 1);
        SectionModel small = sp1.sections;
        std::uint64_t q1 = pow_u64(p, r - 1);
        for (auto& s : H.elements()) {
            Vec restricted = H.restrict_to(small, s);
            Vec pv_small = sp1.pair_vector(restricted);
            // shift: Ver(m'_a) = p * m_{p a}
            for (std::size_t i = 0; i < sp1.gamma.basis.size(); ++i) {
                MultiIndex big_index(sp1.gamma.basis[i].size());
                for (std::size_t k = 0; k < big_index.size(); ++k)
                    big_index[k] = sp1.gamma.basis[i][k] * p;
                std::uint64_t lhs = p % sp.coeff.q * sp.pair_basis(big_index, s) % sp.coeff.q;
                std::uint64_t rhs = p % sp.coeff.q * (pv_small[i] % q1) % sp.coeff.q;
                if (lhs != rhs) out.natural_square = false;
            }
        }
    }
    return out;
}

// ----------------------- tautological W_2 lift -------------------------

namespace {

// rho on chart i: (w_1..w_d) -> sum_k w_k tau(e_k / e_i)
WittFrac chart_rho(std::uint32_t p, const GradedAlgebra& ring, std::uint32_t d, std::uint32_t i,
                   const std::vector<WittFrac>& w) {
    WittFrac acc(w[0].size(), HFrac::zero(ring));
    for (std::uint32_t k = 0; k < d; ++k) {
        WittFrac t = wf_teich(ring, static_cast<std::uint32_t>(w[k].size()),
                              HFrac::variable_ratio(ring, k, i));
        acc = wf_add(p, acc, wf_mul(p, w[k], t));
    }
    return acc;
}

}  // namespace

TautologicalLift tautological_w2_lift(std::uint32_t p, std::uint32_t d) {
    TautologicalLift t;
    t.p = p;
    t.d = d;
    t.sym = GradedAlgebra::symmetric(p, d, 72);
    const GradedAlgebra& ring = t.sym;
    auto zero2 = [&] { return WittFrac(2, HFrac::zero(ring)); };
    auto teich = [&](const HFrac& x) { return wf_teich(ring, 2, x); };
    t.kernel_basis.resize(d);
    t.surjective_per_chart = true;
    t.kernel_verified = true;
    t.reduction_matches_classical = true;
    Rng rng(17);
    for (std::uint32_t i = 0; i < d; ++i) {
        // surjectivity: the slot-i inclusion hits any target; exercise it on
        // the multiplicative generators and a random element
        {
            std::vector<WittFrac> w(d, zero2());
            HFrac x = HFrac::variable_ratio(ring, (i + 1) % d, i);
            w[i] = teich(x);
            WittFrac img = chart_rho(p, ring, d, i, w);
            if (!wf_equal(img, teich(x))) t.surjective_per_chart = false;
        }
        // kernel basis h_k = (slot i: -tau(e_k/e_i), slot k: 1), k != i
        for (std::uint32_t k = 0; k < d; ++k) {
            if (k == i) continue;
            std::vector<WittFrac> h(d, zero2());
            h[i] = wf_neg(p, teich(HFrac::variable_ratio(ring, k, i)));
            h[k] = teich(HFrac::one(ring));
            WittFrac img = chart_rho(p, ring, d, i, h);
            bool iszero = true;
            for (auto& comp : img) iszero &= comp.is_zero();
            if (!iszero) t.kernel_verified = false;
            // mod-p reduction equals the classical kernel vector
            if (!h[i][0].equals(
                    HFrac::variable_ratio(ring, k, i).scale(p - 1)))
                t.reduction_matches_classical = false;
            t.kernel_basis[i].push_back(h);
        }
        // generation identity: random w with w_i := -sum_{k != i} w_k tau(x_k)
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<WittFrac> w(d, zero2());
            for (std::uint32_t k = 0; k < d; ++k) {
                if (k == i) continue;
                // small random witt vector over the chart ring
                HFrac a = HFrac::variable_ratio(ring, k, i).scale(rng.below(p));
                HFrac b = HFrac::one(ring).scale(rng.below(p));
                w[k] = wf_add(p, teich(a), WittFrac{HFrac::zero(ring), b});
            }
            WittFrac sum = zero2();
            for (std::uint32_t k = 0; k < d; ++k) {
                if (k == i) continue;
                sum = wf_add(p, sum, wf_mul(p, w[k], teich(HFrac::variable_ratio(ring, k, i))));
            }
            w[i] = wf_neg(p, sum);
            WittFrac img = chart_rho(p, ring, d, i, w);
            bool iszero = true;
            for (auto& comp : img) iszero &= comp.is_zero();
            if (!iszero) t.kernel_verified = false;
            // and the generation identity w = sum_{k != i} w_k h_k holds by slots
        }
    }
    if (d == 2) {
        // kernel transition: basis on chart 0: (tau(e_1/e_0), -1); on chart 1:
        // (1, -tau(e_0/e_1)); they differ by the unit tau(e_1/e_0):
        // kappa_0 = tau(e_1/e_0) * kappa_1, so sections transform by the
        // multiplicative lift of the transition of the (-1)-twist.
        std::vector<WittFrac> k0(2, zero2()), k1(2, zero2());
        k0[0] = teich(HFrac::variable_ratio(ring, 1, 0));
        k0[1] = wf_neg(p, teich(HFrac::one(ring)));
        k1[0] = teich(HFrac::one(ring));
        k1[1] = wf_neg(p, teich(HFrac::variable_ratio(ring, 0, 1)));
        // rho-kernel membership of both
        bool ok = true;
        {
            WittFrac i0 = chart_rho(p, ring, 2, 0, k0);
            WittFrac i1 = chart_rho(p, ring, 2, 1, k1);
            for (auto& cmp : i0) ok &= cmp.is_zero();
            for (auto& cmp : i1) ok &= cmp.is_zero();
        }
        WittFrac u = teich(HFrac::variable_ratio(ring, 1, 0));  // tau(e_1/e_0)
        for (int slot = 0; slot < 2; ++slot) {
            WittFrac lhs = k0[slot];
            WittFrac rhs = wf_mul(p, u, k1[slot]);
            ok &= wf_equal(lhs, rhs);
        }
        t.line_transition_matches = ok;
    }
    return t;
}

bool twist_checks(std::uint32_t p) {
    GradedAlgebra ring = GradedAlgebra::symmetric(p, 2, 72);
    auto teich = [&](const HFrac& x) { return wf_teich(ring, 2, x); };
    // twisting the rank-1 kernel data by the Witt lift of the (+1)-twist
    // trivializes the transition: tau(e_0/e_1) tau(e_1/e_0) = 1
    WittFrac t_m1 = teich(HFrac::variable_ratio(ring, 1, 0));  // transition of the kernel
    WittFrac t_p1 = teich(HFrac::variable_ratio(ring, 0, 1));  // transition of the (+1)-twist
    WittFrac prod = wf_mul(p, t_m1, t_p1);
    WittFrac one = teich(HFrac::one(ring));
    if (!wf_equal(prod, one)) return false;
    // trivial twist: multiplying by tau(1) changes nothing
    if (!wf_equal(wf_mul(p, t_m1, one), t_m1)) return false;
    // double twist associativity: (t * t') * t'' = t * (t' * t'')
    WittFrac a = teich(HFrac::variable_ratio(ring, 0, 1));
    WittFrac b = teich(HFrac::variable_ratio(ring, 1, 0));
    WittFrac c = wf_add(p, a, teich(HFrac::one(ring)));  // a non-multiplicative unit
    if (!wf_equal(wf_mul(p, wf_mul(p, a, b), c), wf_mul(p, a, wf_mul(p, b, c)))) return false;
    return true;
}

}  // namespace wittkit
