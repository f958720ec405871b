#include "wittkit/finring.hpp"

#include <algorithm>
#include <memory>

#include "wittkit/fpalg.hpp"

namespace wittkit {

namespace {

using AddFn = std::function<std::size_t(std::size_t, std::size_t)>;

struct SubDecomp {
    std::vector<std::size_t> basis;  // element ids at this level
    std::vector<std::uint32_t> exps;
    std::function<Vec(std::size_t)> coords;
};

// recursive basis extraction: a cyclic subgroup of maximal order is a
// direct summand; quotient, recurse, and lift the quotient basis with the
// exact-order correction.
SubDecomp decompose_rec(std::uint32_t p, const std::vector<std::size_t>& elems, const AddFn& add,
                        std::size_t zero) {
    if (elems.size() == 1) {
        return {{}, {}, [](std::size_t) { return Vec{}; }};
    }
    auto p_mult = [&, add](std::size_t x, std::uint32_t e) {
        std::size_t cur = x;
        for (std::uint32_t j = 0; j < e; ++j) {
            std::size_t s = zero;
            for (std::uint32_t i = 0; i < p; ++i) s = add(s, cur);
            cur = s;
        }
        return cur;
    };
    // element of maximal order
    std::size_t g = zero;
    std::uint32_t e = 0;
    for (auto x : elems) {
        std::size_t cur = x;
        std::uint32_t k = 0;
        while (cur != zero) {
            cur = p_mult(cur, 1);
            ++k;
            if (k > 64) throw std::logic_error("decompose: not a p-group");
        }
        if (k > e) {
            e = k;
            g = x;
        }
    }
    // discrete log table of <g>
    auto dlog = std::make_shared<std::map<std::size_t, std::uint64_t>>();
    std::uint64_t pe = pow_u64(p, e);
    {
        std::size_t cur = zero;
        for (std::uint64_t k = 0; k < pe; ++k) {
            (*dlog)[cur] = k;
            cur = add(cur, g);
        }
    }
    // cosets of <g>: canonical representative = minimal id
    auto canon = std::make_shared<std::map<std::size_t, std::size_t>>();
    std::vector<std::size_t> quotient;
    for (auto x : elems) {
        if (canon->count(x)) continue;
        std::size_t best = x, cur = x;
        std::vector<std::size_t> orbit;
        for (std::uint64_t k = 0; k < pe; ++k) {
            orbit.push_back(cur);
            best = std::min(best, cur);
            cur = add(cur, g);
        }
        for (auto y : orbit) (*canon)[y] = best;
        quotient.push_back(best);
    }
    std::sort(quotient.begin(), quotient.end());
    quotient.erase(std::unique(quotient.begin(), quotient.end()), quotient.end());
    AddFn qadd = [add, canon](std::size_t x, std::size_t y) { return canon->at(add(x, y)); };
    std::size_t qzero = canon->at(zero);
    SubDecomp sub = decompose_rec(p, quotient, qadd, qzero);
    // negation at this level via orders
    auto neg = [add, zero](std::size_t x) {
        if (x == zero) return zero;
        std::size_t acc = x, last = zero;
        while (acc != zero) {
            last = acc;
            acc = add(acc, x);
        }
        return last;
    };
    SubDecomp out;
    out.basis.push_back(g);
    out.exps.push_back(e);
    for (std::size_t i = 0; i < sub.basis.size(); ++i) {
        std::size_t rep = sub.basis[i];
        std::uint32_t f = sub.exps[i];
        std::size_t pfr = p_mult(rep, f);
        auto it = dlog->find(pfr);
        if (it == dlog->end()) throw std::logic_error("decompose: lift not in pivot subgroup");
        std::uint64_t c = it->second;
        std::uint64_t pf = pow_u64(p, f);
        if (c % pf != 0) throw std::logic_error("decompose: lift correction not divisible");
        // corrected = rep - (c / p^f) g
        std::uint64_t k = (pe - c / pf) % pe;
        std::size_t corrected = rep;
        std::size_t gk = zero;
        for (std::uint64_t j = 0; j < k; ++j) gk = add(gk, g);
        corrected = add(rep, gk);
        if (p_mult(corrected, f) != zero) throw std::logic_error("decompose: lifted order wrong");
        out.basis.push_back(corrected);
        out.exps.push_back(f);
    }
    auto subcoords = sub.coords;
    std::vector<std::size_t> lifted(out.basis.begin() + 1, out.basis.end());
    std::vector<std::uint32_t> lifted_exps(out.exps.begin() + 1, out.exps.end());
    out.coords = [p, add, zero, canon, dlog, subcoords, lifted, lifted_exps, neg,
                  g](std::size_t x) {
        Vec q = subcoords(canon->at(x));
        // residual = x - sum q_i * lifted_i lands in <g>
        std::size_t acc = x;
        for (std::size_t i = 0; i < lifted.size(); ++i) {
            std::uint64_t c = q[i];
            std::size_t term = zero;
            for (std::uint64_t j = 0; j < c; ++j) term = add(term, lifted[i]);
            acc = add(acc, neg(term));
        }
        Vec out_coords;
        out_coords.push_back(dlog->at(acc));
        for (auto c : q) out_coords.push_back(c);
        return out_coords;
    };
    (void)lifted_exps;
    return out;
}

}  // namespace

FinAbGroup decompose_abelian_p_group(std::uint32_t p, std::size_t count, const AddFn& add,
                                     std::size_t zero) {
    check_guard(count, "decompose_abelian_p_group");
    std::vector<std::size_t> elems(count);
    for (std::size_t i = 0; i < count; ++i) elems[i] = i;
    SubDecomp d = decompose_rec(p, elems, add, zero);
    FinAbGroup g;
    g.p = p;
    g.basis = d.basis;
    g.exps = d.exps;
    g.coords_of.assign(count, Vec{});
    std::uint64_t total = 1;
    for (auto e : g.exps) total *= pow_u64(p, e);
    if (total != count) throw std::logic_error("decompose: basis does not span the group");
    for (std::size_t x = 0; x < count; ++x) {
        Vec c = d.coords(x);
        g.coords_of[x] = c;
        if (g.index_of.count(c)) throw std::logic_error("decompose: coordinates collide");
        g.index_of[c] = x;
    }
    return g;
}

FiniteRing::FiniteRing(std::uint32_t p_, std::vector<std::uint32_t> exps_,
                       std::vector<std::vector<Vec>> prod_, Vec unit_)
    : p(p_), exps(std::move(exps_)), prod(std::move(prod_)), unit(std::move(unit_)) {
    if (!is_prime(p)) throw std::invalid_argument("FiniteRing: p not prime");
    std::size_t r = exps.size();
    if (prod.size() != r || unit.size() != r) throw std::invalid_argument("FiniteRing: shape");
    for (auto& row : prod) {
        if (row.size() != r) throw std::invalid_argument("FiniteRing: shape");
        for (auto& v : row)
            if (v.size() != r) throw std::invalid_argument("FiniteRing: entry shape");
    }
    for (auto& row : prod)
        for (auto& v : row) {
            Vec w = reduce(v);
            if (w != v) throw std::invalid_argument("FiniteRing: table entries not reduced");
        }
    unit = reduce(unit);
    // commutativity
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (prod[i][j] != prod[j][i]) throw std::invalid_argument("FiniteRing: not commutative");
    // distributive/bilinear consistency with the additive orders: p^exps[i] g_i = 0
    // forces p^exps[i] * prod[i][j] = 0, i.e. reduce(scale(p^exps[i], prod[i][j])) == 0
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            Vec v = scale(static_cast<std::int64_t>(order_of_factor(i)), prod[i][j]);
            if (!is_zero(v)) throw std::invalid_argument("FiniteRing: table violates additive orders");
        }
    // unit and associativity on generators
    for (std::size_t i = 0; i < r; ++i) {
        Vec gi(r, 0);
        gi[i] = 1;
        if (mul(unit, gi) != reduce(gi)) throw std::invalid_argument("FiniteRing: unit fails");
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k) {
                Vec gi(r, 0), gj(r, 0), gk(r, 0);
                gi[i] = 1;
                gj[j] = 1;
                gk[k] = 1;
                if (mul(mul(gi, gj), gk) != mul(gi, mul(gj, gk)))
                    throw std::invalid_argument("FiniteRing: not associative");
            }
}

FiniteRing FiniteRing::modpn_univariate(std::uint32_t p, std::uint32_t n, const Vec& monic) {
    if (monic.size() < 2 || monic.back() != 1)
        throw std::invalid_argument("modpn_univariate: need monic of degree >= 1");
    Mod mod(p, n);
    std::size_t d = monic.size() - 1;
    std::vector<Vec> powv(2 * d, Vec(d, 0));
    for (std::size_t i = 0; i < d; ++i) powv[i][i] = 1;
    for (std::size_t i = d; i < 2 * d; ++i) {
        Vec cur(d + 1, 0);
        for (std::size_t j = 0; j < d; ++j) cur[j + 1] = powv[i - 1][j];
        std::uint64_t top = cur[d] % mod.q;
        for (std::size_t j = 0; j < d; ++j)
            cur[j] = (cur[j] + (mod.q - monic[j] % mod.q) * top) % mod.q;
        powv[i] = Vec(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(d));
    }
    std::vector<std::vector<Vec>> table(d, std::vector<Vec>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) table[i][j] = powv[i + j];
    Vec unit(d, 0);
    unit[0] = 1;
    return FiniteRing(p, std::vector<std::uint32_t>(d, n), std::move(table), std::move(unit));
}

FiniteRing FiniteRing::modpn(std::uint32_t p, std::uint32_t n) {
    return FiniteRing(p, {n}, {{Vec{1}}}, Vec{1});
}

FiniteRing FiniteRing::from_fp_algebra(const FpAlgebra& a) {
    std::vector<std::vector<Vec>> table(a.dim, std::vector<Vec>(a.dim));
    for (std::uint32_t i = 0; i < a.dim; ++i)
        for (std::uint32_t j = 0; j < a.dim; ++j) table[i][j] = a.table[i * a.dim + j];
    return FiniteRing(a.p, std::vector<std::uint32_t>(a.dim, 1), std::move(table), a.unit);
}

std::uint32_t FiniteRing::scalar_level() const {
    std::uint32_t m = 1;
    for (auto e : exps) m = std::max(m, e);
    return m;
}

std::uint64_t FiniteRing::size() const {
    std::uint64_t s = 1;
    for (auto e : exps) s *= pow_u64(p, e);
    return s;
}

std::uint64_t FiniteRing::characteristic() const {
    Vec x = unit;
    std::uint64_t c = 1;
    while (!is_zero(x)) {
        Vec y = x;
        for (std::uint32_t i = 1; i < p; ++i) y = add(y, x);
        x = y;
        c *= p;
    }
    return is_zero(unit) ? 1 : c;
}

Vec FiniteRing::reduce(const Vec& x) const {
    Vec r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = x[i] % order_of_factor(i);
    return r;
}

Vec FiniteRing::add(const Vec& a, const Vec& b) const {
    Vec r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = (a[i] + b[i]) % order_of_factor(i);
    return r;
}

Vec FiniteRing::sub(const Vec& a, const Vec& b) const {
    Vec r(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
        std::uint64_t o = order_of_factor(i);
        r[i] = (a[i] % o + o - b[i] % o) % o;
    }
    return r;
}

Vec FiniteRing::neg(const Vec& a) const { return sub(zero(), a); }

Vec FiniteRing::scale(std::int64_t c, const Vec& a) const {
    Vec r(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
        std::uint64_t o = order_of_factor(i);
        std::int64_t cc = c % static_cast<std::int64_t>(o);
        if (cc < 0) cc += static_cast<std::int64_t>(o);
        r[i] = a[i] % o * static_cast<std::uint64_t>(cc) % o;
    }
    return r;
}

Vec FiniteRing::mul(const Vec& a, const Vec& b) const {
    Vec r = zero();
    for (std::size_t i = 0; i < rank(); ++i) {
        if (!(a[i] % order_of_factor(i))) continue;
        for (std::size_t j = 0; j < rank(); ++j) {
            if (!(b[j] % order_of_factor(j))) continue;
            std::uint64_t c = a[i] * b[j];  // orders < 2^31 so this fits
            const Vec& t = prod[i][j];
            for (std::size_t k = 0; k < rank(); ++k) {
                std::uint64_t o = order_of_factor(k);
                r[k] = (r[k] + c % o * (t[k] % o)) % o;
            }
        }
    }
    return r;
}

Vec FiniteRing::pow(const Vec& a, std::uint64_t e) const {
    Vec r = unit, b = reduce(a);
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

bool FiniteRing::is_zero(const Vec& a) const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (a[i] % order_of_factor(i)) return false;
    return true;
}

std::vector<Vec> FiniteRing::elements() const {
    check_guard(size(), "FiniteRing::elements");
    std::vector<Vec> out;
    out.reserve(size());
    Vec cur = zero();
    while (true) {
        out.push_back(cur);
        std::size_t k = 0;
        while (k < rank()) {
            if (++cur[k] < order_of_factor(k)) break;
            cur[k] = 0;
            ++k;
        }
        if (k == rank()) break;
    }
    if (rank() == 0) out = {Vec{}};
    return out;
}

ZpnModule FiniteRing::as_module(std::uint32_t big_n) const {
    if (big_n < scalar_level()) throw std::invalid_argument("as_module: level too small");
    Mod mod(p, big_n);
    ZpnMat rel(mod, rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i) rel.at(i, i) = pow_u64(p, exps[i]) % mod.q;
    return ZpnModule(mod, rank(), rel);
}

RingHom::RingHom(FiniteRing dom, FiniteRing cod, std::vector<Vec> im)
    : domain(std::move(dom)), codomain(std::move(cod)), images(std::move(im)) {
    if (images.size() != domain.rank()) throw std::invalid_argument("RingHom: image count");
    if (domain.p != codomain.p) throw std::invalid_argument("RingHom: characteristic mismatch");
    for (std::size_t i = 0; i < images.size(); ++i) {
        images[i] = codomain.reduce(images[i]);
        // additive well-definedness: order of g_i kills its image
        Vec v = codomain.scale(static_cast<std::int64_t>(domain.order_of_factor(i)), images[i]);
        if (!codomain.is_zero(v)) throw std::invalid_argument("RingHom: order not respected");
    }
    if (apply(domain.unit) != codomain.one()) throw std::invalid_argument("RingHom: unit fails");
    for (std::size_t i = 0; i < domain.rank(); ++i)
        for (std::size_t j = 0; j < domain.rank(); ++j) {
            Vec gi = domain.zero(), gj = domain.zero();
            gi[i] = 1;
            gj[j] = 1;
            if (apply(domain.mul(gi, gj)) != codomain.mul(images[i], images[j]))
                throw std::invalid_argument("RingHom: not multiplicative");
        }
}

RingHom RingHom::identity(const FiniteRing& r) {
    std::vector<Vec> im;
    for (std::size_t i = 0; i < r.rank(); ++i) {
        Vec g = r.zero();
        g[i] = 1;
        im.push_back(g);
    }
    return RingHom(r, r, std::move(im));
}

Vec RingHom::apply(const Vec& x) const {
    Vec r = codomain.zero();
    for (std::size_t i = 0; i < domain.rank(); ++i) {
        std::uint64_t c = x[i] % domain.order_of_factor(i);
        if (!c) continue;
        r = codomain.add(r, codomain.scale(static_cast<std::int64_t>(c), images[i]));
    }
    return r;
}

RingHom RingHom::compose(const RingHom& then) const {
    std::vector<Vec> im;
    for (auto& v : images) im.push_back(then.apply(v));
    return RingHom(domain, then.codomain, std::move(im));
}

ZpnMat RingHom::image_span_mat(std::uint32_t big_n) const {
    Mod mod(codomain.p, big_n);
    ZpnMat m(mod, domain.rank(), codomain.rank());
    for (std::size_t i = 0; i < domain.rank(); ++i)
        for (std::size_t j = 0; j < codomain.rank(); ++j) m.at(i, j) = images[i][j] % mod.q;
    ZpnModule cm = codomain.as_module(big_n);
    return howell_form(m.vstack(cm.rel));
}

bool RingHom::is_surjective() const {
    std::uint32_t n = std::max(domain.scalar_level(), codomain.scalar_level());
    ZpnMat img = image_span_mat(n);
    ZpnModule cm = codomain.as_module(n);
    ZpnMat full = howell_form(ZpnMat::identity(Mod(codomain.p, n), codomain.rank()));
    return img == full;
}

ZpnMat RingHom::kernel_span(std::uint32_t big_n) const {
    Mod mod(domain.p, big_n);
    ZpnMat m(mod, domain.rank(), codomain.rank());
    for (std::size_t i = 0; i < domain.rank(); ++i)
        for (std::size_t j = 0; j < codomain.rank(); ++j) m.at(i, j) = images[i][j] % mod.q;
    ZpnModule dm = domain.as_module(big_n);
    ZpnModule cm = codomain.as_module(big_n);
    ModuleMap f(dm, cm, m);
    auto k = kernel(f);
    return howell_form(k.inclusion.matrix.vstack(dm.rel));
}

bool RingHom::is_injective() const {
    std::uint32_t n = std::max(domain.scalar_level(), codomain.scalar_level());
    ZpnMat k = kernel_span(n);
    ZpnModule dm = domain.as_module(n);
    return k == dm.rel;
}

bool is_ideal(const FiniteRing& r, const ZpnMat& rows) {
    std::uint32_t n = r.scalar_level();
    ZpnModule m = r.as_module(n);
    ZpnMat span = howell_form(rows.vstack(m.rel));
    for (std::size_t i = 0; i < rows.rows; ++i)
        for (std::size_t j = 0; j < r.rank(); ++j) {
            Vec gj = r.zero();
            gj[j] = 1;
            Vec prod = r.mul(r.reduce(rows.row(i)), gj);
            if (!in_row_span(span, prod)) return false;
        }
    return true;
}

SmithCoords SmithCoords::of(const ZpnModule& m) {
    SmithCoords sc;
    sc.mod = m.mod;
    SmithResult s = smith_form(m.rel.rows ? m.rel : ZpnMat(m.mod, 0, m.ambient));
    sc.w = s.w;
    if (m.rel.rows == 0) sc.w = ZpnMat::identity(m.mod, m.ambient);
    // invert w over Z/q by solving w * winv = I column-wise
    sc.winv = ZpnMat(m.mod, m.ambient, m.ambient);
    ZpnMat wt = sc.w.transpose();
    for (std::size_t i = 0; i < m.ambient; ++i) {
        Vec ei(m.ambient, 0);
        ei[i] = 1;
        auto x = solve_left(wt, ei);  // x * w^T = e_i  =>  w * x^T = e_i^T
        if (!x) throw std::logic_error("SmithCoords: w not invertible");
        for (std::size_t j = 0; j < m.ambient; ++j) sc.winv.at(j, i) = (*x)[j];
    }
    std::vector<std::uint32_t> vfull(m.ambient, m.mod.n);
    std::size_t dr = std::min(s.d.rows, s.d.cols);
    for (std::size_t i = 0; i < dr; ++i)
        if (s.d.at(i, i) != 0) vfull[i] = m.mod.val(s.d.at(i, i));
    if (m.rel.rows == 0) vfull.assign(m.ambient, m.mod.n);
    for (std::size_t i = 0; i < m.ambient; ++i)
        if (vfull[i] > 0) {
            sc.keep.push_back(i);
            sc.vexp.push_back(vfull[i]);
        }
    return sc;
}

Vec SmithCoords::project(const Vec& x) const {
    std::size_t amb = w.rows;
    Vec y(amb, 0);
    for (std::size_t j = 0; j < amb; ++j) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < amb; ++i) sum = (sum + x[i] % mod.q * w.at(i, j)) % mod.q;
        y[j] = sum;
    }
    Vec out;
    for (std::size_t k = 0; k < keep.size(); ++k)
        out.push_back(y[keep[k]] % pow_u64(mod.p, vexp[k]));
    return out;
}

Vec SmithCoords::section(std::size_t k) const { return winv.row(keep[k]); }

QuotientRing quotient_ring(const FiniteRing& r, const ZpnMat& ideal_rows) {
    std::uint32_t n = r.scalar_level();
    Mod mod(r.p, n);
    ZpnModule m0 = r.as_module(n);
    ZpnMat rel = howell_form(ideal_rows.rows ? ideal_rows.vstack(m0.rel) : m0.rel);
    ZpnModule m(mod, r.rank(), rel);
    SmithCoords sc = SmithCoords::of(m);
    auto project = [&](const Vec& x) { return sc.project(x); };
    std::vector<Vec> section;
    for (std::size_t k = 0; k < sc.keep.size(); ++k) section.push_back(r.reduce(sc.section(k)));
    std::vector<std::uint32_t> qexps = sc.exps();
    std::vector<std::vector<Vec>> table(sc.keep.size(), std::vector<Vec>(sc.keep.size()));
    for (std::size_t i = 0; i < sc.keep.size(); ++i)
        for (std::size_t j = 0; j < sc.keep.size(); ++j)
            table[i][j] = project(r.mul(section[i], section[j]));
    FiniteRing q(r.p, std::move(qexps), std::move(table), project(r.unit));
    std::vector<Vec> projim;
    for (std::size_t i = 0; i < r.rank(); ++i) {
        Vec gi = r.zero();
        gi[i] = 1;
        projim.push_back(project(gi));
    }
    RingHom proj(r, q, std::move(projim));
    return {std::move(q), std::move(proj), std::move(section)};
}

EnumeratedRing ring_from_enumeration(std::uint32_t p, const EnumRing& e) {
    FinAbGroup g = decompose_abelian_p_group(p, e.count, e.add, e.zero);
    std::size_t r = g.exps.size();
    std::vector<std::vector<Vec>> table(r, std::vector<Vec>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) table[i][j] = g.coords_of[e.mul(g.basis[i], g.basis[j])];
    FiniteRing ring(p, g.exps, std::move(table), g.coords_of[e.one]);
    return {std::move(ring), std::move(g)};
}

}  // namespace wittkit
