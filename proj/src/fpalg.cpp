#include "wittkit/fpalg.hpp"

#include <algorithm>
#include <functional>

#include "wittkit/finring.hpp"

namespace wittkit {

FpAlgebra::FpAlgebra(std::uint32_t p_, std::vector<std::string> labels, std::vector<Vec> mult_table,
                     Vec unit_vec)
    : p(p_), dim(static_cast<std::uint32_t>(labels.size())), basis_labels(std::move(labels)),
      table(std::move(mult_table)), unit(std::move(unit_vec)) {
    if (!is_prime(p)) throw std::invalid_argument("FpAlgebra: p not prime");
    if (dim == 0) throw std::invalid_argument("FpAlgebra: zero dimension");
    if (table.size() != static_cast<std::size_t>(dim) * dim || unit.size() != dim)
        throw std::invalid_argument("FpAlgebra: table shape mismatch");
    for (auto& v : table) {
        if (v.size() != dim) throw std::invalid_argument("FpAlgebra: table entry size");
        for (auto& c : v) c %= p;
    }
    for (auto& c : unit) c %= p;
    // commutativity, unit, associativity: exhaustive on basis triples
    for (std::uint32_t i = 0; i < dim; ++i)
        for (std::uint32_t j = 0; j < dim; ++j)
            if (table[i * dim + j] != table[j * dim + i])
                throw std::invalid_argument("FpAlgebra: not commutative");
    for (std::uint32_t i = 0; i < dim; ++i) {
        Vec ei(dim, 0);
        ei[i] = 1;
        if (mul(unit, ei) != ei) throw std::invalid_argument("FpAlgebra: unit fails");
    }
    for (std::uint32_t i = 0; i < dim; ++i)
        for (std::uint32_t j = 0; j < dim; ++j)
            for (std::uint32_t k = 0; k < dim; ++k) {
                Vec ei(dim, 0), ej(dim, 0), ek(dim, 0);
                ei[i] = 1;
                ej[j] = 1;
                ek[k] = 1;
                if (mul(mul(ei, ej), ek) != mul(ei, mul(ej, ek)))
                    throw std::invalid_argument("FpAlgebra: not associative");
            }
}

FpAlgebra FpAlgebra::prime_field(std::uint32_t p) {
    return FpAlgebra(p, {"1"}, {Vec{1}}, Vec{1});
}

FpAlgebra FpAlgebra::quadratic_field(std::uint32_t p) {
    if (p == 2) return univariate_quotient(2, Vec{1, 1, 1}, "w");       // w^2 + w + 1 = 0
    if (p == 3) return univariate_quotient(3, Vec{1, 0, 1}, "w");       // w^2 + 1 = 0
    throw std::invalid_argument("quadratic_field: only p = 2, 3 provided");
}

FpAlgebra FpAlgebra::dual_numbers(std::uint32_t p) {
    return univariate_quotient(p, Vec{0, 0, 1}, "t");  // t^2 = 0
}

FpAlgebra FpAlgebra::univariate_quotient(std::uint32_t p, const Vec& monic, const std::string& var) {
    if (monic.size() < 2 || monic.back() != 1)
        throw std::invalid_argument("univariate_quotient: need a monic polynomial of degree >= 1");
    std::uint32_t d = static_cast<std::uint32_t>(monic.size() - 1);
    // powers of t reduced mod f
    std::vector<Vec> pow(2 * d, Vec(d, 0));
    for (std::uint32_t i = 0; i < d; ++i) pow[i][i] = 1;
    for (std::uint32_t i = d; i < 2 * d; ++i) {
        // t^i = t * t^{i-1}, then reduce the top coefficient
        Vec prev = pow[i - 1];
        Vec cur(d + 1, 0);
        for (std::uint32_t j = 0; j < d; ++j) cur[j + 1] = prev[j];
        std::uint64_t top = cur[d] % p;
        for (std::uint32_t j = 0; j < d; ++j)
            cur[j] = (cur[j] + (p - monic[j] % p) * top) % p;
        pow[i] = Vec(cur.begin(), cur.begin() + d);
    }
    std::vector<Vec> table(static_cast<std::size_t>(d) * d);
    for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j) table[i * d + j] = pow[i + j];
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < d; ++i)
        labels.push_back(i == 0 ? "1" : (i == 1 ? var : var + "^" + std::to_string(i)));
    Vec unit(d, 0);
    unit[0] = 1;
    return FpAlgebra(p, std::move(labels), std::move(table), std::move(unit));
}

FpAlgebra FpAlgebra::tensor_with(const FpAlgebra& other) const {
    if (p != other.p) throw std::invalid_argument("tensor_with: different characteristic");
    std::uint32_t d = dim + other.dim;
    std::vector<std::string> labels;
    for (auto& l : basis_labels) labels.push_back("(" + l + ",0)");
    for (auto& l : other.basis_labels) labels.push_back("(0," + l + ")");
    auto emb = [&](const Vec& a, const Vec& b) {
        Vec v(d, 0);
        std::copy(a.begin(), a.end(), v.begin());
        std::copy(b.begin(), b.end(), v.begin() + dim);
        return v;
    };
    std::vector<Vec> t(static_cast<std::size_t>(d) * d, Vec(d, 0));
    for (std::uint32_t i = 0; i < dim; ++i)
        for (std::uint32_t j = 0; j < dim; ++j) {
            Vec ei(dim, 0), ej(dim, 0);
            ei[i] = 1;
            ej[j] = 1;
            t[i * d + j] = emb(mul(ei, ej), Vec(other.dim, 0));
        }
    for (std::uint32_t i = 0; i < other.dim; ++i)
        for (std::uint32_t j = 0; j < other.dim; ++j) {
            Vec ei(other.dim, 0), ej(other.dim, 0);
            ei[i] = 1;
            ej[j] = 1;
            t[(dim + i) * d + (dim + j)] = emb(Vec(dim, 0), other.mul(ei, ej));
        }
    return FpAlgebra(p, std::move(labels), std::move(t), emb(unit, other.unit));
}

Vec FpAlgebra::add(const Vec& a, const Vec& b) const {
    Vec r(dim);
    for (std::uint32_t i = 0; i < dim; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
}

Vec FpAlgebra::sub(const Vec& a, const Vec& b) const {
    Vec r(dim);
    for (std::uint32_t i = 0; i < dim; ++i) r[i] = (a[i] + p - b[i] % p) % p;
    return r;
}

Vec FpAlgebra::scale(std::uint64_t c, const Vec& a) const {
    c %= p;
    Vec r(dim);
    for (std::uint32_t i = 0; i < dim; ++i) r[i] = a[i] * c % p;
    return r;
}

Vec FpAlgebra::mul(const Vec& a, const Vec& b) const {
    Vec r(dim, 0);
    for (std::uint32_t i = 0; i < dim; ++i) {
        if (!a[i]) continue;
        for (std::uint32_t j = 0; j < dim; ++j) {
            if (!b[j]) continue;
            std::uint64_t c = a[i] * b[j] % p;
            const Vec& t = table[i * dim + j];
            for (std::uint32_t k = 0; k < dim; ++k) r[k] = (r[k] + c * t[k]) % p;
        }
    }
    return r;
}

Vec FpAlgebra::pow(const Vec& a, std::uint64_t e) const {
    Vec r = unit, b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

bool FpAlgebra::is_zero(const Vec& a) const {
    return std::all_of(a.begin(), a.end(), [this](std::uint64_t c) { return c % p == 0; });
}

std::uint64_t FpAlgebra::size() const { return pow_u64(p, dim); }

std::vector<Vec> FpAlgebra::elements() const {
    std::uint64_t count = size();
    check_guard(count, "FpAlgebra::elements");
    std::vector<Vec> out;
    out.reserve(count);
    Vec cur(dim, 0);
    while (true) {
        out.push_back(cur);
        std::uint32_t k = 0;
        while (k < dim) {
            if (++cur[k] < p) break;
            cur[k] = 0;
            ++k;
        }
        if (k == dim) break;
    }
    return out;
}

bool FpAlgebra::is_unit_elem(const Vec& a) const {
    // finite ring: a is a unit iff multiplication by a is injective
    Mod fp(p, 1);
    ZpnMat m(fp, dim, dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
        Vec ei(dim, 0);
        ei[i] = 1;
        Vec r = mul(ei, a);
        for (std::uint32_t j = 0; j < dim; ++j) m.at(i, j) = r[j];
    }
    return nullspace(m).rows == 0;
}

AlgebraMorphism::AlgebraMorphism(FpAlgebra dom, FpAlgebra cod, std::vector<Vec> images_of_basis)
    : domain(std::move(dom)), codomain(std::move(cod)), images(std::move(images_of_basis)) {
    if (domain.p != codomain.p || images.size() != domain.dim)
        throw std::invalid_argument("AlgebraMorphism: shape mismatch");
    if (apply(domain.unit) != codomain.unit)
        throw std::invalid_argument("AlgebraMorphism: unit not preserved");
    for (std::uint32_t i = 0; i < domain.dim; ++i)
        for (std::uint32_t j = 0; j < domain.dim; ++j) {
            Vec ei(domain.dim, 0), ej(domain.dim, 0);
            ei[i] = 1;
            ej[j] = 1;
            if (apply(domain.mul(ei, ej)) != codomain.mul(images[i], images[j]))
                throw std::invalid_argument("AlgebraMorphism: not multiplicative");
        }
}

Vec AlgebraMorphism::apply(const Vec& x) const {
    Vec r(codomain.dim, 0);
    for (std::uint32_t i = 0; i < domain.dim; ++i) {
        if (!x[i]) continue;
        for (std::uint32_t j = 0; j < codomain.dim; ++j)
            r[j] = (r[j] + x[i] * images[i][j]) % codomain.p;
    }
    return r;
}

AlgebraMorphism AlgebraMorphism::compose(const AlgebraMorphism& then) const {
    std::vector<Vec> im;
    for (auto& v : images) im.push_back(then.apply(v));
    return AlgebraMorphism(domain, then.codomain, std::move(im));
}

ZpnMat AlgebraMorphism::matrix() const {
    Mod fp(domain.p, 1);
    ZpnMat m(fp, domain.dim, codomain.dim);
    for (std::uint32_t i = 0; i < domain.dim; ++i)
        for (std::uint32_t j = 0; j < codomain.dim; ++j) m.at(i, j) = images[i][j];
    return m;
}

bool AlgebraMorphism::is_bijective() const {
    return domain.dim == codomain.dim && nullspace(matrix()).rows == 0;
}

AlgebraMorphism frobenius(const FpAlgebra& a) {
    std::vector<Vec> im;
    for (std::uint32_t i = 0; i < a.dim; ++i) {
        Vec ei(a.dim, 0);
        ei[i] = 1;
        im.push_back(a.pow(ei, a.p));
    }
    return AlgebraMorphism(a, a, std::move(im));
}

AModule::AModule(FpAlgebra a, std::uint32_t d, std::vector<ZpnMat> act)
    : alg(std::move(a)), dim(d), action(std::move(act)) {
    if (action.size() != alg.dim) throw std::invalid_argument("AModule: one matrix per basis elt");
    Mod fp(alg.p, 1);
    for (auto& m : action)
        if (m.rows != dim || m.cols != dim || m.mod != fp)
            throw std::invalid_argument("AModule: action shape mismatch");
    // unit acts as identity; action is multiplicative on basis pairs
    ZpnMat unit_act(fp, dim, dim);
    for (std::uint32_t i = 0; i < alg.dim; ++i)
        for (std::size_t e = 0; e < unit_act.a.size(); ++e)
            unit_act.a[e] = (unit_act.a[e] + alg.unit[i] * action[i].a[e]) % alg.p;
    if (!(unit_act == ZpnMat::identity(fp, dim)))
        throw std::invalid_argument("AModule: unit does not act as identity");
    for (std::uint32_t i = 0; i < alg.dim; ++i)
        for (std::uint32_t j = 0; j < alg.dim; ++j) {
            Vec ei(alg.dim, 0), ej(alg.dim, 0);
            ei[i] = 1;
            ej[j] = 1;
            Vec prod = alg.mul(ei, ej);
            ZpnMat lhs = action[i].mul(action[j]);  // act by e_j then e_i? matrices act on rows
            ZpnMat expect(fp, dim, dim);
            for (std::uint32_t k = 0; k < alg.dim; ++k)
                for (std::size_t e = 0; e < expect.a.size(); ++e)
                    expect.a[e] = (expect.a[e] + prod[k] * action[k].a[e]) % alg.p;
            ZpnMat lhs2 = action[j].mul(action[i]);
            if (!(lhs == expect) || !(lhs2 == expect))
                throw std::invalid_argument("AModule: action not multiplicative");
        }
}

AModule AModule::regular(const FpAlgebra& a) {
    Mod fp(a.p, 1);
    std::vector<ZpnMat> act;
    for (std::uint32_t i = 0; i < a.dim; ++i) {
        ZpnMat m(fp, a.dim, a.dim);
        Vec ei(a.dim, 0);
        ei[i] = 1;
        for (std::uint32_t j = 0; j < a.dim; ++j) {
            Vec ej(a.dim, 0);
            ej[j] = 1;
            Vec r = a.mul(ei, ej);
            for (std::uint32_t k = 0; k < a.dim; ++k) m.at(j, k) = r[k];
        }
        act.push_back(std::move(m));
    }
    return AModule(a, a.dim, std::move(act));
}

Vec AModule::act(const Vec& scalar, const Vec& x) const {
    Vec r(dim, 0);
    for (std::uint32_t i = 0; i < alg.dim; ++i) {
        if (!scalar[i]) continue;
        Vec part = action[i].apply(x);
        for (std::uint32_t k = 0; k < dim; ++k) r[k] = (r[k] + scalar[i] * part[k]) % alg.p;
    }
    return r;
}

AModule frobenius_pushforward_module(const FpAlgebra& a) {
    AlgebraMorphism fr = frobenius(a);
    Mod fp(a.p, 1);
    std::vector<ZpnMat> act;
    for (std::uint32_t i = 0; i < a.dim; ++i) {
        Vec ei(a.dim, 0);
        ei[i] = 1;
        Vec fei = fr.apply(ei);
        ZpnMat m(fp, a.dim, a.dim);
        for (std::uint32_t j = 0; j < a.dim; ++j) {
            Vec ej(a.dim, 0);
            ej[j] = 1;
            Vec r = a.mul(fei, ej);
            for (std::uint32_t k = 0; k < a.dim; ++k) m.at(j, k) = r[k];
        }
        act.push_back(std::move(m));
    }
    return AModule(a, a.dim, std::move(act));
}

Localization localize(const FpAlgebra& a, const Vec& f) {
    // stabilize f^k; doubling reaches an idempotent power in a finite ring
    Vec e = a.mul(f, f);
    for (int iter = 0; iter < 64; ++iter) {
        Vec e2 = a.mul(e, e);
        if (e2 == e) break;
        e = e2;
    }
    if (!(a.mul(e, e) == e)) throw std::logic_error("localize: idempotent stabilization failed");
    // basis of e*A
    Mod fp(a.p, 1);
    std::vector<Vec> rows;
    for (std::uint32_t i = 0; i < a.dim; ++i) {
        Vec ei(a.dim, 0);
        ei[i] = 1;
        rows.push_back(a.mul(e, ei));
    }
    ZpnMat h = howell_form(ZpnMat::from_rows(fp, rows));
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < h.rows; ++i) basis.push_back(h.row(i));
    if (basis.empty()) {
        // zero ring: represent as a 1-dimensional algebra with 1 = 0 is not
        // allowed; keep dim 0 marker via an empty Localization
        Localization out;
        out.idempotent = e;
        out.basis_in_ambient = {};
        return out;
    }
    std::uint32_t d = static_cast<std::uint32_t>(basis.size());
    ZpnMat bm = ZpnMat::from_rows(fp, basis);
    auto coords = [&](const Vec& x) {
        auto c = solve_left(bm, x);
        if (!c) throw std::logic_error("localize: element not in e*A");
        return *c;
    };
    std::vector<Vec> table(static_cast<std::size_t>(d) * d);
    for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j) table[i * d + j] = coords(a.mul(basis[i], basis[j]));
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < d; ++i) labels.push_back("b" + std::to_string(i));
    FpAlgebra local(a.p, std::move(labels), std::move(table), coords(e));
    std::vector<Vec> im;
    for (std::uint32_t i = 0; i < a.dim; ++i) {
        Vec ei(a.dim, 0);
        ei[i] = 1;
        im.push_back(coords(a.mul(e, ei)));
    }
    AlgebraMorphism to_local(a, local, std::move(im));
    return {std::move(local), std::move(to_local), e, std::move(basis)};
}

bool is_reduced(const FpAlgebra& a) {
    // reduced iff Frobenius is injective (finite characteristic-p ring)
    return nullspace(frobenius(a).matrix()).rows == 0;
}

ReducedQuotient reduced_quotient(const FpAlgebra& a) {
    // nilradical = kernel of a high enough Frobenius power
    Mod fp(a.p, 1);
    ZpnMat frob = frobenius(a).matrix();
    ZpnMat power = ZpnMat::identity(fp, a.dim);
    for (std::uint32_t i = 0; i < a.dim; ++i) power = power.mul(frob);
    ZpnMat nil = nullspace(power);
    ZpnModule coker(fp, a.dim, nil);
    SmithCoords sc = SmithCoords::of(coker);
    std::uint32_t d = static_cast<std::uint32_t>(sc.keep.size());
    auto project = [&](const Vec& x) { return sc.project(x); };
    std::vector<Vec> table(static_cast<std::size_t>(d) * d);
    for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j)
            table[i * d + j] = project(a.mul(sc.section(i), sc.section(j)));
    std::vector<std::string> labels;
    for (std::uint32_t i = 0; i < d; ++i) labels.push_back("q" + std::to_string(i));
    FpAlgebra q(a.p, std::move(labels), std::move(table), project(a.unit));
    std::vector<Vec> im;
    for (std::uint32_t i = 0; i < a.dim; ++i) {
        Vec ei(a.dim, 0);
        ei[i] = 1;
        im.push_back(project(ei));
    }
    AlgebraMorphism proj(a, q, std::move(im));
    if (!is_reduced(q)) throw std::logic_error("reduced_quotient: quotient still has nilpotents");
    return {std::move(q), std::move(proj)};
}

GradedAlgebra::GradedAlgebra(std::uint32_t p_, std::vector<std::uint32_t> degrees,
                             std::uint32_t truncation_)
    : p(p_), gen_degrees(std::move(degrees)), truncation(truncation_) {
    if (!is_prime(p)) throw std::invalid_argument("GradedAlgebra: p not prime");
    for (auto d : gen_degrees)
        if (d == 0) throw std::invalid_argument("GradedAlgebra: generator of degree 0");
}

GradedAlgebra GradedAlgebra::symmetric(std::uint32_t p_, std::uint32_t d, std::uint32_t tr) {
    return GradedAlgebra(p_, std::vector<std::uint32_t>(d, 1), tr);
}

std::uint32_t GradedAlgebra::degree_of(const Monomial& m) const {
    std::uint32_t deg = 0;
    for (std::size_t i = 0; i < m.size(); ++i) deg += m[i] * gen_degrees[i];
    return deg;
}

std::vector<Monomial> GradedAlgebra::slice_basis(std::uint32_t degree) const {
    std::vector<Monomial> out;
    Monomial cur(gen_degrees.size(), 0);
    // depth-first over exponents
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
        if (i == gen_degrees.size()) {
            if (left == 0) out.push_back(cur);
            return;
        }
        for (std::uint32_t e = 0; e * gen_degrees[i] <= left; ++e) {
            cur[i] = e;
            rec(i + 1, left - e * gen_degrees[i]);
        }
        cur[i] = 0;
    };
    rec(0, degree);
    return out;
}

std::uint64_t GradedAlgebra::slice_dim(std::uint32_t degree) const {
    return slice_basis(degree).size();
}

GradedElem GradedElem::generator(const GradedAlgebra& r, std::size_t i) {
    GradedElem e(r);
    Monomial m(r.gen_degrees.size(), 0);
    m[i] = 1;
    e.coeffs[m] = 1;
    return e;
}

GradedElem GradedElem::constant(const GradedAlgebra& r, std::uint64_t c) {
    GradedElem e(r);
    c %= r.p;
    if (c) e.coeffs[Monomial(r.gen_degrees.size(), 0)] = c;
    return e;
}

GradedElem GradedElem::monomial(const GradedAlgebra& r, const Monomial& m, std::uint64_t c) {
    if (r.degree_of(m) > r.truncation) throw TruncationOverflow("monomial beyond truncation");
    GradedElem e(r);
    c %= r.p;
    if (c) e.coeffs[m] = c;
    return e;
}

bool GradedElem::is_homogeneous(std::uint32_t degree) const {
    for (auto& [m, c] : coeffs)
        if (ring->degree_of(m) != degree) return false;
    return true;
}

GradedElem GradedElem::add(const GradedElem& o) const {
    GradedElem r = *this;
    for (auto& [m, c] : o.coeffs) {
        auto it = r.coeffs.find(m);
        std::uint64_t v = ((it == r.coeffs.end() ? 0 : it->second) + c) % ring->p;
        if (v)
            r.coeffs[m] = v;
        else if (it != r.coeffs.end())
            r.coeffs.erase(it);
    }
    return r;
}

GradedElem GradedElem::sub(const GradedElem& o) const { return add(o.scale(ring->p - 1)); }

GradedElem GradedElem::mul(const GradedElem& o) const {
    GradedElem r(*ring);
    for (auto& [m1, c1] : coeffs)
        for (auto& [m2, c2] : o.coeffs) {
            Monomial m(m1.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = m1[i] + m2[i];
            if (ring->degree_of(m) > ring->truncation)
                throw TruncationOverflow("product beyond truncation degree " +
                                         std::to_string(ring->truncation));
            std::uint64_t c = c1 * c2 % ring->p;
            std::uint64_t v = (r.coeffs.count(m) ? r.coeffs[m] : 0);
            v = (v + c) % ring->p;
            if (v)
                r.coeffs[m] = v;
            else
                r.coeffs.erase(m);
        }
    return r;
}

GradedElem GradedElem::scale(std::uint64_t c) const {
    c %= ring->p;
    GradedElem r(*ring);
    if (!c) return r;
    for (auto& [m, v] : coeffs) {
        std::uint64_t w = v * c % ring->p;
        if (w) r.coeffs[m] = w;
    }
    return r;
}

GradedElem GradedElem::pow(std::uint64_t e) const {
    GradedElem r = GradedElem::constant(*ring, 1), b = *this;
    while (e) {
        if (e & 1) r = r.mul(b);
        if (e >>= 1) b = b.mul(b);
    }
    return r;
}

}  // namespace wittkit
