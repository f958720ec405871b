#include "wittkit/zpn.hpp"

#include <algorithm>
#include <cstdlib>

namespace wittkit {

Mod::Mod(std::uint32_t p_, std::uint32_t n_) : p(p_), n(n_) {
    if (!is_prime(p)) throw std::invalid_argument("Mod: p = " + std::to_string(p) + " is not prime");
    if (n == 0) throw std::invalid_argument("Mod: n must be positive");
    q = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (q > (1ull << 31) / p) throw std::invalid_argument("Mod: p^n must be < 2^31");
        q *= p;
    }
}

std::uint64_t Mod::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1 % q, b = a % q;
    while (e) {
        if (e & 1) r = r * b % q;
        b = b * b % q;
        e >>= 1;
    }
    return r;
}

std::uint32_t Mod::val(std::uint64_t a) const {
    a %= q;
    if (a == 0) return n;
    std::uint32_t v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

std::uint64_t Mod::inv(std::uint64_t a) const {
    a %= q;
    if (!is_unit(a)) throw std::domain_error("Mod::inv: not a unit");
    // extended euclid on (a, q)
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(q), newr = static_cast<std::int64_t>(a);
    while (newr != 0) {
        std::int64_t quot = r / newr;
        std::int64_t tmp = t - quot * newt;
        t = newt;
        newt = tmp;
        tmp = r - quot * newr;
        r = newr;
        newr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(q);
    return static_cast<std::uint64_t>(t);
}

std::uint64_t Mod::div_exact(std::uint64_t a, std::uint64_t b) const {
    a %= q;
    b %= q;
    if (b == 0) throw std::domain_error("Mod::div_exact by zero");
    std::uint32_t v = val(b);
    if (val(a) < v) throw std::domain_error("Mod::div_exact: not divisible");
    std::uint64_t pv = 1;
    for (std::uint32_t i = 0; i < v; ++i) pv *= p;
    std::uint64_t unit = b / pv;  // b = unit * p^v with unit a unit mod q
    return (a / pv) % q * inv(unit) % q;
}

ZpnMat ZpnMat::identity(Mod m, std::size_t k) {
    ZpnMat r(m, k, k);
    for (std::size_t i = 0; i < k; ++i) r.at(i, i) = 1 % m.q;
    return r;
}

ZpnMat ZpnMat::from_rows(Mod m, const std::vector<Vec>& rows) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    ZpnMat r(m, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("from_rows: ragged rows");
        for (std::size_t j = 0; j < c; ++j) r.at(i, j) = rows[i][j] % m.q;
    }
    return r;
}

void ZpnMat::append_row(const Vec& v) {
    if (v.size() != cols) throw std::invalid_argument("append_row: size mismatch");
    for (auto x : v) a.push_back(x % mod.q);
    ++rows;
}

bool ZpnMat::operator==(const ZpnMat& o) const {
    return mod == o.mod && rows == o.rows && cols == o.cols && a == o.a;
}

ZpnMat ZpnMat::transpose() const {
    ZpnMat r(mod, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

ZpnMat ZpnMat::mul(const ZpnMat& o) const {
    if (cols != o.rows || mod != o.mod) throw std::invalid_argument("ZpnMat::mul shape/mod mismatch");
    ZpnMat r(mod, rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            std::uint64_t v = at(i, k);
            if (!v) continue;
            for (std::size_t j = 0; j < o.cols; ++j)
                r.at(i, j) = (r.at(i, j) + v * o.at(k, j)) % mod.q;
        }
    return r;
}

Vec ZpnMat::apply(const Vec& x) const {
    if (x.size() != rows) throw std::invalid_argument("ZpnMat::apply size mismatch");
    Vec r(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        std::uint64_t v = x[i] % mod.q;
        if (!v) continue;
        for (std::size_t j = 0; j < cols; ++j) r[j] = (r[j] + v * at(i, j)) % mod.q;
    }
    return r;
}

ZpnMat ZpnMat::vstack(const ZpnMat& o) const {
    if (cols != o.cols || mod != o.mod) throw std::invalid_argument("vstack mismatch");
    ZpnMat r(mod, rows + o.rows, cols);
    std::copy(a.begin(), a.end(), r.a.begin());
    std::copy(o.a.begin(), o.a.end(), r.a.begin() + static_cast<std::ptrdiff_t>(a.size()));
    return r;
}

namespace {

// In-place row operations on a rows-list representation.
struct RowWork {
    Mod mod;
    std::size_t cols;
    std::vector<Vec> rows;

    void scale(std::size_t i, std::uint64_t u) {
        for (auto& x : rows[i]) x = x * u % mod.q;
    }
    // rows[i] -= k * rows[j]
    void axpy(std::size_t i, std::uint64_t k, std::size_t j) {
        k %= mod.q;
        if (!k) return;
        for (std::size_t c = 0; c < cols; ++c)
            rows[i][c] = (rows[i][c] + (mod.q - k) * rows[j][c]) % mod.q;
    }
    bool row_zero(std::size_t i) const {
        for (auto x : rows[i])
            if (x) return false;
        return true;
    }
};

// Howell elimination. Produces rows sorted by pivot column, pivots p^v,
// entries above each pivot reduced mod p^v, plus the p^(n-v) completion
// rows so that the result has the Howell span-closure property.
std::vector<Vec> howell_rows(const ZpnMat& m) {
    RowWork w{m.mod, m.cols, {}};
    w.rows.reserve(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        Vec r = m.row(i);
        bool nz = false;
        for (auto x : r) nz |= (x != 0);
        if (nz) w.rows.push_back(std::move(r));
    }
    const Mod& mod = m.mod;
    std::size_t done = 0;  // rows [0, done) are pivot rows in order
    for (std::size_t col = 0; col < m.cols; ++col) {
        // pick minimal-valuation entry in this column among rows >= done
        std::size_t best = SIZE_MAX;
        std::uint32_t bestv = mod.n + 1;
        for (std::size_t i = done; i < w.rows.size(); ++i) {
            std::uint64_t e = w.rows[i][col];
            if (!e) continue;
            std::uint32_t v = mod.val(e);
            if (v < bestv) {
                bestv = v;
                best = i;
            }
        }
        if (best == SIZE_MAX) continue;
        std::swap(w.rows[done], w.rows[best]);
        std::uint64_t pv = 1;
        for (std::uint32_t i = 0; i < bestv; ++i) pv *= mod.p;
        w.scale(done, mod.inv(w.rows[done][col] / pv));  // pivot becomes p^v
        // eliminate below, reduce above
        for (std::size_t i = 0; i < w.rows.size(); ++i) {
            if (i == done) continue;
            std::uint64_t e = w.rows[i][col];
            if (!e) continue;
            w.axpy(i, e / pv, done);  // below: exact kill; above: reduce mod p^v
        }
        if (bestv > 0) {
            // completion row capturing the torsion tail
            Vec extra(m.cols, 0);
            std::uint64_t mult = mod.q / pv;  // p^{n-v}
            for (std::size_t c = 0; c < m.cols; ++c) extra[c] = w.rows[done][c] * mult % mod.q;
            extra[col] = 0;
            bool nz = false;
            for (auto x : extra) nz |= (x != 0);
            if (nz) w.rows.push_back(std::move(extra));
        }
        ++done;
    }
    w.rows.resize(done);
    return w.rows;
}

}  // namespace

ZpnMat howell_form(const ZpnMat& m) {
    std::vector<Vec> rows = howell_rows(m);
    if (rows.empty()) return ZpnMat(m.mod, 0, m.cols);
    return ZpnMat::from_rows(m.mod, rows);
}

ZpnMat nullspace(const ZpnMat& m) {
    // Howell of [m | I]; rows with zero left part carry kernel generators.
    ZpnMat aug(m.mod, m.rows, m.cols + m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols + i) = 1 % m.mod.q;
    }
    std::vector<Vec> h = howell_rows(aug);
    std::vector<Vec> gens;
    for (const auto& r : h) {
        bool leftzero = true;
        for (std::size_t j = 0; j < m.cols && leftzero; ++j) leftzero = (r[j] == 0);
        if (leftzero) gens.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(m.cols), r.end());
    }
    ZpnMat g = ZpnMat::from_rows(m.mod, gens);
    if (g.rows == 0) g = ZpnMat(m.mod, 0, m.rows);
    return howell_form(g);
}

std::optional<Vec> solve_left(const ZpnMat& m, const Vec& t) {
    if (t.size() != m.cols) throw std::invalid_argument("solve_left: size mismatch");
    const Mod& mod = m.mod;
    ZpnMat aug(mod, m.rows, m.cols + m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols + i) = 1 % mod.q;
    }
    std::vector<Vec> h = howell_rows(aug);
    Vec res(m.cols + m.rows, 0);
    for (std::size_t j = 0; j < m.cols; ++j) res[j] = t[j] % mod.q;
    for (const auto& row : h) {
        std::size_t lead = 0;
        while (lead < m.cols && row[lead] == 0) ++lead;
        if (lead >= m.cols) continue;  // kernel row, no left pivot
        std::uint64_t piv = row[lead];
        std::uint64_t e = res[lead];
        if (!e) continue;
        std::uint64_t k = e / piv;  // pivot is p^v; integer division reduces mod p^v
        if (!k) continue;
        for (std::size_t c = 0; c < res.size(); ++c)
            res[c] = (res[c] + (mod.q - k % mod.q) * row[c]) % mod.q;
    }
    for (std::size_t j = 0; j < m.cols; ++j)
        if (res[j] != 0) return std::nullopt;
    Vec x(m.rows, 0);
    for (std::size_t i = 0; i < m.rows; ++i) x[i] = mod.neg(res[m.cols + i]);
    return x;
}

bool same_row_span(const ZpnMat& a, const ZpnMat& b) {
    return howell_form(a) == howell_form(b);
}

bool in_row_span(const ZpnMat& m, const Vec& v) {
    return solve_left(m, v).has_value();
}

ZpnModule::ZpnModule(Mod m, std::size_t amb) : mod(m), ambient(amb), rel(m, 0, amb) {}

ZpnModule::ZpnModule(Mod m, std::size_t amb, const ZpnMat& relations) : mod(m), ambient(amb) {
    if (relations.cols != amb || relations.mod != m)
        throw std::invalid_argument("ZpnModule: relation shape mismatch");
    rel = howell_form(relations);
}

Vec ZpnModule::reduce(const Vec& x) const {
    if (x.size() != ambient) throw std::invalid_argument("ZpnModule::reduce: size mismatch");
    Vec r = x;
    for (auto& e : r) e %= mod.q;
    for (std::size_t i = 0; i < rel.rows; ++i) {
        std::size_t lead = 0;
        while (lead < ambient && rel.at(i, lead) == 0) ++lead;
        if (lead >= ambient) continue;
        std::uint64_t piv = rel.at(i, lead);
        std::uint64_t k = r[lead] / piv;
        if (!k) continue;
        for (std::size_t c = 0; c < ambient; ++c)
            r[c] = (r[c] + (mod.q - k % mod.q) * rel.at(i, c)) % mod.q;
    }
    return r;
}

bool ZpnModule::is_zero_elem(const Vec& x) const {
    Vec r = reduce(x);
    for (auto e : r)
        if (e) return false;
    return true;
}

bool ZpnModule::elems_equal(const Vec& x, const Vec& y) const {
    return reduce(x) == reduce(y);
}

std::uint64_t ZpnModule::size() const {
    std::uint64_t s = 1;
    std::vector<std::uint64_t> ranges(ambient, mod.q);
    for (std::size_t i = 0; i < rel.rows; ++i) {
        std::size_t lead = 0;
        while (lead < ambient && rel.at(i, lead) == 0) ++lead;
        if (lead < ambient) ranges[lead] = rel.at(i, lead);  // pivot p^v -> residues [0, p^v)
    }
    for (auto r : ranges) {
        if (s > (1ull << 62) / (r ? r : 1)) throw std::overflow_error("module too large");
        s *= r;
    }
    return s;
}

std::uint32_t ZpnModule::length() const {
    std::uint32_t len = static_cast<std::uint32_t>(ambient) * mod.n;
    for (std::size_t i = 0; i < rel.rows; ++i) {
        std::size_t lead = 0;
        while (lead < ambient && rel.at(i, lead) == 0) ++lead;
        if (lead < ambient) len -= (mod.n - mod.val(rel.at(i, lead)));
    }
    return len;
}

std::vector<Vec> ZpnModule::elements() const {
    std::uint64_t count = size();
    check_guard(count, "ZpnModule::elements");
    std::vector<std::uint64_t> ranges(ambient, mod.q);
    for (std::size_t i = 0; i < rel.rows; ++i) {
        std::size_t lead = 0;
        while (lead < ambient && rel.at(i, lead) == 0) ++lead;
        if (lead < ambient) ranges[lead] = rel.at(i, lead);
    }
    std::vector<Vec> out;
    out.reserve(count);
    Vec cur(ambient, 0);
    while (true) {
        out.push_back(cur);
        std::size_t k = 0;
        while (k < ambient) {
            if (++cur[k] < ranges[k]) break;
            cur[k] = 0;
            ++k;
        }
        if (k == ambient) break;
    }
    return out;
}

ModuleMap::ModuleMap(ZpnModule dom, ZpnModule cod, ZpnMat m)
    : domain(std::move(dom)), codomain(std::move(cod)), matrix(std::move(m)) {
    if (matrix.rows != domain.ambient || matrix.cols != codomain.ambient ||
        matrix.mod != domain.mod || domain.mod != codomain.mod)
        throw std::invalid_argument("ModuleMap: shape/mod mismatch");
    for (std::size_t i = 0; i < domain.rel.rows; ++i) {
        Vec img = matrix.apply(domain.rel.row(i));
        if (!codomain.is_zero_elem(img))
            throw std::invalid_argument("ModuleMap: not well-defined (a relator has nonzero image)");
    }
}

ModuleMap ModuleMap::zero(ZpnModule dom, ZpnModule cod) {
    ZpnMat m(dom.mod, dom.ambient, cod.ambient);
    return ModuleMap(std::move(dom), std::move(cod), std::move(m));
}

ModuleMap ModuleMap::identity(ZpnModule md) {
    ZpnMat m = ZpnMat::identity(md.mod, md.ambient);
    ZpnModule cod = md;
    return ModuleMap(std::move(md), std::move(cod), std::move(m));
}

ModuleMap ModuleMap::compose(const ModuleMap& then) const {
    if (!(codomain.ambient == then.domain.ambient && codomain.rel == then.domain.rel))
        throw std::invalid_argument("compose: middle module mismatch");
    return ModuleMap(domain, then.codomain, matrix.mul(then.matrix));
}

bool ModuleMap::is_zero_map() const {
    for (std::size_t i = 0; i < matrix.rows; ++i)
        if (!codomain.is_zero_elem(matrix.row(i))) return false;
    return true;
}

KernelResult kernel(const ModuleMap& f) {
    const Mod mod = f.matrix.mod;
    ZpnMat stacked = f.matrix.vstack(f.codomain.rel);
    ZpnMat ns = nullspace(stacked);
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < ns.rows; ++i) {
        Vec full = ns.row(i);
        gens.emplace_back(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(f.domain.ambient));
    }
    for (std::size_t i = 0; i < f.domain.rel.rows; ++i) gens.push_back(f.domain.rel.row(i));
    ZpnMat g = howell_form(ZpnMat::from_rows(mod, gens));
    if (g.cols != f.domain.ambient) g = ZpnMat(mod, 0, f.domain.ambient);
    // relations among the generators: combinations that die in the domain
    ZpnMat inner = g.vstack(f.domain.rel);
    ZpnMat innerns = nullspace(inner);
    std::vector<Vec> krel;
    for (std::size_t i = 0; i < innerns.rows; ++i) {
        Vec full = innerns.row(i);
        krel.emplace_back(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(g.rows));
    }
    ZpnMat krelm = ZpnMat::from_rows(mod, krel);
    if (krelm.cols != g.rows) krelm = ZpnMat(mod, 0, g.rows);
    ZpnModule k(mod, g.rows, krelm);
    ModuleMap incl(k, f.domain, g);
    return {std::move(k), std::move(incl)};
}

CokernelResult cokernel(const ModuleMap& f) {
    ZpnMat rel2 = f.codomain.rel.vstack(f.matrix);
    ZpnModule c(f.matrix.mod, f.codomain.ambient, rel2);
    ModuleMap proj(f.codomain, c, ZpnMat::identity(f.matrix.mod, f.codomain.ambient));
    return {std::move(c), std::move(proj)};
}

ZpnMat image_span(const ModuleMap& f) {
    return howell_form(f.matrix.vstack(f.codomain.rel));
}

ExactnessResult is_exact(const std::vector<ModuleMap>& seq) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (!(seq[i].codomain.ambient == seq[i + 1].domain.ambient &&
              seq[i].codomain.rel == seq[i + 1].domain.rel))
            return {false, static_cast<int>(i), "chain not composable at node " + std::to_string(i)};
    }
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        ZpnMat img = image_span(seq[i]);
        KernelResult ker = kernel(seq[i + 1]);
        ZpnMat kspan = howell_form(ker.inclusion.matrix.vstack(seq[i + 1].domain.rel));
        if (!(img == kspan))
            return {false, static_cast<int>(i),
                    "image != kernel at interior node " + std::to_string(i)};
    }
    return {true, -1, ""};
}

DualResult pontryagin_dual(const ZpnModule& m) {
    ZpnMat g = nullspace(m.rel.transpose());
    if (m.rel.rows == 0) g = ZpnMat::identity(m.mod, m.ambient);  // free module: all homs
    if (g.cols != m.ambient) g = ZpnMat(m.mod, 0, m.ambient);
    ZpnMat drel = nullspace(g);
    if (drel.cols != g.rows) drel = ZpnMat(m.mod, 0, g.rows);
    ZpnModule dual(m.mod, g.rows, drel);
    return {std::move(dual), std::move(g)};
}

ModuleMap dual_map(const ModuleMap& f, const DualResult& dual_of_codomain,
                   const DualResult& dual_of_domain) {
    const Mod mod = f.matrix.mod;
    const ZpnMat& gn = dual_of_codomain.hom_generators;  // homs on codomain
    const ZpnMat& gm = dual_of_domain.hom_generators;    // homs on domain
    ZpnMat res(mod, gn.rows, gm.rows);
    for (std::size_t k = 0; k < gn.rows; ++k) {
        // pull back hom psi_k along f: chi[j] = sum_l matrix[j][l] psi_k[l]
        Vec chi(f.domain.ambient, 0);
        for (std::size_t j = 0; j < f.domain.ambient; ++j) {
            std::uint64_t s = 0;
            for (std::size_t l = 0; l < f.codomain.ambient; ++l)
                s = (s + f.matrix.at(j, l) * gn.at(k, l)) % mod.q;
            chi[j] = s;
        }
        auto c = solve_left(gm, chi);
        if (!c) throw std::logic_error("dual_map: pullback not in dual generator span");
        for (std::size_t j = 0; j < gm.rows; ++j) res.at(k, j) = (*c)[j];
    }
    return ModuleMap(dual_of_codomain.module, dual_of_domain.module, res);
}

SmithResult smith_form(const ZpnMat& m) {
    const Mod mod = m.mod;
    ZpnMat d = m;
    ZpnMat u = ZpnMat::identity(mod, m.rows);
    ZpnMat w = ZpnMat::identity(mod, m.cols);
    std::size_t k = 0;
    while (k < d.rows && k < d.cols) {
        std::size_t bi = SIZE_MAX, bj = SIZE_MAX;
        std::uint32_t bv = mod.n + 1;
        for (std::size_t i = k; i < d.rows; ++i)
            for (std::size_t j = k; j < d.cols; ++j) {
                if (!d.at(i, j)) continue;
                std::uint32_t v = mod.val(d.at(i, j));
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi == SIZE_MAX) break;
        // swap into place
        for (std::size_t c = 0; c < d.cols; ++c) std::swap(d.at(k, c), d.at(bi, c));
        for (std::size_t c = 0; c < u.cols; ++c) std::swap(u.at(k, c), u.at(bi, c));
        for (std::size_t r = 0; r < d.rows; ++r) std::swap(d.at(r, k), d.at(r, bj));
        for (std::size_t r = 0; r < w.rows; ++r) std::swap(w.at(r, k), w.at(r, bj));
        std::uint64_t pv = 1;
        for (std::uint32_t i = 0; i < bv; ++i) pv *= mod.p;
        std::uint64_t ui = mod.inv(d.at(k, k) / pv);
        for (std::size_t c = 0; c < d.cols; ++c) d.at(k, c) = d.at(k, c) * ui % mod.q;
        for (std::size_t c = 0; c < u.cols; ++c) u.at(k, c) = u.at(k, c) * ui % mod.q;
        // clear column k and row k (all valuations >= bv, divisions exact)
        for (std::size_t i = 0; i < d.rows; ++i) {
            if (i == k || !d.at(i, k)) continue;
            std::uint64_t c0 = d.at(i, k) / pv;
            for (std::size_t c = 0; c < d.cols; ++c)
                d.at(i, c) = (d.at(i, c) + (mod.q - c0 % mod.q) * d.at(k, c)) % mod.q;
            for (std::size_t c = 0; c < u.cols; ++c)
                u.at(i, c) = (u.at(i, c) + (mod.q - c0 % mod.q) * u.at(k, c)) % mod.q;
        }
        for (std::size_t j = 0; j < d.cols; ++j) {
            if (j == k || !d.at(k, j)) continue;
            std::uint64_t c0 = d.at(k, j) / pv;
            for (std::size_t r = 0; r < d.rows; ++r)
                d.at(r, j) = (d.at(r, j) + (mod.q - c0 % mod.q) * d.at(r, k)) % mod.q;
            for (std::size_t r = 0; r < w.rows; ++r)
                w.at(r, j) = (w.at(r, j) + (mod.q - c0 % mod.q) * w.at(r, k)) % mod.q;
        }
        ++k;
    }
    return {std::move(u), std::move(d), std::move(w)};
}

std::vector<std::uint32_t> invariant_factors(const ZpnModule& m) {
    SmithResult s = smith_form(m.rel);
    std::vector<std::uint32_t> exps;
    std::size_t r = std::min(s.d.rows, s.d.cols);
    std::vector<bool> has_rel(m.ambient, false);
    for (std::size_t i = 0; i < r; ++i) {
        std::uint64_t e = s.d.at(i, i);
        if (e == 0) continue;
        has_rel[i] = true;
        std::uint32_t v = m.mod.val(e);
        if (v > 0) exps.push_back(v);  // cyclic factor of order p^v
    }
    for (std::size_t i = 0; i < m.ambient; ++i)
        if (!has_rel[i]) exps.push_back(m.mod.n);
    std::sort(exps.rbegin(), exps.rend());
    return exps;
}

}  // namespace wittkit
