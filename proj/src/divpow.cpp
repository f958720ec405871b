#include "wittkit/divpow.hpp"

#include <algorithm>

namespace wittkit {

std::vector<MultiIndex> compositions(std::size_t slots, std::uint32_t total) {
    std::vector<MultiIndex> out;
    MultiIndex cur(slots, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
        if (i + 1 == slots) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (std::uint32_t e = 0; e <= left; ++e) {
            cur[i] = e;
            rec(i + 1, left - e);
        }
    };
    if (slots == 0) {
        if (total == 0) out.push_back({});
        return out;
    }
    rec(0, total);
    return out;
}

SymbolDist expand_pure_symbol(Mod mod, const Vec& x, std::uint32_t t) {
    SymbolDist out;
    for (auto& a : compositions(x.size(), t)) {
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < x.size() && c; ++i) c = c * mod.pow(x[i], a[i]) % mod.q;
        if (c) out[a] = c;
    }
    return out;
}

SymbolDist symbol_merge(Mod mod, const SymbolDist& u, const SymbolDist& v) {
    SymbolDist out;
    for (auto& [a, ca] : u)
        for (auto& [b, cb] : v) {
            MultiIndex s(a.size());
            std::uint64_t binom = 1;
            for (std::size_t i = 0; i < a.size(); ++i) {
                s[i] = a[i] + b[i];
                binom = binom * binomial_u64(s[i], a[i]) % mod.q;
            }
            std::uint64_t c = ca * cb % mod.q * binom % mod.q;
            if (!c) continue;
            auto it = out.find(s);
            std::uint64_t w = ((it == out.end() ? 0 : it->second) + c) % mod.q;
            if (w)
                out[s] = w;
            else if (it != out.end())
                out.erase(it);
        }
    return out;
}

Vec GammaModule::dist_to_coords(const SymbolDist& s) const {
    Vec v(basis.size(), 0);
    for (auto& [m, c] : s) v[index.at(m)] = c % mod.q;
    return v;
}

Vec GammaModule::pure_symbol(const Vec& x_in_F) const {
    return module.reduce(dist_to_coords(expand_pure_symbol(mod, x_in_F, d)));
}

GammaModule gamma_module(Mod mod, const ZpnModule& m, std::uint32_t d, bool reduced_generators) {
    // precondition: (d-1)! invertible in Z/p^n
    for (std::uint32_t k = 2; k < d; ++k)
        if (k % mod.p == 0)
            throw std::invalid_argument("gamma_module: (d-1)! not invertible in Z/p^n");
    GammaModule g;
    g.mod = mod;
    g.d = d;
    g.source = m;
    g.basis = compositions(m.ambient, d);
    for (std::size_t i = 0; i < g.basis.size(); ++i) g.index[g.basis[i]] = i;

    // relator span of the quotient presentation
    std::vector<Vec> rel_rows;
    std::vector<Vec> xs;
    if (reduced_generators) {
        // basis vectors and pairwise sums (an optimization; validated in tests)
        Vec zero(m.ambient, 0);
        xs.push_back(zero);
        for (std::size_t i = 0; i < m.ambient; ++i) {
            for (std::uint64_t c = 1; c < mod.q; ++c) {
                Vec v = zero;
                v[i] = c;
                xs.push_back(v);
            }
        }
        std::size_t singles = xs.size();
        for (std::size_t i = 1; i < singles; ++i)
            for (std::size_t j = i + 1; j < singles; ++j) {
                Vec v(m.ambient);
                for (std::size_t k = 0; k < m.ambient; ++k) v[k] = (xs[i][k] + xs[j][k]) % mod.q;
                xs.push_back(v);
            }
    } else {
        ZpnModule free_f(mod, m.ambient);
        xs = free_f.elements();  // all of F, guarded
    }
    for (const auto& x : xs) {
        for (std::size_t r = 0; r < m.rel.rows; ++r) {
            for (std::uint64_t lambda = 1; lambda < mod.q; ++lambda) {
                Vec y(m.ambient);
                for (std::size_t k = 0; k < m.ambient; ++k)
                    y[k] = mod.mul(lambda, m.rel.at(r, k));
                Vec xy(m.ambient);
                for (std::size_t k = 0; k < m.ambient; ++k) xy[k] = mod.add(x[k], y[k]);
                SymbolDist a = expand_pure_symbol(mod, xy, d);
                SymbolDist b = expand_pure_symbol(mod, x, d);
                Vec row(g.basis.size(), 0);
                for (auto& [mi, c] : a) row[g.index.at(mi)] = c;
                for (auto& [mi, c] : b) {
                    std::size_t idx = g.index.at(mi);
                    row[idx] = mod.sub(row[idx], c);
                }
                bool nz = false;
                for (auto c : row) nz |= (c != 0);
                if (nz) rel_rows.push_back(std::move(row));
            }
        }
    }
    ZpnMat rel = rel_rows.empty() ? ZpnMat(mod, 0, g.basis.size())
                                  : ZpnMat::from_rows(mod, rel_rows);
    g.module = ZpnModule(mod, g.basis.size(), rel);
    return g;
}

ModuleMap gamma_map(const GammaModule& dom, const GammaModule& cod, const ModuleMap& f) {
    if (dom.d != cod.d) throw std::invalid_argument("gamma_map: degree mismatch");
    ZpnMat mat(dom.mod, dom.basis.size(), cod.basis.size());
    for (std::size_t bi = 0; bi < dom.basis.size(); ++bi) {
        // symbol prod_i [e_i]_{a_i} maps to prod_i [f(e_i)]_{a_i}
        const MultiIndex& a = dom.basis[bi];
        SymbolDist acc;
        acc[MultiIndex(cod.source.ambient, 0)] = 1;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            Vec ei(dom.source.ambient, 0);
            ei[i] = 1;
            Vec fe = cod.source.reduce(f.matrix.apply(ei));
            acc = symbol_merge(dom.mod, acc, expand_pure_symbol(dom.mod, fe, a[i]));
        }
        Vec row = cod.dist_to_coords(acc);
        for (std::size_t j = 0; j < cod.basis.size(); ++j) mat.at(bi, j) = row[j];
    }
    return ModuleMap(dom.module, cod.module, mat);
}

Vec SymModule::product_of(const std::vector<Vec>& xs) const {
    if (xs.size() != d) throw std::invalid_argument("SymModule::product_of: need d factors");
    // multilinear expansion into monomials
    std::map<MultiIndex, std::uint64_t> acc;
    acc[MultiIndex(source.ambient, 0)] = 1;
    for (auto& x : xs) {
        std::map<MultiIndex, std::uint64_t> next;
        for (auto& [m, c] : acc)
            for (std::size_t i = 0; i < source.ambient; ++i) {
                if (!x[i]) continue;
                MultiIndex mm = m;
                ++mm[i];
                std::uint64_t cc = (c * (x[i] % mod.q)) % mod.q;
                if (!cc) continue;
                next[mm] = (next.count(mm) ? next[mm] + cc : cc) % mod.q;
            }
        acc = std::move(next);
    }
    Vec v(basis.size(), 0);
    for (auto& [m, c] : acc)
        if (c % mod.q) v[index.at(m)] = c % mod.q;
    return module.reduce(v);
}

SymModule sym_module(Mod mod, const ZpnModule& m, std::uint32_t d) {
    SymModule s;
    s.mod = mod;
    s.d = d;
    s.source = m;
    s.basis = compositions(m.ambient, d);
    for (std::size_t i = 0; i < s.basis.size(); ++i) s.index[s.basis[i]] = i;
    std::vector<Vec> rel_rows;
    auto lower = compositions(m.ambient, d - 1);
    for (std::size_t r = 0; r < m.rel.rows; ++r) {
        Vec y = m.rel.row(r);
        for (auto& mono : lower) {
            Vec row(s.basis.size(), 0);
            for (std::size_t i = 0; i < m.ambient; ++i) {
                if (!y[i]) continue;
                MultiIndex mm = mono;
                ++mm[i];
                std::size_t idx = s.index.at(mm);
                row[idx] = mod.add(row[idx], y[i]);
            }
            bool nz = false;
            for (auto c : row) nz |= (c != 0);
            if (nz) rel_rows.push_back(std::move(row));
        }
    }
    ZpnMat rel = rel_rows.empty() ? ZpnMat(mod, 0, s.basis.size())
                                  : ZpnMat::from_rows(mod, rel_rows);
    s.module = ZpnModule(mod, s.basis.size(), rel);
    return s;
}

ModuleMap divided_symbol_map(const SymModule& s, const GammaModule& g) {
    if (s.d != g.d || !(s.mod == g.mod)) throw std::invalid_argument("divided_symbol_map: mismatch");
    Mod mod = s.mod;
    // 1/(p-1)! in Z/p^n
    std::uint64_t fact = 1;
    for (std::uint32_t k = 2; k < s.d; ++k) fact = fact * k % mod.q;
    std::uint64_t invfact = mod.inv(fact);
    ZpnMat mat(mod, s.basis.size(), g.basis.size());
    for (std::size_t bi = 0; bi < s.basis.size(); ++bi) {
        const MultiIndex& a = s.basis[bi];
        std::uint64_t c = invfact;
        for (auto e : a) {
            std::uint64_t f = 1;
            for (std::uint32_t k = 2; k <= e; ++k) f = f * k % mod.q;
            c = c * f % mod.q;
        }
        mat.at(bi, g.index.at(a)) = c;
    }
    return ModuleMap(s.module, g.module, mat);
}

namespace {

// all non-negative integer matrices with prescribed row/column sums
void enumerate_matrices(const MultiIndex& rows, const MultiIndex& cols,
                        const std::function<void(const std::vector<MultiIndex>&)>& visit) {
    std::size_t r = rows.size(), c = cols.size();
    std::vector<MultiIndex> t(r, MultiIndex(c, 0));
    MultiIndex colleft = cols;
    std::function<void(std::size_t)> rec_row = [&](std::size_t i) {
        if (i == r) {
            bool done = std::all_of(colleft.begin(), colleft.end(), [](auto x) { return x == 0; });
            if (done) visit(t);
            return;
        }
        // enumerate row i with sum rows[i] bounded by colleft
        std::function<void(std::size_t, std::uint32_t)> rec_col = [&](std::size_t j,
                                                                      std::uint32_t left) {
            if (j + 1 == c) {
                if (left <= colleft[j]) {
                    t[i][j] = left;
                    colleft[j] -= left;
                    rec_row(i + 1);
                    colleft[j] += left;
                    t[i][j] = 0;
                }
                return;
            }
            for (std::uint32_t e = 0; e <= std::min(left, colleft[j]); ++e) {
                t[i][j] = e;
                colleft[j] -= e;
                rec_col(j + 1, left - e);
                colleft[j] += e;
                t[i][j] = 0;
            }
        };
        rec_col(0, rows[i]);
    };
    rec_row(0);
}

}  // namespace

Vec gamma_ring_product(const GammaModule& g, const Vec& u, const Vec& v,
                       const std::function<Vec(const Vec&, const Vec&)>& mult) {
    Mod mod = g.mod;
    std::size_t amb = g.source.ambient;
    Vec acc(g.basis.size(), 0);
    for (std::size_t bu = 0; bu < g.basis.size(); ++bu) {
        if (!(u[bu] % mod.q)) continue;
        for (std::size_t bv = 0; bv < g.basis.size(); ++bv) {
            if (!(v[bv] % mod.q)) continue;
            std::uint64_t cuv = u[bu] % mod.q * (v[bv] % mod.q) % mod.q;
            enumerate_matrices(g.basis[bu], g.basis[bv], [&](const std::vector<MultiIndex>& t) {
                SymbolDist dist;
                dist[MultiIndex(amb, 0)] = 1;
                for (std::size_t i = 0; i < amb; ++i)
                    for (std::size_t j = 0; j < amb; ++j) {
                        if (!t[i][j]) continue;
                        Vec ei(amb, 0), ej(amb, 0);
                        ei[i] = 1;
                        ej[j] = 1;
                        Vec prod = mult(ei, ej);
                        dist = symbol_merge(mod, dist, expand_pure_symbol(mod, prod, t[i][j]));
                    }
                for (auto& [mi, c] : dist) {
                    std::size_t idx = g.index.at(mi);
                    acc[idx] = (acc[idx] + cuv * c) % mod.q;
                }
            });
        }
    }
    return g.module.reduce(acc);
}

PolynomialLaw pure_symbol_law(const GammaModule& g) {
    PolynomialLaw law;
    law.degree = g.d;
    GammaModule gm = g;
    law.value = [gm](const Vec& x) { return gm.pure_symbol(x); };
    law.coeffs_at = [gm](const std::vector<Vec>& xs) {
        // [u_1 x_1 + ... + u_k x_k]_d = sum_{|a|=d} u^a prod_i [x_i]_{a_i}
        std::map<MultiIndex, Vec> out;
        for (auto& a : compositions(xs.size(), gm.d)) {
            SymbolDist acc;
            acc[MultiIndex(gm.source.ambient, 0)] = 1;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (!a[i]) continue;
                acc = symbol_merge(gm.mod, acc, expand_pure_symbol(gm.mod, xs[i], a[i]));
            }
            out[a] = gm.module.reduce(gm.dist_to_coords(acc));
        }
        return out;
    };
    return law;
}

AMat::AMat(FpAlgebra a, std::size_t r, std::size_t c)
    : alg(std::move(a)), rows(r), cols(c), e(r * c, Vec(alg.dim, 0)) {}

AMat AMat::identity(const FpAlgebra& a, std::size_t k) {
    AMat m(a, k, k);
    for (std::size_t i = 0; i < k; ++i) m.at(i, i) = a.unit;
    return m;
}

AMat AMat::mul(const AMat& o) const {
    if (cols != o.rows) throw std::invalid_argument("AMat::mul shape");
    AMat r(alg, rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k)
            for (std::size_t j = 0; j < o.cols; ++j)
                r.at(i, j) = alg.add(r.at(i, j), alg.mul(at(i, k), o.at(k, j)));
    return r;
}

AMat AMat::transpose() const {
    AMat r(alg, cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

ZpnMat AMat::to_fp() const {
    Mod fp(alg.p, 1);
    std::uint32_t d = alg.dim;
    ZpnMat m(fp, rows * d, cols * d);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            for (std::uint32_t u = 0; u < d; ++u) {
                Vec bu(d, 0);
                bu[u] = 1;
                Vec w = alg.mul(bu, at(i, j));
                for (std::uint32_t v = 0; v < d; ++v) m.at(i * d + u, j * d + v) = w[v];
            }
    return m;
}

BundleOps bundle_ops(const FpAlgebra& a, std::uint32_t rank) {
    BundleOps b;
    b.alg = a;
    b.rank = rank;
    std::uint32_t p = a.p;
    b.deg_p = compositions(rank, p);
    for (std::size_t i = 0; i < b.deg_p.size(); ++i) {
        bool is_pure = false;
        for (std::uint32_t k = 0; k < rank; ++k)
            if (b.deg_p[i][k] == p) is_pure = true;
        if (is_pure)
            b.pure.push_back(i);
        else
            b.nonpure.push_back(i);
    }
    std::size_t s = b.deg_p.size();
    b.ver = AMat(a, rank, s);
    for (std::uint32_t k = 0; k < rank; ++k) {
        MultiIndex m(rank, 0);
        m[k] = p;
        std::size_t idx = std::find(b.deg_p.begin(), b.deg_p.end(), m) - b.deg_p.begin();
        b.ver.at(k, idx) = a.unit;
    }
    b.frob = AMat(a, s, rank);
    for (std::size_t i = 0; i < s; ++i)
        for (std::uint32_t k = 0; k < rank; ++k)
            if (b.deg_p[i][k] == p) b.frob.at(i, k) = a.unit;
    b.sym_proj = AMat(a, s, b.nonpure.size());
    for (std::size_t j = 0; j < b.nonpure.size(); ++j) b.sym_proj.at(b.nonpure[j], j) = a.unit;
    b.gamma_incl = AMat(a, b.nonpure.size(), s);
    for (std::size_t j = 0; j < b.nonpure.size(); ++j) b.gamma_incl.at(j, b.nonpure[j]) = a.unit;
    b.alpha = AMat(a, s, s);
    for (std::size_t i = 0; i < s; ++i) {
        std::uint64_t c = 1;
        for (auto e : b.deg_p[i])
            for (std::uint32_t k = 2; k <= e; ++k) c = c * k % p;
        b.alpha.at(i, i) = a.scale(c, a.unit);
    }
    b.alpha_bar = AMat(a, b.nonpure.size(), b.nonpure.size());
    for (std::size_t i = 0; i < b.nonpure.size(); ++i) {
        std::uint64_t c = 1;
        for (auto e : b.deg_p[b.nonpure[i]])
            for (std::uint32_t k = 2; k <= e; ++k) c = c * k % p;
        b.alpha_bar.at(i, i) = a.scale(c, a.unit);
    }
    return b;
}

ExactnessResult amat_exact(const std::vector<AMat>& chain) {
    std::vector<ModuleMap> maps;
    Mod fp(chain.empty() ? 2 : chain[0].alg.p, 1);
    for (auto& m : chain) {
        ZpnMat f = m.to_fp();
        maps.emplace_back(ZpnModule(fp, f.rows), ZpnModule(fp, f.cols), f);
    }
    return is_exact(maps);
}

bool gamma_zero_iso_is_bijective(const BundleOps& b) {
    // alpha kills the image of ver: alpha(v^p) = p! m_{p e_i} = 0
    AMat va = b.ver.mul(b.alpha);
    for (auto& entry : va.e)
        if (!b.alg.is_zero(entry)) return false;
    // induced map on the quotient/sub bases is bijective over F_p
    ZpnMat m = b.alpha_bar.to_fp();
    return m.rows == m.cols && nullspace(m).rows == 0;
}

bool duality_check(const FpAlgebra& a, std::uint32_t rank) {
    BundleOps bv = bundle_ops(a, rank);   // for V
    BundleOps bd = bundle_ops(a, rank);   // for V^dual (same shape, dual basis)
    // dual of  0 -> Frob^*(V^d) --ver--> Sym^p(V^d) --q--> SymBar -> 0
    // reads    0 -> SymBar^d --q^T--> Sym^p(V^d)^d --ver^T--> Frob^*(V^d)^d -> 0
    // under the pairing <m_a, e^b> = delta_{ab}: Sym^p(V^d)^d = Gamma^p(V),
    // Frob^*(V^d)^d = Frob^*(V), SymBar^d = GammaBar.
    AMat verT = bd.ver.transpose();
    AMat qT = bd.sym_proj.transpose();
    if (!(verT == bv.frob)) return false;       // ver^T becomes frob
    if (!(qT == bv.gamma_incl.transpose().transpose() && qT == bv.gamma_incl)) {
        // q^T must equal the inclusion GammaBar -> Gamma^p
        if (!(qT == bv.gamma_incl)) return false;
    }
    // and the dual sequence is exact
    auto ex = amat_exact({qT, verT});
    return ex.exact;
}

FourTermSequence fundamental_two_extension(const FpAlgebra& a, std::uint32_t rank) {
    FourTermSequence f;
    f.ops = bundle_ops(a, rank);
    f.left = f.ops.ver;
    f.middle = f.ops.alpha;
    f.right = f.ops.frob;
    // check the four-term sequence with zero ends
    std::vector<AMat> chain;
    AMat zl(a, 0, rank);
    AMat zr(a, rank, 0);
    chain.push_back(zl);
    chain.push_back(f.left);
    chain.push_back(f.middle);
    chain.push_back(f.right);
    chain.push_back(zr);
    f.exact = amat_exact(chain);
    return f;
}

}  // namespace wittkit
