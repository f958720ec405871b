#include "wittkit/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace wittkit {

bool Presentation::operator==(const Presentation& o) const {
    auto key = [](const Presentation& x) {
        std::ostringstream os;
        os << static_cast<int>(x.kind) << '|' << x.p << '|' << x.n << '|' << x.dimension_cap;
        for (auto& g : x.generators) os << '|' << g;
        for (auto& r : x.relators) {
            os << "/R";
            for (auto& [t, c] : r.terms) {
                os << c;
                for (auto& [g, e] : t) os << g << '^' << e;
            }
        }
        return os.str();
    };
    return key(*this) == key(o);
}

namespace {

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    char get() {
        skip_ws();
        if (pos >= src.size()) throw ParseError("unexpected end of input", line, col);
        char c = src[pos++];
        ++col;
        return c;
    }
    void expect(char c) {
        int l = line, co = col;
        char g = get();
        if (g != c)
            throw ParseError(std::string("expected '") + c + "', found '" + g + "'", l, co);
    }
    bool accept(char c) {
        if (peek() == c) {
            get();
            return true;
        }
        return false;
    }
    std::uint64_t integer() {
        skip_ws();
        int l = line, co = col;
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw ParseError("expected an integer", l, co);
        std::uint64_t v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + static_cast<std::uint64_t>(src[pos] - '0');
            if (v > (1ull << 40)) throw ParseError("integer too large", l, co);
            ++pos;
            ++col;
        }
        return v;
    }
    std::string ident() {
        skip_ws();
        int l = line, co = col;
        if (pos >= src.size() || !std::isalpha(static_cast<unsigned char>(src[pos])))
            throw ParseError("expected an identifier", l, co);
        std::string s;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                    src[pos] == '_')) {
            s.push_back(src[pos++]);
            ++col;
        }
        return s;
    }
};

// term := [int] factor (('*'|implicit) factor)*; factor := ident ['^' int]
Polynomial parse_poly(Lexer& lx, const std::vector<std::string>& gens) {
    auto known = [&](const std::string& g, int l, int c) {
        if (std::find(gens.begin(), gens.end(), g) == gens.end())
            throw ParseError("unknown generator '" + g + "'", l, c);
    };
    Polynomial poly;
    bool first = true;
    while (true) {
        std::int64_t sign = 1;
        char c = lx.peek();
        if (c == '+' || c == '-') {
            lx.get();
            sign = (c == '-') ? -1 : 1;
        } else if (!first) {
            break;
        }
        first = false;
        std::int64_t coef = 1;
        bool saw_any = false;
        PolyTerm term;
        if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
            coef = static_cast<std::int64_t>(lx.integer());
            saw_any = true;
        }
        while (true) {
            lx.accept('*');
            char nc = lx.peek();
            if (!std::isalpha(static_cast<unsigned char>(nc))) break;
            int l = lx.line, co = lx.col;
            std::string g = lx.ident();
            known(g, l, co);
            std::uint32_t e = 1;
            if (lx.accept('^')) e = static_cast<std::uint32_t>(lx.integer());
            term[g] += e;
            saw_any = true;
        }
        if (!saw_any) throw ParseError("expected a term", lx.line, lx.col);
        poly.terms[term] += sign * coef;
        if (poly.terms[term] == 0) poly.terms.erase(term);
    }
    return poly;
}

}  // namespace

Presentation parse_presentation(const std::string& text) {
    Lexer lx(text);
    Presentation p;
    int l = lx.line, c = lx.col;
    std::size_t mark = lx.pos;
    int mark_line = lx.line, mark_col = lx.col;
    std::string kind = lx.ident();
    if (kind == "algebra") {
        p.kind = PresentationKind::Algebra;
    } else if (kind == "module") {
        p.kind = PresentationKind::Module;
    } else if (kind == "extension") {
        throw ParseError("extension presentations are not supported by this build", l, c);
    } else if (kind.size() >= 2 && (kind[0] == 'F' || kind[0] == 'Z') &&
               std::isdigit(static_cast<unsigned char>(kind[1]))) {
        // bare coefficient ring: an implicit algebra/module presentation
        p.kind = kind[0] == 'F' ? PresentationKind::Algebra : PresentationKind::Module;
        lx.pos = mark;
        lx.line = mark_line;
        lx.col = mark_col;
    } else {
        throw ParseError("expected 'algebra' or 'module', found '" + kind + "'", l, c);
    }

    l = lx.line;
    c = lx.col;
    std::string ring = lx.ident();
    if (p.kind == PresentationKind::Algebra) {
        if (ring.size() < 2 || ring[0] != 'F')
            throw ParseError("expected a coefficient field like F2", l, c);
        std::uint64_t q = std::stoull(ring.substr(1));
        if (!is_prime(q))
            throw ParseError(std::to_string(q) + " is not prime (prime fields only)", l, c);
        p.p = static_cast<std::uint32_t>(q);
        p.n = 1;
    } else {
        if (ring.size() < 2 || ring[0] != 'Z')
            throw ParseError("expected a coefficient ring like Z4", l, c);
        std::uint64_t q = std::stoull(ring.substr(1));
        std::uint32_t prime = 0, exp = 0;
        for (std::uint32_t cand = 2; cand <= q; ++cand) {
            if (!is_prime(cand) || q % cand) continue;
            std::uint64_t t = q;
            std::uint32_t e = 0;
            while (t % cand == 0) {
                t /= cand;
                ++e;
            }
            if (t == 1) {
                prime = cand;
                exp = e;
            }
            break;
        }
        if (!prime) throw ParseError(std::to_string(q) + " is not a prime power", l, c);
        p.p = prime;
        p.n = exp;
    }
    if (lx.accept('[')) {
        while (true) {
            p.generators.push_back(lx.ident());
            if (!lx.accept(',')) break;
        }
        lx.expect(']');
    }
    if (lx.accept('/')) {
        lx.expect('(');
        if (!lx.accept(')')) {
            while (true) {
                p.relators.push_back(parse_poly(lx, p.generators));
                if (!lx.accept(';')) break;
            }
            lx.expect(')');
        }
    }
    if (!lx.eof()) {
        int ll = lx.line, cc = lx.col;
        std::string kw = lx.ident();
        if (kw != "cap") throw ParseError("unexpected trailing input '" + kw + "'", ll, cc);
        p.dimension_cap = static_cast<std::uint32_t>(lx.integer());
        if (!lx.eof()) throw ParseError("unexpected trailing input", lx.line, lx.col);
    }
    return p;
}

std::string format_presentation(const Presentation& p) {
    std::ostringstream os;
    os << (p.kind == PresentationKind::Algebra ? "algebra F" : "module Z");
    os << (p.kind == PresentationKind::Algebra ? p.p : pow_u64(p.p, p.n));
    if (!p.generators.empty()) {
        os << '[';
        for (std::size_t i = 0; i < p.generators.size(); ++i) {
            if (i) os << ',';
            os << p.generators[i];
        }
        os << ']';
    }
    if (!p.relators.empty()) {
        os << "/(";
        for (std::size_t i = 0; i < p.relators.size(); ++i) {
            if (i) os << "; ";
            bool first = true;
            for (auto& [t, c] : p.relators[i].terms) {
                std::int64_t coef = c;
                if (!first) {
                    os << (coef < 0 ? " - " : " + ");
                    if (coef < 0) coef = -coef;
                } else if (coef < 0) {
                    os << '-';
                    coef = -coef;
                }
                first = false;
                bool printed = false;
                if (coef != 1 || t.empty()) {
                    os << coef;
                    printed = true;
                }
                for (auto& [g, e] : t) {
                    if (printed) os << '*';
                    os << g;
                    if (e > 1) os << '^' << e;
                    printed = true;
                }
            }
            if (p.relators[i].terms.empty()) os << '0';
        }
        os << ')';
    }
    if (p.dimension_cap != 64) os << " cap " << p.dimension_cap;
    return os.str();
}

namespace {

using MonoKey = std::vector<std::uint32_t>;

std::uint32_t degree_of(const MonoKey& m) {
    std::uint32_t d = 0;
    for (auto e : m) d += e;
    return d;
}

// graded-lex descending: higher degree first, then lexicographically larger
bool mono_greater(const MonoKey& a, const MonoKey& b) {
    std::uint32_t da = degree_of(a), db = degree_of(b);
    if (da != db) return da > db;
    return a > b;
}

std::vector<MonoKey> monomials_up_to(std::size_t gens, std::uint32_t maxdeg) {
    std::vector<MonoKey> out;
    MonoKey cur(gens, 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t left) {
        if (i == gens) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t e = 0; e <= left; ++e) {
            cur[i] = e;
            rec(i + 1, left - e);
        }
        cur[i] = 0;
    };
    rec(0, maxdeg);
    std::sort(out.begin(), out.end(), mono_greater);
    return out;
}

}  // namespace

FpAlgebra algebra_from_presentation(const Presentation& pres) {
    if (pres.kind != PresentationKind::Algebra)
        throw std::invalid_argument("algebra_from_presentation: not an algebra presentation");
    std::uint32_t p = pres.p;
    std::size_t g = pres.generators.size();
    std::map<std::string, std::size_t> gidx;
    for (std::size_t i = 0; i < g; ++i) gidx[pres.generators[i]] = i;
    // polynomial -> exponent-vector form
    std::vector<std::map<MonoKey, std::uint64_t>> rels;
    std::uint32_t maxreldeg = 1;
    for (auto& r : pres.relators) {
        std::map<MonoKey, std::uint64_t> rr;
        for (auto& [t, c] : r.terms) {
            MonoKey m(g, 0);
            std::uint32_t deg = 0;
            for (auto& [name, e] : t) {
                m[gidx.at(name)] += e;
                deg += e;
            }
            maxreldeg = std::max(maxreldeg, deg);
            std::int64_t cc = c % static_cast<std::int64_t>(p);
            if (cc < 0) cc += p;
            if (cc) rr[m] = static_cast<std::uint64_t>(cc);
        }
        if (!rr.empty()) rels.push_back(std::move(rr));
    }
    Mod fp(p, 1);
    std::vector<MonoKey> nf_prev;
    for (std::uint32_t deg = maxreldeg;; ++deg) {
        if (deg > 2 * pres.dimension_cap + maxreldeg + 4)
            throw std::invalid_argument(
                "algebra_from_presentation: no finite normal-form basis found within the "
                "dimension cap (is the quotient finite-dimensional?)");
        std::vector<MonoKey> monos = monomials_up_to(g, deg);
        std::map<MonoKey, std::size_t> mindex;
        for (std::size_t i = 0; i < monos.size(); ++i) mindex[monos[i]] = i;
        // rows: m * f for every monomial m with deg(m f) <= deg
        std::vector<Vec> rows;
        for (auto& f : rels) {
            std::uint32_t fdeg = 0;
            for (auto& [m, c] : f) fdeg = std::max(fdeg, degree_of(m));
            for (auto& shift : monomials_up_to(g, deg - std::min(deg, fdeg))) {
                Vec row(monos.size(), 0);
                bool fits = true;
                for (auto& [m, c] : f) {
                    MonoKey mm(g);
                    for (std::size_t i = 0; i < g; ++i) mm[i] = m[i] + shift[i];
                    if (degree_of(mm) > deg) {
                        fits = false;
                        break;
                    }
                    row[mindex.at(mm)] = (row[mindex.at(mm)] + c) % p;
                }
                if (fits) rows.push_back(std::move(row));
            }
        }
        ZpnMat mat = rows.empty() ? ZpnMat(fp, 0, monos.size()) : ZpnMat::from_rows(fp, rows);
        ZpnMat h = howell_form(mat);
        // pivot columns = leading monomials; normal forms = the rest
        std::vector<bool> pivot(monos.size(), false);
        for (std::size_t i = 0; i < h.rows; ++i) {
            std::size_t lead = 0;
            while (lead < monos.size() && h.at(i, lead) == 0) ++lead;
            if (lead < monos.size()) pivot[lead] = true;
        }
        std::vector<MonoKey> nf;
        for (std::size_t i = 0; i < monos.size(); ++i)
            if (!pivot[i]) nf.push_back(monos[i]);
        if (nf.size() > pres.dimension_cap)
            throw std::invalid_argument("algebra_from_presentation: dimension cap " +
                                        std::to_string(pres.dimension_cap) + " exceeded");
        // closure: multiplying a normal form by a generator stays below deg
        std::uint32_t maxnf = 0;
        for (auto& m : nf) maxnf = std::max(maxnf, degree_of(m));
        bool closed = (2 * maxnf + maxreldeg <= deg);
        if (!(closed && nf == nf_prev)) {
            nf_prev = nf;
            continue;
        }
        // assemble the table: NF(m_i * m_j)
        ZpnModule reducer(fp, monos.size(), h);
        auto normal_form = [&](const MonoKey& m) {
            Vec v(monos.size(), 0);
            v[mindex.at(m)] = 1;
            return reducer.reduce(v);
        };
        std::map<MonoKey, std::size_t> nfindex;
        for (std::size_t i = 0; i < nf.size(); ++i) nfindex[nf[i]] = i;
        auto project_nf = [&](const Vec& full) {
            Vec out(nf.size(), 0);
            for (std::size_t i = 0; i < monos.size(); ++i) {
                if (!full[i]) continue;
                auto it = nfindex.find(monos[i]);
                if (it == nfindex.end())
                    throw std::logic_error("algebra_from_presentation: reduction not in normal form");
                out[it->second] = full[i];
            }
            return out;
        };
        std::vector<Vec> table(nf.size() * nf.size());
        for (std::size_t i = 0; i < nf.size(); ++i)
            for (std::size_t j = 0; j < nf.size(); ++j) {
                MonoKey prod(g);
                for (std::size_t k = 0; k < g; ++k) prod[k] = nf[i][k] + nf[j][k];
                table[i * nf.size() + j] = project_nf(normal_form(prod));
            }
        std::vector<std::string> labels;
        for (auto& m : nf) {
            std::string s;
            for (std::size_t k = 0; k < g; ++k) {
                if (!m[k]) continue;
                if (!s.empty()) s += "*";
                s += pres.generators[k];
                if (m[k] > 1) s += "^" + std::to_string(m[k]);
            }
            labels.push_back(s.empty() ? "1" : s);
        }
        Vec unit = project_nf(normal_form(MonoKey(g, 0)));
        return FpAlgebra(p, std::move(labels), std::move(table), std::move(unit));
    }
}

ZpnModule module_from_presentation(const Presentation& pres) {
    if (pres.kind != PresentationKind::Module)
        throw std::invalid_argument("module_from_presentation: not a module presentation");
    Mod mod(pres.p, pres.n);
    std::map<std::string, std::size_t> gidx;
    for (std::size_t i = 0; i < pres.generators.size(); ++i) gidx[pres.generators[i]] = i;
    std::vector<Vec> rows;
    for (auto& r : pres.relators) {
        Vec row(pres.generators.size(), 0);
        for (auto& [t, c] : r.terms) {
            if (t.size() != 1 || t.begin()->second != 1)
                throw std::invalid_argument(
                    "module_from_presentation: relators must be linear in the generators");
            std::int64_t cc = c % static_cast<std::int64_t>(mod.q);
            if (cc < 0) cc += static_cast<std::int64_t>(mod.q);
            row[gidx.at(t.begin()->first)] =
                (row[gidx.at(t.begin()->first)] + static_cast<std::uint64_t>(cc)) % mod.q;
        }
        rows.push_back(std::move(row));
    }
    ZpnMat rel = rows.empty() ? ZpnMat(mod, 0, pres.generators.size())
                              : ZpnMat::from_rows(mod, rows);
    return ZpnModule(mod, pres.generators.size(), rel);
}

}  // namespace wittkit
