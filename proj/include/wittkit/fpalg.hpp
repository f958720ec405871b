#pragma once

// Finite-dimensional commutative F_p-algebras given by structure constant
// tables, graded truncated polynomial algebras, Frobenius and localization.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wittkit/zpn.hpp"

namespace wittkit {

// Commutative unital F_p-algebra of dimension `dim`. Elements are
// coordinate vectors over F_p with respect to `basis_labels`. The
// multiplication table is verified commutative, associative and unital at
// construction.
struct FpAlgebra {
    std::uint32_t p = 2;
    std::uint32_t dim = 1;
    std::vector<std::string> basis_labels;
    // table[i*dim + j] = coordinates of basis_i * basis_j
    std::vector<Vec> table;
    Vec unit;

    FpAlgebra() = default;
    FpAlgebra(std::uint32_t p_, std::vector<std::string> labels, std::vector<Vec> mult_table,
              Vec unit_vec);

    static FpAlgebra prime_field(std::uint32_t p);
    // F_{p^2} as F_p[x]/(x^2 - nonresidue...) -- provided for p=2 (F_4) and p=3 (F_9).
    static FpAlgebra quadratic_field(std::uint32_t p);
    // F_p[t]/(t^2)
    static FpAlgebra dual_numbers(std::uint32_t p);
    // F_p[t]/(f) for a monic univariate f, coefficients low-to-high, f[deg]=1.
    static FpAlgebra univariate_quotient(std::uint32_t p, const Vec& monic_coeffs,
                                         const std::string& var = "t");
    FpAlgebra tensor_with(const FpAlgebra& other) const;  // product algebra A x B

    Vec zero() const { return Vec(dim, 0); }
    Vec add(const Vec& a, const Vec& b) const;
    Vec sub(const Vec& a, const Vec& b) const;
    Vec scale(std::uint64_t c, const Vec& a) const;
    Vec mul(const Vec& a, const Vec& b) const;
    Vec pow(const Vec& a, std::uint64_t e) const;
    bool is_zero(const Vec& a) const;
    std::uint64_t size() const;  // p^dim
    std::vector<Vec> elements() const;
    bool is_unit_elem(const Vec& a) const;

    bool operator==(const FpAlgebra& o) const {
        return p == o.p && dim == o.dim && table == o.table && unit == o.unit;
    }
};

// A homomorphism of F_p-algebras, stored by the images of the domain
// basis. Unitality and multiplicativity are verified at construction.
struct AlgebraMorphism {
    FpAlgebra domain, codomain;
    std::vector<Vec> images;

    AlgebraMorphism() = default;
    AlgebraMorphism(FpAlgebra dom, FpAlgebra cod, std::vector<Vec> images_of_basis);
    Vec apply(const Vec& x) const;
    AlgebraMorphism compose(const AlgebraMorphism& then) const;
    ZpnMat matrix() const;  // as an F_p-linear map
    bool is_bijective() const;
};

// x -> x^p as an endomorphism of A.
AlgebraMorphism frobenius(const FpAlgebra& a);

// A-module given by its underlying F_p-space and an action matrix per
// basis element of A. Module axioms are verified at construction.
struct AModule {
    FpAlgebra alg;
    std::uint32_t dim = 0;
    std::vector<ZpnMat> action;  // action[i]: dim x dim matrix of basis_i

    AModule() = default;
    AModule(FpAlgebra a, std::uint32_t d, std::vector<ZpnMat> act);
    static AModule regular(const FpAlgebra& a);  // A over itself
    Vec act(const Vec& scalar, const Vec& x) const;
};

// A with the action twisted through Frobenius: a . s = a^p s.
AModule frobenius_pushforward_module(const FpAlgebra& a);

// Localization of a finite ring at f: A_f = e * A for the idempotent e
// obtained by stabilizing the powers of f. May be the zero ring.
struct Localization {
    FpAlgebra local;         // A_f (dim 0 when the zero ring)
    AlgebraMorphism to_local;  // A -> A_f
    Vec idempotent;          // e in A
    std::vector<Vec> basis_in_ambient;  // basis of e*A as elements of A
};
Localization localize(const FpAlgebra& a, const Vec& f);

bool is_reduced(const FpAlgebra& a);

// A / nilradical together with the quotient map.
struct ReducedQuotient {
    FpAlgebra quotient;
    AlgebraMorphism projection;
};
ReducedQuotient reduced_quotient(const FpAlgebra& a);

// Multivariate monomial: exponents per generator.
using Monomial = std::vector<std::uint32_t>;

// Truncated graded polynomial algebra over F_p on `gen_degrees.size()`
// generators; products beyond degree `truncation` throw
// TruncationOverflow instead of silently dropping terms.
struct TruncationOverflow : std::runtime_error {
    explicit TruncationOverflow(const std::string& w) : std::runtime_error(w) {}
};

struct GradedAlgebra {
    std::uint32_t p = 2;
    std::vector<std::uint32_t> gen_degrees;
    std::uint32_t truncation = 0;

    GradedAlgebra() = default;
    GradedAlgebra(std::uint32_t p_, std::vector<std::uint32_t> degrees, std::uint32_t truncation_);
    // symmetric algebra of a d-dimensional space, truncated
    static GradedAlgebra symmetric(std::uint32_t p_, std::uint32_t d, std::uint32_t truncation_);

    std::uint32_t degree_of(const Monomial& m) const;
    std::vector<Monomial> slice_basis(std::uint32_t degree) const;
    std::uint64_t slice_dim(std::uint32_t degree) const;
};

// Element of a graded algebra: sparse monomial -> coefficient map. All
// arithmetic checks the truncation bound.
struct GradedElem {
    const GradedAlgebra* ring = nullptr;
    std::map<Monomial, std::uint64_t> coeffs;

    GradedElem() = default;
    explicit GradedElem(const GradedAlgebra& r) : ring(&r) {}
    static GradedElem generator(const GradedAlgebra& r, std::size_t i);
    static GradedElem constant(const GradedAlgebra& r, std::uint64_t c);
    static GradedElem monomial(const GradedAlgebra& r, const Monomial& m, std::uint64_t c);

    bool is_zero() const { return coeffs.empty(); }
    bool is_homogeneous(std::uint32_t degree) const;
    GradedElem add(const GradedElem& o) const;
    GradedElem sub(const GradedElem& o) const;
    GradedElem mul(const GradedElem& o) const;
    GradedElem scale(std::uint64_t c) const;
    GradedElem pow(std::uint64_t e) const;
    bool operator==(const GradedElem& o) const { return coeffs == o.coeffs; }
};

}  // namespace wittkit
