#pragma once

// Chart-based model of the projective space of V = k^d over k = F_p:
// global sections of the Witt lifts of the twisting sheaf in two models,
// the multiplicative section, evaluation, the divided-power pairing, and
// the W_2 lift of the tautological bundle.

#include <functional>
#include <map>
#include <optional>

#include "wittkit/divpow.hpp"
#include "wittkit/finring.hpp"
#include "wittkit/fpalg.hpp"
#include "wittkit/witt.hpp"

namespace wittkit {

// Homogeneous fraction num / prod e_k^{den_k} inside the truncated
// symmetric algebra; deg(num) = deg(den) so the value is a degree-0
// function on the chart where the denominator is invertible.
struct HFrac {
    const GradedAlgebra* ring = nullptr;
    GradedElem num;
    Monomial den;  // exponents of the denominator monomial

    static HFrac of(const GradedAlgebra& r, GradedElem n, Monomial d);
    static HFrac zero(const GradedAlgebra& r);
    static HFrac one(const GradedAlgebra& r);
    static HFrac variable_ratio(const GradedAlgebra& r, std::size_t k, std::size_t i);  // e_k/e_i
    HFrac add(const HFrac& o) const;
    HFrac sub(const HFrac& o) const;
    HFrac mul(const HFrac& o) const;
    HFrac scale(std::uint64_t c) const;
    bool equals(const HFrac& o) const;  // cross-multiplied
    bool is_zero() const { return num.is_zero(); }
};

// Witt vectors with homogeneous-fraction components (chart arithmetic).
using WittFrac = std::vector<HFrac>;
WittFrac wf_add(std::uint32_t p, const WittFrac& u, const WittFrac& v);
WittFrac wf_mul(std::uint32_t p, const WittFrac& u, const WittFrac& v);
WittFrac wf_neg(std::uint32_t p, const WittFrac& u);
WittFrac wf_teich(const GradedAlgebra& r, std::uint32_t n, const HFrac& x);
bool wf_equal(const WittFrac& u, const WittFrac& v);

// ---- global sections of W_r(O(1)) ----

// Homogeneous model: tuples (g_0, ..., g_{r-1}) with g_m in Sym^{p^m}(V);
// elements are flattened F_p coordinate vectors over the slice bases.
struct SectionModel {
    std::uint32_t p = 2, d = 2, r = 1;
    GradedAlgebra sym;
    std::vector<std::vector<Monomial>> slice;  // basis of Sym^{p^m}(V) per m
    std::vector<std::size_t> offsets;          // flattened offsets per component
    std::size_t coord_dim = 0;
    std::uint64_t order = 0;

    Vec zero() const { return Vec(coord_dim, 0); }
    Vec add(const Vec& a, const Vec& b) const;
    Vec neg(const Vec& a) const;
    Vec scale(std::int64_t c, const Vec& a) const;
    std::vector<GradedElem> components(const Vec& a) const;
    Vec from_components(const std::vector<GradedElem>& comps) const;
    std::vector<Vec> elements() const;
    std::uint64_t index_of(const Vec& a) const;
    Vec from_index(std::uint64_t idx) const;
    // restriction to W_{r-1} and the multiplicative section back
    Vec restrict_to(const SectionModel& smaller, const Vec& a) const;
    Vec teich_section_from(const SectionModel& smaller, const Vec& b) const;
};
SectionModel homogeneous_sections(std::uint32_t p, std::uint32_t d, std::uint32_t r);

// Cech model: per chart i, component m is a fraction with denominator
// e_i^K, K = p^{r-1}; the glued families form the solution space of the
// componentwise linear transition constraints. Verified against the
// homogeneous model.
struct CechModel {
    std::uint32_t p = 2, d = 2, r = 1;
    std::uint32_t kdenom = 1;                 // the common denominator exponent
    GradedAlgebra sym;
    std::vector<std::vector<Monomial>> numer_basis;  // basis of Sym^K per component
    // per component: rows = F_p basis of the glued numerator families
    std::vector<ZpnMat> glued;
    std::uint64_t order = 0;
};
CechModel cech_sections(std::uint32_t p, std::uint32_t d, std::uint32_t r);

// comparison: homogeneous tuple -> chart numerators (g_m e_i^{K - p^m});
// returns the per-component coefficient vectors, one block per chart
Vec cech_of_homogeneous(const CechModel& c, const SectionModel& s, const Vec& a,
                        std::uint32_t component);
bool models_agree(const CechModel& c, const SectionModel& s);

// evaluation of a section as a Witt vector over the truncated symmetric
// algebra (the homogeneous components themselves)
std::vector<GradedElem> evaluate_section(const SectionModel& s, const Vec& a);

// ---- the divided-power pairing ----

// multivariate polynomial over Z/p^r used for the evaluation law
using ModPoly = std::map<Monomial, std::uint64_t>;

struct SectionPairing {
    std::uint32_t p, d, r;
    Mod coeff;                // Z/p^r
    GammaModule gamma;        // Gamma^{p^{r-1}} of the dual space over Z/p^r
    SectionModel sections;

    // F_s evaluated at the generic linear form, a homogeneous polynomial of
    // degree p^{r-1} over Z/p^r in d variables
    ModPoly law_polynomial(const Vec& section) const;
    // <[multi-symbol a], s> = coefficient of u^a
    std::uint64_t pair_basis(const MultiIndex& a, const Vec& section) const;
    Vec pair_vector(const Vec& section) const;  // all ambient basis pairings
};
SectionPairing section_pairing(std::uint32_t p, std::uint32_t d, std::uint32_t r);

struct DualityCheck {
    bool orders_match = false;
    bool pairing_additive = false;
    bool kills_relators = false;
    bool bijective = false;
    bool natural_square = false;
    std::uint64_t order = 0;
    std::vector<std::uint32_t> invariants;  // of the section group
    bool ok() const {
        return orders_match && pairing_additive && kills_relators && bijective && natural_square;
    }
};
DualityCheck section_duality_iso(std::uint32_t p, std::uint32_t d, std::uint32_t r);

// ---- the tautological W_2 lift ----

struct TautologicalLift {
    std::uint32_t p, d;
    GradedAlgebra sym;
    // per chart i: kernel basis vectors (d slots of W_2 fractions)
    std::vector<std::vector<std::vector<WittFrac>>> kernel_basis;
    bool surjective_per_chart = false;
    bool kernel_verified = false;
    bool reduction_matches_classical = false;
    // d = 2 only: the kernel transition equals the multiplicative lift of
    // the classical twist transition
    std::optional<bool> line_transition_matches;
};
TautologicalLift tautological_w2_lift(std::uint32_t p, std::uint32_t d);

// chartwise tensor with the Witt lift of a line bundle given by its
// transition ratios; returns the twisted transition data for d = 2 and
// checks the double-twist associativity
bool twist_checks(std::uint32_t p);

}  // namespace wittkit
