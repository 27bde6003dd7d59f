// The Gleason cover of a finite site: the relative locale of coherently
// closed sieves over the double-negation Boolean algebra, the comparison
// maps ρ and λ between it and the subobject classifier, and the structural
// verdicts (De Morgan, minimality, regular-part isomorphism, equivalence,
// the atoms subcategory) those maps support.
#pragma once

#include <vector>

#include "finsite/classifier.hpp"
#include "finsite/indlat.hpp"

namespace finsite {

// The cover assembled over a base site.  `ideals.locale` is the internal
// locale of K-closed sieves on the objects (c,1) — K the coherent coverage
// on the total category of Ω¬¬ — with `ideals.carrier[c]` realizing each
// fibre element as a sieve.  ρ and λ are stored as per-object index
// tables: rho[c][R] is the element of omega.carrier[c] picked out by
// {f : d→c | the lift (f,1) lies in R}, and lambda[c][S] the element of
// ideals.carrier[c] equal to ⋁_{f∈S} ∃_f(1).
struct GleasonCover {
    FinCategory base;
    GrothTopology topology;
    InternalFrame omega;      // the subobject classifier, ρ's target
    InternalFrame omega_nn;   // its regular part, carriers included
    InternalLocale nn_locale; // Ω¬¬ with its adjoints ∃
    RelativeSite relative;    // coherent coverage on the total category of Ω¬¬
    FibredIdeals ideals;      // the cover locale Idl(Ω¬¬)
    std::vector<std::vector<int>> rho;
    std::vector<std::vector<int>> lambda;

    const InternalLocale& cover_locale() const { return ideals.locale; }
};

// Assembles the cover over a validated site and verifies the type
// invariants: every cover fibre is a Stone algebra, and the cover locale is
// nontrivial whenever the base has an object not covered by the empty
// sieve (TheoremViolation otherwise — it must not fire).  Constituent
// errors (SizeExceeded, BadInput, certificate failures) propagate.
GleasonCover gleason_cover(const FinCategory& C, const GrothTopology& J,
                           int cap = kDefaultFibreCap);

// De Morgan's law for the cover, by both routes: every fibre of the cover
// locale is Stone, and the proof's description of pseudo-complements is
// recomputed and compared — ¬R must equal
//   {m : (d,x)→(c,1) | ∀ (g,x') ∈ R : ∃_m(x) ∧ ∃_g(x') = 0 in Ω¬¬(c)}
// where ∃ is the adjoint of Ω¬¬ along the base legs.  TheoremViolation
// with a witness on any mismatch (it must not fire).
bool gleason_is_de_morgan(const GleasonCover& G);

// Verifies ρ's claims and returns the table: each ρ_c lands in the
// classifier carrier, is natural in c, sends 1 to the maximal sieve, and —
// the cover locale being minimal — preserves binary meets and
// pseudo-complements.  TheoremViolation on failure.
const std::vector<std::vector<int>>& rho(const GleasonCover& G);

// Verifies λ's claims and returns the table: λ_c is natural in c (the
// Beck–Chevalley mechanism), S ⊆ ρ_c(λ_c(S)), and λ_c(¬S) ≤ ¬λ_c(S).
// TheoremViolation on failure.
const std::vector<std::vector<int>>& lambda(const GleasonCover& G);

// The elementwise minimality predicate for fibred data over a site: the
// only a ∈ A(c) such that transition(f)(a) ≠ 1 for every f : d → c with d
// not covered by the empty sieve is a = 0.  Pure test — callable on
// deliberately broken inputs.
bool check_minimality(const InternalLattice& A);

// The cover locale is minimal — a theorem about Idl(Ω¬¬); TheoremViolation
// if the predicate fails (it must not fire).
bool check_minimality(const GleasonCover& G);

// ρ restricted to the ¬¬-closed elements of each cover fibre is a natural
// bijection onto Ω¬¬(c).  TheoremViolation with a witness on failure.
bool check_rho_regular_iso(const GleasonCover& G);

// The fibred ideal completion of 1⊔1 (the complemented part of Ω) under
// its coherent coverage is Ω itself: the ρ-map is a pointwise bijection
// onto the classifier.  The proof's two mechanisms are recomputed:
// membership in a closed sieve R is decided by its plain part —
// (f,x) ∈ R ⟺ x ⊆ f*(S_R) as sieves — and the join of two complemented
// elements of Ω(c) is complemented.  TheoremViolation on failure.
bool check_idl_coproduct_is_omega(const FinCategory& C, const GrothTopology& J,
                                  int cap = kDefaultFibreCap);

// The cover projection is an equivalence iff ρ is a pointwise bijection;
// verified equal to the De Morgan decision for the base site
// (TheoremViolation if the two disagree — it must not fire).
bool is_equivalence(const GleasonCover& G);

// The full subcategory of the total category of Ω¬¬ on the objects (c,x)
// with x an atom — exactly the irreducibles of the cover when the base
// topology is trivial, so the cover is presheaves on this category (its
// fibres being finite makes the site rigid).  NotPresheafBase when the
// topology is not trivial; the right Ore condition — equivalently De
// Morgan's law for the cover — is verified on the result
// (TheoremViolation if it fails; it must not fire).
FinCategory atoms_category(const FinCategory& C, const GrothTopology& J,
                           int cap = kDefaultFibreCap);

}  // namespace finsite
