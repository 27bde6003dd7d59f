// Internal lattices and locales over a finite site: fibrewise lattice data
// with contravariant transitions, left adjoints with their certificates, the
// total category of pairs (object, fibre element) with four covering regimes,
// and ideal completions computed relatively (closed sieves) or pointwise.
#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "finsite/classifier.hpp"
#include "finsite/lattice.hpp"
#include "finsite/site.hpp"

namespace finsite {

// A lattice-valued presheaf on a site: one finite (distributive, bounded)
// lattice per object and, for each morphism f : d -> c, a transition map
// fibre[cod f] -> fibre[dom f] preserving meets, joins, top and bottom,
// functorial in f.
struct InternalLattice {
    FinCategory base;
    GrothTopology topology;
    std::vector<FinLattice> fibre;             // one per base object
    std::vector<std::vector<int>> transition;  // transition[f][x], x in fibre[cod f]

    // Sections-and-restrictions view (sizes plus shared transition tables).
    FinPresheaf as_presheaf() const;
};

// Shape, functoriality, and the lattice-map invariants of every transition;
// throws BadInput naming the first violation.
InternalLattice validate_internal_lattice(InternalLattice L);

// A fibrewise frame (omega / omega_notnot output) as an internal lattice.
InternalLattice as_internal_lattice(const FinCategory& C, const GrothTopology& J,
                                    const InternalFrame& F);

// Constant fibres with identity transitions.
InternalLattice constant_internal_lattice(const FinCategory& C, const GrothTopology& J,
                                          const FinLattice& fibre);

// The sub-internal-lattice of complemented elements of a fibrewise frame
// (the coproduct of two terminals living inside it).  Checks fibre sizes
// against the sheaf coproduct_of_terminals (SelfCheckFailed on mismatch).
InternalLattice complemented_part(const FinCategory& C, const GrothTopology& J,
                                  const InternalFrame& F);

struct LocaleCertificates {
    bool adjointness = false;         // ∃_f(x) ≤ y  ⟺  x ≤ transition(f)(y)
    bool beck_chevalley = false;      // adjoint squares over the chosen pullbacks
    bool frobenius = false;           // ∃_f(f*(l')∧l) = ∃_f(l)∧l'
    bool sheaf = false;               // underlying presheaf is a J-sheaf
    bool pseudo_complements = false;  // transitions commute with ¬
};

// An internal lattice whose transitions are frame maps with left adjoints,
// all five certificates verified.
struct InternalLocale {
    InternalLattice lattice;
    std::vector<std::vector<int>> adjoint;  // adjoint[f][x], x in fibre[dom f]
    LocaleCertificates certificates;
};

// Computes ∃_f(x) as the least y with x ≤ transition(f)(y) (NoLeftAdjoint
// when the preimage up-set has no minimum), then verifies every certificate:
// adjointness, Beck–Chevalley over the fixed pullback table (NotCartesianBase
// when the base has no terminal object or misses a pullback), Frobenius,
// sheafhood, and pseudo-complement preservation.  Shape and functoriality are
// BadInput; join/bottom preservation of transitions is BadInput (meet and top
// preservation follow from adjointness and are not preconditions, so a
// meet-breaking transition surfaces as NoLeftAdjoint).
InternalLocale validate_internal_locale(InternalLattice L);

// The same construction over an arbitrary base: Beck–Chevalley is verified
// on the pullback squares the base actually has instead of demanding a
// cartesian base.  Same error taxonomy except NotCartesianBase never fires.
InternalLocale as_internal_locale(InternalLattice L);

// Covering regimes carried by a relative site.
enum class TopologyKind { none, giraud, coherent, existential, finitary_existential };
const char* topology_kind_name(TopologyKind k);

// The total category of pairs (c, x), x in fibre(c), over a base site, with
// the projection data and a covering test for the tagged regime.  Covering
// sieves are answered by closed-form predicates (they are too many to store
// on large totals); materialize() rebuilds the extensional topology for
// small totals, and tests check it equals the saturation of the defining
// generator families.
struct RelativeSite {
    FinCategory total;
    std::vector<int> object_base;             // total object -> base object
    std::vector<int> object_element;          // total object -> element of its base fibre
    std::vector<int> morphism_base;           // total morphism -> base morphism
    std::vector<std::vector<int>> object_of;  // object_of[c][x] -> total object
    // morphism_of[f][x][y]: the morphism (d,y) -> (c,x) over f : d -> c,
    // present iff y ≤ transition(f)(x), else -1.
    std::vector<std::vector<std::vector<int>>> morphism_of;
    TopologyKind kind = TopologyKind::none;
    InternalLattice content;                // fibred data the covering test consults
    std::vector<std::vector<int>> adjoint;  // set for the existential regimes

    // Covering test for the tagged regime:
    //  giraud      : {f : the cartesian lift (f, L(f)(x)) lies in S} covers c;
    //  coherent    : {f : ⋁{y : (f,y) ∈ S} = L(f)(x)} covers c;
    //  existential : ⋁ ∃_{f_i}(y_i) = x over the members (f_i, y_i) of S.
    // Throws BadInput when kind == none.
    bool covers(int t, const Bits& members) const;
    bool covers(const Sieve& S) const { return covers(S.target, S.members); }

    // Extensional view: every covering sieve per total object (small sites
    // and tests only; SizeExceeded via the sieve-space cap otherwise).
    GrothTopology materialize(int cap = kDefaultSieveCap) const;

    int total_object(int c, int x) const;          // bounds-checked object_of
    int total_morphism(int f, int x, int y) const; // bounds-checked morphism_of
    // m = (cartesian lift) ∘ (vertical): returns {vertical, cartesian},
    // self-checked against the composition table.
    std::pair<int, int> vertical_cartesian_factorization(int m) const;
};

// Objects (c,x), one morphism (d,y) -> (c,x) per f : d -> c with
// y ≤ transition(f)(x), composition inherited from the base; no covering
// regime yet.  The input is re-validated.
RelativeSite grothendieck_construction(const InternalLattice& L);

// Cartesian lifts of base covers: S covers (c,x) iff the base morphisms
// whose lift (f, L(f)(x)) lies in S form a covering sieve.  On a trivial
// base this is the trivial topology.
RelativeSite giraud_topology(const InternalLattice& L);

// Vertical finite-join families {(c,x_i) -> (c,x) : ⋁x_i = x} together with
// the cartesian lifts; the empty family covers (c,x) iff x = 0.  On a
// trivial base the lift generators are redundant and the vertical families
// alone generate.
RelativeSite coherent_coverage(const InternalLattice& A);

// S covers (c,x) iff ⋁ ∃_{f_i}(x_i) = x over its members.  Verifies
// ⋁_{f ∈ S} ∃_f(1) = 1 for every base covering sieve S (this makes the
// regime contain the Giraud topology).  NotALocale when the input's
// certificates are not all verified.
RelativeSite existential_topology(const InternalLocale& L);

// The finite-family variant: on finite sites every family is finite, so the
// covering test agrees with existential_topology; the base topology is
// checked to be finitely generated (NotFinitary otherwise — vacuous on
// finite data, kept as a real loop).
RelativeSite finitary_existential_topology(const InternalLocale& L);

// The internal locale of T-closed sieves on the objects (c, 1): meet is
// intersection, join is T-closure of the union, transitions pull back along
// the lifts (f, 1), and ∃_f closes the sieve generated by post-composition
// with the lift.  Requires a regime containing the Giraud topology (giraud,
// coherent, or the existential pair) built over the same fibred data as A;
// every locale certificate is verified (CertificateFailure names the axiom
// and witness — it must not fire on valid inputs).
struct FibredIdeals {
    InternalLocale locale;
    std::vector<std::vector<Bits>> carrier;  // carrier[c][i]: closed sieve on (c,1)
    std::vector<int> top_object;             // total object (c,1) per base object
};
FibredIdeals fibred_ideal_completion(const InternalLattice& A, const RelativeSite& T,
                                     int cap = kDefaultFibreCap);

// Fibres ideals(L(c)); a transition sends an ideal to the downset generated
// by its image, the adjoint likewise through ∃.  The principal-ideal map is
// checked to be a natural lattice isomorphism onto its image (finite fibres:
// a bijection), and all locale certificates are verified.
InternalLocale pointwise_ideal_completion(const InternalLocale& L);

// Compares fibred_ideal_completion(L, finitary existential regime) with
// pointwise_ideal_completion(L) through the principal-sieve map
// ideal ↦ closure(sieve generated by its verticals); equivalent iff that map
// is a natural lattice isomorphism fibrewise.
struct LocIdealEquivalence {
    bool equivalent = false;
    // iso[c][u]: fibred element id for pointwise ideal u (valid when equivalent)
    std::vector<std::vector<int>> iso;
};
LocIdealEquivalence check_loc_ideal_equivalence(const InternalLocale& L,
                                                int cap = kDefaultFibreCap);

// 0 ≠ 1 in fibre(c) for every c not covered by the empty sieve.
bool is_nontrivial(const InternalLattice& A);

// The projection of a relative site is a surjection iff the fibred data is
// nontrivial; the verdict is that equivalence.  Independently, every
// covering sieve of a top object (c,1) must project to a base covering
// sieve — checked extensionally when the sieve spaces fit the cap
// (cover_projection_checked records whether it ran).
struct SurjectivityVerdict {
    bool surjective = false;
    bool cover_projection_checked = false;
};
SurjectivityVerdict surjectivity_verdict(const InternalLattice& A, const RelativeSite& T,
                                         int cap = kDefaultSieveCap);

// De Morgan's law for the relative topos of an internal locale: true iff
// every fibre is Stone.  Additionally verifies the mechanism behind that
// criterion: every existentially closed sieve on (c,1) is principal — equal
// to {(f,y) : y ≤ transition(f)(x)} for a unique x — so the frame of closed
// sieves at (c,1) is isomorphic to L(c).
struct RelativeDeMorganReport {
    bool verdict = false;
    bool principal_mechanism = false;
};
RelativeDeMorganReport relative_de_morgan(const InternalLocale& L,
                                          int cap = kDefaultFibreCap);

}  // namespace finsite
