#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "finsite/fincat.hpp"
#include "finsite/lattice.hpp"

namespace finsite {

// Hard ceiling on index sizes in the bounded searches below: the candidate
// diagram space (directed orders on n labeled points times connecting-table
// assignments) grows too fast past this.
inline constexpr int kMaxIndBound = 5;

// A formal directed diagram over a finite category: a finite directed poset
// of indices (every pair bounded above, hence with a maximum) together with a
// functorial assignment of objects and connecting morphisms.
struct IndObject {
    FinPoset index;                         // finite directed poset
    std::vector<int> object;                // index -> object of the base category
    std::vector<std::vector<int>> connect;  // connect[i][j] : object[i] -> object[j] for i<=j, else -1
};

// Checks directedness (BadInput with the unbounded pair otherwise), identity
// entries on the diagonal, -1 exactly off the order, endpoint agreement, and
// functoriality of the connecting table; asserts the index has a unique
// maximum (a consequence of directedness at finite size).
IndObject validate_ind_object(const FinCategory& C, IndObject A);

// Singleton diagram on one object.
IndObject ind_embed_object(const FinCategory& C, int c);

// The maximum of the index poset.
int ind_max_index(const IndObject& A);

// A morphism of directed diagrams: for each source index i, a representative
// (target_index[i], component[i]) of a class in the directed colimit
// colim_j Hom(source_i, target_j).  Two representatives are identified when a
// later connecting morphism coequalizes them; the family must satisfy the
// limit condition across the source order.  Every constructor here validates
// that condition, and validate_ind_morphism re-certifies arbitrary input.
struct IndMorphism {
    IndObject source, target;
    std::vector<int> target_index;
    std::vector<int> component;
};

// Class equality of representatives (j,f) and (j2,f2) in
// colim_j Hom(x, B_j): some index k above both must coequalize them.  The
// scan over k is literal; directedness makes the one-step relation
// transitive.
bool ind_same_class(const FinCategory& C, const IndObject& B, int j, int f, int j2, int f2);

IndMorphism validate_ind_morphism(const FinCategory& C, IndMorphism m);

// The morphism of singleton diagrams carried by a base morphism.
IndMorphism ind_embed_morphism(const FinCategory& C, int f);

// Identity: each component is the connecting morphism into the chosen
// representative index (the diagonal family).
IndMorphism ind_identity(const FinCategory& C, const IndObject& A);

// Componentwise class equality (after checking the endpoints are the same
// diagrams).
bool ind_equal(const FinCategory& C, const IndMorphism& a, const IndMorphism& b);

// Hom-set of the bounded Ind-category, computed literally: per source index
// the zig-zag classes of all pairs (target index, base morphism), then the
// families compatible across the source order.  The result is cross-checked
// against the finite collapse |Hom(source_max, target_max)| (SelfCheckFailed
// on disagreement) and returned with representatives normalized at the
// target's maximum, ordered by component id.
std::vector<IndMorphism> ind_hom(const FinCategory& C, const IndObject& A, const IndObject& B);

// Representative-wise composition.  Independence from the chosen
// representatives is asserted by exhaustive variation over every equivalent
// representative pair (SelfCheckFailed on disagreement).
IndMorphism ind_compose(const FinCategory& C, const IndMorphism& g, const IndMorphism& f);

struct IndAmalgamation {
    IndObject apex;
    IndMorphism left;   // from the target of f
    IndMorphism right;  // from the target of g
};

// Searches for a cocone closing the span  target(f) <- source -> target(g):
// candidate apex diagrams with at most `bound` indices are enumerated in a
// deterministic order (index size, order relation, object assignment,
// connecting table; lexicographically minimal relabelings only), and for each
// apex all pairs of Ind-morphisms are tested for left∘f = right∘g.  Returns
// the first solution, or nullopt meaning NONE WITHIN THE BOUND — an
// explicitly inconclusive outcome, not a refutation.  Inputs must have index
// size at most `bound`.
std::optional<IndAmalgamation> ind_amalgamate(const FinCategory& C, const IndMorphism& f,
                                              const IndMorphism& g, int bound);

// Certificate that a base span (f : a -> b, g : a -> c) admits no bounded
// Ind-amalgamation of its embedding at ANY bound: a bounded amalgamation
// would restrict, at the maximum indices, to a base amalgamation, so an
// exhaustive scan of base cocones settles the question absolutely.  When not
// certified, `amalgam` holds a base pair (u, v) with u∘f = v∘g.
struct BaseFailureCertificate {
    bool certified = false;
    std::optional<std::pair<int, int>> amalgam;
};
BaseFailureCertificate extract_base_failure(const FinCategory& C, int f, int g);

// Minimal index size over candidate diagrams within `bound` that are
// isomorphic to A in the bounded Ind-category (isomorphism witnessed through
// ind_hom in both directions); nullopt when the bound is exhausted without a
// hit.  At finite scale the answer is 1: the diagram collapses onto its
// maximum.
std::optional<int> presentation_size(const FinCategory& C, const IndObject& A, int bound);

// Size of the amalgamation search space at index size exactly n: the number
// of canonical candidate diagrams (lexicographically minimal relabelings of
// functorial assignments over directed orders on n points).
int count_apex_candidates(const FinCategory& C, int n);

}  // namespace finsite
