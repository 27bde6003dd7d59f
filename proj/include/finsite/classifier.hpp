// The subobject classifier of a finite site as a fibrewise frame of closed
// sieves, its internal Boolean algebra of regular elements, the sheaf 1⊔1,
// and the De Morgan / Boolean decisions.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "finsite/lattice.hpp"
#include "finsite/site.hpp"

namespace finsite {

// Per-object fibre cap for closed-sieve enumeration.
inline constexpr int kDefaultFibreCap = 4096;

// A fibrewise frame over a site: one finite lattice per object, one
// meet/join-preserving index map per morphism (contravariant:
// transition[f] maps fibre[cod f] into fibre[dom f]).  `carrier[c][i]`
// is the closed sieve realizing element i of fibre[c].
struct InternalFrame {
    std::vector<FinLattice> fibre;
    std::vector<std::vector<Bits>> carrier;
    std::vector<std::vector<int>> transition;

    // The underlying presheaf of sections (sizes plus transitions).
    FinPresheaf as_presheaf() const;
};

// The lattice of J-closed sieves on c: ordered by inclusion, meet is
// intersection, join is the closure of the union.  Elements are returned
// in increasing bitset order; throws SizeExceeded past `cap` with a hint
// to shrink the site.
struct OmegaFibre {
    std::vector<Bits> elements;
    FinLattice lattice;
};
OmegaFibre omega_fibre(const FinCategory& C, const GrothTopology& J, int c,
                       int cap = kDefaultFibreCap);

// The same enumeration against a covering test given as a predicate; used
// for topologies represented by predicates rather than extensional lists.
OmegaFibre omega_fibre(const FinCategory& C, const CoversFn& covers, int c,
                       int cap = kDefaultFibreCap);

// The subobject classifier: fibres of closed sieves, transitions by sieve
// pullback.  Functoriality is validated and the result is checked to be a
// J-sheaf (NotASheaf on failure — a library bug, not an input error).
InternalFrame omega(const FinCategory& C, const GrothTopology& J,
                    int cap = kDefaultFibreCap);

// Implication inside Omega(c): { f : pullback(S,f) ⊆ pullback(T,f) },
// checked against the Heyting implication derived from the fibre lattice.
Sieve heyting_in_omega(const FinCategory& C, const GrothTopology& J, int c,
                       const Sieve& S, const Sieve& T, int cap = kDefaultFibreCap);

// The internal Boolean algebra of ¬¬-closed elements: fibres are the
// regular elements of Omega's fibres, transitions the restrictions of
// Omega's.  Checks that every transition preserves pseudo-complements and
// stays inside the regular carrier (TransitionEscapesFibre otherwise) and
// that the result is a J-sheaf.
InternalFrame omega_notnot(const FinCategory& C, const GrothTopology& J,
                           int cap = kDefaultFibreCap);

// The sheaf 1⊔1 with its two designated global sections.  Their
// disjointness is computed: top and bottom coincide at c exactly when the
// empty sieve covers c (the sections' equalizer is the least subsheaf).
struct TwoPointSheaf {
    FinPresheaf sheaf;
    std::vector<int> top;     // per object
    std::vector<int> bottom;  // per object
};
TwoPointSheaf coproduct_of_terminals(const FinCategory& C, const GrothTopology& J);

// Verdict of a canonical comparison map 1⊔1 -> (Ω or Ω¬¬), computed by
// extending the two constant sections along sheafification and testing
// pointwise bijectivity.
struct ToposReport {
    bool verdict = false;
    struct PerObject {
        int two_point_size;
        int target_size;
    };
    std::vector<PerObject> objects;
};

// De Morgan: (⊤,⊥) : 1⊔1 -> Ω¬¬ is an isomorphism.
ToposReport is_de_morgan_topos(const FinCategory& C, const GrothTopology& J,
                               int cap = kDefaultFibreCap);

// Boolean: the analogous map 1⊔1 -> Ω is an isomorphism.
ToposReport is_boolean_topos(const FinCategory& C, const GrothTopology& J,
                             int cap = kDefaultFibreCap);

// Per-object algebraic diagnostics of the classifier fibres.
struct StoneRecord {
    int object;
    int omega_size;
    int regular_size;
    bool stone;
    bool boolean_fibre;
    std::map<int, bool> lee;  // r -> I_r verdict
};
std::vector<StoneRecord> stone_report(const FinCategory& C, const GrothTopology& J,
                                      const std::vector<int>& lee_orders = {1},
                                      int cap = kDefaultFibreCap);

}  // namespace finsite
