#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsite/bits.hpp"
#include "finsite/error.hpp"

namespace finsite {

// Default element cap for lattices arriving from documents/enumeration; large
// internal constructions pass an explicit cap.
inline constexpr int kDefaultLatticeCap = 64;

struct FinPoset {
    std::vector<std::string> names;
    std::vector<Bits> below;  // below[x] = {y : y <= x}
    std::vector<Bits> above;  // above[x] = {y : x <= y}

    int n() const { return static_cast<int>(names.size()); }
    bool leq(int a, int b) const { return above[a].get(b); }
};

// Builds a poset from explicit related pairs; reflexive-transitive closure is
// applied, antisymmetry checked.
FinPoset validate_poset(const std::vector<std::string>& names,
                        const std::vector<std::pair<int, int>>& leq_pairs);

struct FinLattice {
    FinPoset poset;
    std::vector<int> meet_table, join_table;  // n*n, row-major
    int bottom = -1, top = -1;

    int n() const { return poset.n(); }
    bool leq(int a, int b) const { return poset.leq(a, b); }
    int meet(int a, int b) const { return meet_table[static_cast<size_t>(a) * poset.n() + b]; }
    int join(int a, int b) const { return join_table[static_cast<size_t>(a) * poset.n() + b]; }
    const std::string& name(int x) const { return poset.names[x]; }
};

// Derives meet/join/bounds from the order and verifies distributivity.
// Errors: NotALattice (pair without meet or join), NotDistributive (witness
// triple), SizeExceeded past the cap.
FinLattice validate_lattice(const FinPoset& poset, int cap = kDefaultLatticeCap);

// Builds a lattice from known tables: order compatibility, bound laws and
// absorption are fully checked; distributivity is fully checked up to
// distributivity_cap elements (cubic), otherwise trusted to the caller's
// construction (closure systems built here are frames by construction).
FinLattice make_lattice_from_tables(FinPoset poset, std::vector<int> meet, std::vector<int> join,
                                    int distributivity_cap = 512);

// Downset lattice of a poset (elements ordered by their bit patterns).
// Requires poset.n() <= 64; result capped at `cap` elements.
struct DownsetLattice {
    FinLattice lattice;
    std::vector<uint64_t> downsets;  // element id -> downset mask over the poset
};
DownsetLattice downsets_of_poset(const FinPoset& poset, int cap = 4096);

// --- derived Heyting structure (never stored) -------------------------------

// max{z : z∧a <= b}; satisfies c <= (a→b) ⟺ c∧a <= b.
int heyting_implication(const FinLattice& L, int a, int b);
// ¬a := a→0, the largest z with z∧a = 0.
int pseudo_complement(const FinLattice& L, int a);

struct StoneReport {
    bool stone = false;
    std::optional<int> witness_x;                    // fails ¬x∨¬¬x = 1
    std::optional<std::pair<int, int>> witness_xy;   // fails ¬(x∧y) = ¬x∨¬y
};
// Evaluates both Stone criteria and asserts they agree (CriteriaDisagree is a
// defect signal, never expected).
StoneReport is_stone(const FinLattice& L);

bool is_boolean(const FinLattice& L);

struct LeeReport {
    bool holds = false;
    std::optional<std::vector<int>> witness;  // pairwise-disjoint tuple breaking the law
};
// True iff every (r+1)-tuple of pairwise-meet-zero elements has ⋁¬x_i = 1.
// Tuples with a repeated or zero entry satisfy the law automatically, so the
// search runs over ascending tuples of distinct nonzero pairwise-disjoint
// elements.  For r = 1 the verdict is cross-checked against is_stone.
LeeReport lee_property(const FinLattice& L, int r);

struct Sublattice {
    FinLattice lattice;
    std::vector<int> carrier;  // sub id -> ambient id, ascending
    std::vector<int> index;    // ambient id -> sub id or -1
};

// Lattice on {z : z <= x}; asserts implication is (a→_L b)∧x and double
// pseudo-complement is (¬¬_L a)∧x.
Sublattice down_algebra(const FinLattice& L, int x);

// Carrier {x : ¬¬x = x}; meet inherited, join (x,y) ↦ ¬¬(x∨y); asserted
// Boolean.
Sublattice regular_elements(const FinLattice& L);

struct IdealLattice {
    FinLattice lattice;        // ideals ordered by inclusion
    std::vector<Bits> ideals;  // ideal id -> member mask
    std::vector<int> principal;  // element id -> ideal id of ↓x (a bijection, asserted)
};
// Ideals: downsets containing bottom, closed under binary join.  For finite L
// every ideal is principal, so the result is isomorphic to L (asserted).
IdealLattice ideals(const FinLattice& L);

struct RegularFrameReport {
    bool regular = false;
    std::optional<int> witness;          // element that is not the join of its W-set
    std::vector<Bits> well_inside;       // per element l: {y <= l : ∃t, t∧y=0, t∨l=1}
};
// l = ⋁{y <= l : ∃t with t∧y = 0 and t∨l = 1} for every l.
RegularFrameReport is_regular_frame(const FinLattice& L);

std::vector<int> complemented_elements(const FinLattice& L);

// Compactness by the general definition in ideal form: x is compact iff for
// every ideal I, x <= ⋁I implies x ∈ I.  (A join cover S of x generates an
// ideal with the same join, and x lies in it exactly when x is under a finite
// join of members of S, i.e. when S admits a finite subcover.)  In finite
// lattices this returns every element (asserted).
std::vector<int> compact_elements(const FinLattice& L);

// --- small constructions used across tests ----------------------------------

FinPoset chain_poset(int n);
FinLattice chain_lattice(int n);
FinLattice boolean_lattice(int num_atoms);  // downsets of an antichain

}  // namespace finsite
