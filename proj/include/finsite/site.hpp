// Sieves, Grothendieck topologies, closure operators, and finite
// sheafification over a finite category.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finsite/bits.hpp"
#include "finsite/fincat.hpp"

namespace finsite {

// Resource guard for per-object sieve-space enumeration.
inline constexpr int kDefaultSieveCap = 1 << 16;

// A sieve on `target`: a set of morphisms with codomain `target` closed
// under precomposition.  `members` is a bitset over the whole morphism
// table of the ambient category.
struct Sieve {
    int target = -1;
    Bits members;

    bool operator==(const Sieve&) const = default;
};

// True iff every member has codomain `S.target` and the set is closed
// under precomposition with arbitrary composable morphisms.
bool is_sieve(const FinCategory& C, const Sieve& S);

Sieve empty_sieve(const FinCategory& C, int c);
Sieve maximal_sieve(const FinCategory& C, int c);

// Smallest sieve on c containing the given morphisms.
// Throws WrongCodomain if some morphism does not land in c.
Sieve generated_sieve(const FinCategory& C, int c, const std::vector<int>& family);

// f^*(S) = { g : f∘g ∈ S }, a sieve on dom(f).
// Throws TargetMismatch unless cod(f) = S.target.
Sieve pullback_sieve(const FinCategory& C, const Sieve& S, int f);

// S ∩ T on their common target.
Sieve intersect_sieves(const FinCategory& C, const Sieve& S, const Sieve& T);

// Every sieve on c, as sorted member-bitsets.  Worklist closure under
// adding one principal sieve at a time; throws SizeExceeded past `cap`.
std::vector<Bits> sieves_on(const FinCategory& C, int c, int cap = kDefaultSieveCap);

// A Grothendieck topology stored extensionally: covering[c] holds the
// member-bitsets of every covering sieve on c, sorted.
struct GrothTopology {
    std::vector<std::vector<Bits>> covering;

    bool covers(int c, const Bits& members) const;
    bool covers(const Sieve& S) const { return covers(S.target, S.members); }
};

// Only the maximal sieves cover.
GrothTopology trivial_topology(const FinCategory& C);

// Least Grothendieck topology whose covering sieves include `families`:
// contains all maximal sieves and is closed under pullback stability and
// the transitivity rule.  Idempotent on its own output.
GrothTopology saturate(const FinCategory& C, const std::vector<Sieve>& families,
                       int cap = kDefaultSieveCap);

// Checks the three topology axioms directly from their definitions
// (maximality, stability, transitivity over the full sieve space);
// throws BadInput naming the first violation.
void validate_topology(const FinCategory& C, const GrothTopology& J,
                       int cap = kDefaultSieveCap);

// Cl_J(S) = { f into S.target : f^*(S) covers dom f }.  A closure
// operator on sieves; Cl_J(S) is maximal iff S covers.
Sieve closure(const FinCategory& C, const GrothTopology& J, const Sieve& S);

// The same closure formula against a covering test given as a predicate
// (object, member bits) -> covers; used where a topology is represented by
// a predicate because its covering sieves are too many to store.
using CoversFn = std::function<bool(int, const Bits&)>;
Sieve closure(const FinCategory& C, const CoversFn& covers, const Sieve& S);

// A finite presheaf: size[c] sections over each object, and for each
// morphism f a map restriction[f] : P(cod f) -> P(dom f) (contravariant).
struct FinPresheaf {
    std::vector<int> size;
    std::vector<std::vector<int>> restriction;

    int apply(int f, int section) const { return restriction[f][section]; }
};

// Checks shape and functoriality (identities act as identity, composites
// compose contravariantly); throws BadInput on violation.
FinPresheaf validate_presheaf(const FinCategory& C, FinPresheaf P);

// The constant presheaf with k sections everywhere and identity restrictions.
FinPresheaf constant_presheaf(const FinCategory& C, int k);

// The representable presheaf Hom(-, c): sections over d are the morphisms
// d -> c, restriction along g is precomposition.
FinPresheaf representable_presheaf(const FinCategory& C, int c);

// A matching family for a covering sieve: values[f] is the chosen section
// of P(dom f) for f in the sieve, -1 elsewhere, satisfying
// values[f∘g] = P(g)(values[f]) for all composable g.
struct MatchingFamily {
    int object = -1;
    Bits sieve;
    std::vector<int> values;
};

struct SheafReport {
    bool ok = true;
    // On failure: a matching family with amalgamation_count != 1.
    std::optional<MatchingFamily> failing;
    int amalgamation_count = -1;
};

// True iff every matching family over every covering sieve has exactly
// one amalgamation in P.
SheafReport is_sheaf(const FinCategory& C, const GrothTopology& J, const FinPresheaf& P);

// One application of the plus construction: sections over c are matching
// families over covering sieves on c modulo agreement on a common covering
// refinement.  `unit[c]` maps P(c) into the new sections, and
// `representatives[c][k]` is a concrete matching family (valued in the
// input presheaf) of the k-th class — for a sheafify result the values
// reference the intermediate one-plus presheaf.
struct PlusResult {
    FinPresheaf presheaf;
    std::vector<std::vector<int>> unit;
    std::vector<std::vector<MatchingFamily>> representatives;
};

PlusResult plus_construction(const FinCategory& C, const GrothTopology& J,
                             const FinPresheaf& P);

// Plus applied twice; the result is checked to be a sheaf.  `unit` is the
// composite of the two plus units.
PlusResult sheafify(const FinCategory& C, const GrothTopology& J, const FinPresheaf& P);

}  // namespace finsite
