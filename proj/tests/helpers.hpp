#pragma once

// Shared test-side constructions: frame sites, the direct joins topology,
// corpus slices, and random saturated topologies.

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "finsite/enumerate.hpp"
#include "finsite/lattice.hpp"
#include "finsite/site.hpp"

namespace finsite::testutil {

// The category of a finite lattice viewed as a poset: object ids equal
// element ids, one morphism a->b per a<=b.
inline FinCategory frame_site(const FinLattice& L) {
    std::vector<std::vector<bool>> leq(L.n(), std::vector<bool>(L.n()));
    std::vector<std::string> names;
    for (int a = 0; a < L.n(); ++a) {
        names.push_back(L.name(a));
        for (int b = 0; b < L.n(); ++b) leq[a][b] = L.leq(a, b);
    }
    return validate_category(poset_raw_category(leq, names));
}

inline int leq_morphism(const FinCategory& C, int a, int b) {
    REQUIRE(C.hom(a, b).size() == 1);
    return C.hom(a, b)[0];
}

// Independent construction of the finite-join covering topology on a frame
// site: a sieve covers x iff the join of its domains is x.
inline GrothTopology direct_joins_topology(const FinCategory& C, const FinLattice& L) {
    GrothTopology J;
    J.covering.resize(C.num_objects());
    for (int x = 0; x < L.n(); ++x) {
        for (const Bits& s : sieves_on(C, x)) {
            int join = L.bottom;
            s.for_each([&](int f) { join = L.join(join, C.dom(f)); });
            if (join == x) J.covering[x].push_back(s);
        }
    }
    return J;
}

// Generating families for the joins topology: binary join covers plus the
// empty sieve on the bottom element.
inline std::vector<Sieve> pair_basis(const FinCategory& C, const FinLattice& L) {
    std::vector<Sieve> basis;
    basis.push_back(empty_sieve(C, L.bottom));
    for (int x = 0; x < L.n(); ++x)
        for (int a = 0; a < L.n(); ++a)
            for (int b = a + 1; b < L.n(); ++b)
                if (L.leq(a, x) && L.leq(b, x) && L.join(a, b) == x)
                    basis.push_back(generated_sieve(
                        C, x, {leq_morphism(C, a, x), leq_morphism(C, b, x)}));
    return basis;
}

inline std::vector<FinCategory> corpus_slice(int max_obj, int max_mor, size_t limit) {
    std::vector<FinCategory> out;
    enumerate_categories(max_obj, max_mor, [&](const SmallCat& sc) {
        if (out.size() < limit) out.push_back(validate_category(small_to_raw(sc)));
    });
    return out;
}

inline GrothTopology random_topology(const FinCategory& C, std::mt19937& rng) {
    std::vector<Sieve> families;
    for (int c = 0; c < C.num_objects(); ++c) {
        auto space = sieves_on(C, c);
        std::uniform_int_distribution<size_t> pick(0, space.size() - 1);
        families.push_back({c, space[pick(rng)]});
    }
    return saturate(C, families);
}

}  // namespace finsite::testutil
