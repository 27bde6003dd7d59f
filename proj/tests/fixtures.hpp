#pragma once

// Shared hand-written fixtures with frozen expected values.  Ids follow input
// order: objects as listed, identities first in the morphism list.

#include "finsite/fincat.hpp"
#include "finsite/lattice.hpp"

namespace finsite::fixtures {

// One object, one identity.
inline FinCategory t1() {
    RawCategory raw;
    raw.objects = {"*"};
    raw.morphisms = {{"id", 0, 0}};
    raw.identities = {0};
    raw.composition = {{0, 0, 0}};
    return validate_category(raw);
}

// Objects x,y,z with f:x→z, g:y→z.  Morphism ids: id_x=0, id_y=1, id_z=2, f=3, g=4.
inline FinCategory cospan() {
    RawCategory raw;
    raw.objects = {"x", "y", "z"};
    raw.morphisms = {{"id_x", 0, 0}, {"id_y", 1, 1}, {"id_z", 2, 2}, {"f", 0, 2}, {"g", 1, 2}};
    raw.identities = {0, 1, 2};
    return validate_category(raw);  // identity composites synthesized
}

// Objects x,y,z with f:z→x, g:z→y (opposite of cospan).
inline FinCategory span() {
    RawCategory raw;
    raw.objects = {"x", "y", "z"};
    raw.morphisms = {{"id_x", 0, 0}, {"id_y", 1, 1}, {"id_z", 2, 2}, {"f", 2, 0}, {"g", 2, 1}};
    raw.identities = {0, 1, 2};
    return validate_category(raw);
}

// Downsets of the poset {x,y < z}: ids 0:∅ 1:{x} 2:{y} 3:{x,y} 4:{x,y,z}.
inline FinLattice fork() {
    FinPoset P = validate_poset({"x", "y", "z"}, {{0, 2}, {1, 2}});
    return downsets_of_poset(P).lattice;
}

// Pentagon: 0 < a < c < 1 and 0 < b < 1, a,b and c,b incomparable.
inline FinPoset pentagon_poset() {
    return validate_poset({"0", "a", "c", "b", "1"},
                          {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}});
}

// Monoid with unit e where g∘f = g for g ≠ e ("constant" left action).
inline FinCategory left_zero_monoid() {
    return validate_category(monoid_raw_category({{0, 1, 2}, {1, 1, 1}, {2, 2, 2}}));
}

// Monoid with unit e where g∘f = f for f ≠ e.
inline FinCategory right_zero_monoid() {
    return validate_category(monoid_raw_category({{0, 1, 2}, {1, 1, 2}, {2, 1, 2}}));
}

}  // namespace finsite::fixtures
