#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "finsite/fincat.hpp"

namespace finsite {

inline constexpr int kMaxSmallObjects = 3;
inline constexpr int kMaxSmallMorphisms = 8;

// Compact category representation used by the exhaustive corpus: at most 3
// objects and 8 morphisms, composition as a dense signed byte table.
struct SmallCat {
    int nobj = 0, nmor = 0;
    std::array<uint8_t, kMaxSmallMorphisms> dom{}, cod{};
    std::array<uint8_t, kMaxSmallObjects> ident{};
    // comp[g][f] = g∘f; -2 where not composable
    std::array<std::array<int8_t, kMaxSmallMorphisms>, kMaxSmallMorphisms> comp{};

    bool composable(int g, int f) const { return cod[f] == dom[g]; }
    int compose(int g, int f) const { return comp[g][f]; }
    bool is_identity(int m) const { return ident[dom[m]] == m && dom[m] == cod[m]; }
};

RawCategory small_to_raw(const SmallCat& c);

// Streams every finite category with at most max_objects objects and
// max_morphisms morphisms (identities included in the count), exactly one
// representative per isomorphism class, in a fixed deterministic order:
// ascending object count, then morphism count, then hom-matrix shape, then
// lexicographically least composition table.  Isomorphism classes are cut
// down during the search by a lex-leader test over the shape's relabeling
// group (object permutations preserving the hom matrix combined with
// per-hom-set bijections fixing identities).
void enumerate_categories(int max_objects, int max_morphisms,
                          const std::function<void(const SmallCat&)>& emit);

// Count of emitted categories per exact (objects, morphisms) pair.
std::map<std::pair<int, int>, long long> enumeration_census(int max_objects, int max_morphisms);

}  // namespace finsite
