#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finsite/error.hpp"

namespace finsite {

// Raw description of a finite category: explicit object/morphism lists and a
// composition table.  Ids are dense integers in input order; every "first"
// choice downstream is by id, so witnesses are bit-exact reproducible.
struct RawMorphism {
    std::string name;
    int dom = -1;
    int cod = -1;
};

struct RawCategory {
    std::vector<std::string> objects;
    std::vector<RawMorphism> morphisms;  // identities included, ids = indices
    std::vector<int> identities;         // identities[o] = morphism id of id_o
    // entries (g, f, g_after_f) for cod(f) = dom(g)
    std::vector<std::array<int, 3>> composition;
};

class FinCategory {
public:
    int num_objects() const { return static_cast<int>(object_names_.size()); }
    int num_morphisms() const { return static_cast<int>(dom_.size()); }

    const std::string& object_name(int o) const { return object_names_[o]; }
    const std::string& morphism_name(int m) const { return morphism_names_[m]; }

    int dom(int m) const { return dom_[m]; }
    int cod(int m) const { return cod_[m]; }
    int identity(int o) const { return identity_[o]; }
    bool is_identity(int m) const { return identity_[dom_[m]] == m && dom_[m] == cod_[m]; }

    bool composable(int g, int f) const { return cod_[f] == dom_[g]; }

    // g after f; requires cod(f) = dom(g)
    int compose(int g, int f) const { return comp_[static_cast<size_t>(g) * dom_.size() + f]; }

    // morphisms a -> b in id order
    const std::vector<int>& hom(int a, int b) const {
        return hom_[static_cast<size_t>(a) * object_names_.size() + b];
    }
    const std::vector<int>& morphisms_into(int c) const { return into_[c]; }
    const std::vector<int>& morphisms_from(int c) const { return from_[c]; }

    friend FinCategory validate_category(const RawCategory& raw);

private:
    std::vector<std::string> object_names_;
    std::vector<std::string> morphism_names_;
    std::vector<int> dom_, cod_, identity_;
    std::vector<int> comp_;  // comp_[g*m + f], -1 where not composable
    std::vector<std::vector<int>> hom_;
    std::vector<std::vector<int>> into_, from_;
};

// Checks identities, totality of composition over composable pairs,
// endpoint agreement and associativity.  Errors name the offending data:
// MissingComposite, NonAssociative, BadIdentity (axioms) and BadInput
// (malformed table).
FinCategory validate_category(const RawCategory& raw);

FinCategory opposite(const FinCategory& C);

struct PullbackSquare {
    int apex = -1;
    int proj_f = -1;  // apex -> dom(f)
    int proj_g = -1;  // apex -> dom(g)
    int f = -1, g = -1;
    // one entry per competing cone (u: z->dom f, v: z->dom g with f u = g v):
    // (u, v, unique mediating w: z->apex)
    std::vector<std::array<int, 3>> certificate;
};

// Deterministic: smallest apex id, then smallest projection ids.
std::optional<PullbackSquare> find_pullback(const FinCategory& C, int f, int g);

struct CartesianCheck {
    bool cartesian = false;
    int terminal = -1;                        // valid when cartesian
    std::vector<PullbackSquare> pullbacks;    // all cospans (f,g), f,g in id order
    std::optional<std::pair<int, int>> failing_cospan;
    bool missing_terminal = false;
    const PullbackSquare& pullback(int f, int g) const;
};

CartesianCheck is_cartesian(const FinCategory& C);

struct OreCheck {
    bool holds = false;
    std::optional<std::pair<int, int>> counterexample;  // cospan (f,g) / span (f,g)
};

// Every cospan f:a->c, g:b->c admits h,k with f∘h = g∘k.
OreCheck has_right_ore(const FinCategory& C);
// Every span f:c->a, g:c->b admits u,v with u∘f = v∘g.  Searched directly so
// the identity has_amalgamation(C) = has_right_ore(opposite(C)) stays a real
// two-route property test.
OreCheck has_amalgamation(const FinCategory& C);

// --- construction helpers ---------------------------------------------------

// Category of a finite poset given by its leq matrix (leq[a][b] = a<=b):
// one morphism a->b per related pair, composition forced.
RawCategory poset_raw_category(const std::vector<std::vector<bool>>& leq,
                               const std::vector<std::string>& names = {});

// One-object category from a monoid multiplication table (table[g][f] = g∘f,
// element 0 must be the unit).
RawCategory monoid_raw_category(const std::vector<std::vector<int>>& table);

}  // namespace finsite
