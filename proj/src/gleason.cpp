#include "finsite/gleason.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "finsite/error.hpp"

namespace finsite {
namespace {

std::string at(const FinCategory& C, int c) { return "object " + C.object_name(c); }

// Position of a sieve in a sorted carrier column, -1 if absent.
int carrier_index(const std::vector<Bits>& column, const Bits& s) {
    auto it = std::lower_bound(column.begin(), column.end(), s);
    if (it == column.end() || !(*it == s)) return -1;
    return static_cast<int>(it - column.begin());
}

// The base objects covered by the empty sieve (where 0 = 1 is allowed).
std::vector<bool> empty_covered(const FinCategory& C, const GrothTopology& J) {
    std::vector<bool> out(C.num_objects());
    Bits none(C.num_morphisms());
    for (int c = 0; c < C.num_objects(); ++c) out[c] = J.covers(c, none);
    return out;
}

// rho[c][R] = {f : d -> c | the lift (f, 1) lies in R}, located in the
// classifier carrier (the image is a closed sieve — a theorem, so a miss is
// TheoremViolation, not input validation).
std::vector<std::vector<int>> rho_table(const FinCategory& C, const InternalFrame& om,
                                        const RelativeSite& rel, const FibredIdeals& idl) {
    std::vector<std::vector<int>> rho(C.num_objects());
    for (int c = 0; c < C.num_objects(); ++c) {
        rho[c].reserve(idl.carrier[c].size());
        for (const Bits& R : idl.carrier[c]) {
            Bits S(C.num_morphisms());
            for (int f : C.morphisms_into(c)) {
                int lift = rel.total_morphism(f, rel.content.fibre[c].top,
                                              rel.content.fibre[C.dom(f)].top);
                if (R.get(lift)) S.set(f);
            }
            int s = carrier_index(om.carrier[c], S);
            check(s >= 0, Errc::TheoremViolation,
                  "rho image is not a closed sieve at " + at(C, c));
            rho[c].push_back(s);
        }
    }
    return rho;
}

// lambda[c][S] = join over f in S of the cover-locale adjoint at the top of
// the fibre over dom f.
std::vector<std::vector<int>> lambda_table(const FinCategory& C, const InternalFrame& om,
                                           const FibredIdeals& idl) {
    const InternalLattice& L = idl.locale.lattice;
    std::vector<std::vector<int>> lam(C.num_objects());
    for (int c = 0; c < C.num_objects(); ++c) {
        lam[c].reserve(om.carrier[c].size());
        for (const Bits& S : om.carrier[c]) {
            int acc = L.fibre[c].bottom;
            S.for_each([&](int f) {
                acc = L.fibre[c].join(acc, idl.locale.adjoint[f][L.fibre[C.dom(f)].top]);
            });
            lam[c].push_back(acc);
        }
    }
    return lam;
}

}  // namespace

GleasonCover gleason_cover(const FinCategory& C, const GrothTopology& J, int cap) {
    validate_topology(C, J);
    GleasonCover G;
    G.base = C;
    G.topology = J;
    G.omega = omega(C, J, cap);
    G.omega_nn = omega_notnot(C, J, cap);
    InternalLattice nn = as_internal_lattice(C, J, G.omega_nn);
    G.nn_locale = as_internal_locale(nn);
    G.relative = coherent_coverage(nn);
    G.ideals = fibred_ideal_completion(nn, G.relative, cap);
    for (int c = 0; c < C.num_objects(); ++c)
        check(is_stone(G.ideals.locale.lattice.fibre[c]).stone, Errc::TheoremViolation,
              "cover fibre is not a Stone algebra at " + at(C, c));
    check(is_nontrivial(G.ideals.locale.lattice), Errc::TheoremViolation,
          "cover locale is trivial over an uncovered object");
    G.rho = rho_table(C, G.omega, G.relative, G.ideals);
    G.lambda = lambda_table(C, G.omega, G.ideals);
    return G;
}

bool gleason_is_de_morgan(const GleasonCover& G) {
    const FinCategory& C = G.base;
    const InternalLattice& idl = G.ideals.locale.lattice;
    for (int c = 0; c < C.num_objects(); ++c) {
        StoneReport sr = is_stone(idl.fibre[c]);
        check(sr.stone, Errc::TheoremViolation,
              "cover fibre is not a Stone algebra at " + at(C, c));
        // The proof's description of pseudo-complements: a morphism
        // m = (f, x) into (c, 1) lies in ¬R exactly when the support
        // ∃_f(x) misses the support of every member of R.
        const std::vector<int>& into = G.relative.total.morphisms_into(G.ideals.top_object[c]);
        const FinLattice& nnc = G.nn_locale.lattice.fibre[c];
        auto support = [&](int m) {
            return G.nn_locale.adjoint[G.relative.morphism_base[m]]
                                      [G.relative.object_element[G.relative.total.dom(m)]];
        };
        for (size_t r = 0; r < G.ideals.carrier[c].size(); ++r) {
            const Bits& R = G.ideals.carrier[c][r];
            Bits formula(G.relative.total.num_morphisms());
            for (int m : into) {
                bool disjoint = true;
                R.for_each([&](int g) {
                    if (disjoint && nnc.meet(support(m), support(g)) != nnc.bottom)
                        disjoint = false;
                });
                if (disjoint) formula.set(m);
            }
            int nr = pseudo_complement(idl.fibre[c], static_cast<int>(r));
            check(formula == G.ideals.carrier[c][nr], Errc::TheoremViolation,
                  "pseudo-complement formula disagrees with the lattice at " + at(C, c) +
                      ", element " + std::to_string(r));
        }
    }
    return true;
}

const std::vector<std::vector<int>>& rho(const GleasonCover& G) {
    const FinCategory& C = G.base;
    const InternalLattice& idl = G.ideals.locale.lattice;
    for (int c = 0; c < C.num_objects(); ++c) {
        const FinLattice& ic = idl.fibre[c];
        const FinLattice& oc = G.omega.fibre[c];
        check(G.rho[c][ic.top] == oc.top, Errc::TheoremViolation,
              "rho does not send 1 to the maximal sieve at " + at(C, c));
        for (int a = 0; a < ic.n(); ++a) {
            check(G.rho[c][pseudo_complement(ic, a)] ==
                      pseudo_complement(oc, G.rho[c][a]),
                  Errc::TheoremViolation,
                  "rho does not preserve pseudo-complements at " + at(C, c));
            for (int b = 0; b < ic.n(); ++b)
                check(G.rho[c][ic.meet(a, b)] == oc.meet(G.rho[c][a], G.rho[c][b]),
                      Errc::TheoremViolation,
                      "rho does not preserve meets at " + at(C, c));
        }
        for (int f : C.morphisms_into(c))
            for (int a = 0; a < ic.n(); ++a)
                check(G.omega.transition[f][G.rho[c][a]] ==
                          G.rho[C.dom(f)][idl.transition[f][a]],
                      Errc::TheoremViolation,
                      "rho is not natural along " + C.morphism_name(f));
    }
    return G.rho;
}

const std::vector<std::vector<int>>& lambda(const GleasonCover& G) {
    const FinCategory& C = G.base;
    const InternalLattice& idl = G.ideals.locale.lattice;
    for (int c = 0; c < C.num_objects(); ++c) {
        const FinLattice& ic = idl.fibre[c];
        const FinLattice& oc = G.omega.fibre[c];
        for (int s = 0; s < oc.n(); ++s) {
            check(oc.leq(s, G.rho[c][G.lambda[c][s]]), Errc::TheoremViolation,
                  "S is not contained in rho(lambda(S)) at " + at(C, c));
            check(ic.leq(G.lambda[c][pseudo_complement(oc, s)],
                         pseudo_complement(ic, G.lambda[c][s])),
                  Errc::TheoremViolation,
                  "lambda(¬S) exceeds ¬lambda(S) at " + at(C, c));
        }
        for (int f : C.morphisms_into(c))
            for (int s = 0; s < oc.n(); ++s)
                check(G.lambda[C.dom(f)][G.omega.transition[f][s]] ==
                          idl.transition[f][G.lambda[c][s]],
                      Errc::TheoremViolation,
                      "lambda is not natural along " + C.morphism_name(f));
    }
    return G.lambda;
}

bool check_minimality(const InternalLattice& A) {
    const FinCategory& C = A.base;
    std::vector<bool> covered = empty_covered(C, A.topology);
    for (int c = 0; c < C.num_objects(); ++c)
        for (int a = 0; a < A.fibre[c].n(); ++a) {
            if (a == A.fibre[c].bottom) continue;
            bool hits_top = false;
            for (int f : C.morphisms_into(c)) {
                if (covered[C.dom(f)]) continue;
                if (A.transition[f][a] == A.fibre[C.dom(f)].top) {
                    hits_top = true;
                    break;
                }
            }
            if (!hits_top) return false;  // a nonzero element looks like 0
        }
    return true;
}

bool check_minimality(const GleasonCover& G) {
    check(check_minimality(G.ideals.locale.lattice), Errc::TheoremViolation,
          "the cover locale is not minimal");
    return true;
}

bool check_rho_regular_iso(const GleasonCover& G) {
    const FinCategory& C = G.base;
    const InternalLattice& idl = G.ideals.locale.lattice;
    std::vector<std::vector<int>> regulars(C.num_objects());
    for (int c = 0; c < C.num_objects(); ++c) {
        const FinLattice& ic = idl.fibre[c];
        for (int a = 0; a < ic.n(); ++a)
            if (pseudo_complement(ic, pseudo_complement(ic, a)) == a)
                regulars[c].push_back(a);
        std::vector<Bits> image;
        image.reserve(regulars[c].size());
        for (int a : regulars[c]) image.push_back(G.omega.carrier[c][G.rho[c][a]]);
        std::sort(image.begin(), image.end());
        check(std::adjacent_find(image.begin(), image.end()) == image.end(),
              Errc::TheoremViolation,
              "rho is not injective on regular elements at " + at(C, c));
        check(image == G.omega_nn.carrier[c], Errc::TheoremViolation,
              "rho does not map regular elements onto the regular classifier at " +
                  at(C, c));
    }
    for (int c = 0; c < C.num_objects(); ++c)
        for (int f : C.morphisms_into(c))
            for (int a : regulars[c]) {
                int ta = idl.transition[f][a];
                const FinLattice& id_ = idl.fibre[C.dom(f)];
                check(pseudo_complement(id_, pseudo_complement(id_, ta)) == ta,
                      Errc::TheoremViolation,
                      "transition leaves the regular part along " + C.morphism_name(f));
                check(G.omega.transition[f][G.rho[c][a]] == G.rho[C.dom(f)][ta],
                      Errc::TheoremViolation,
                      "the regular isomorphism is not natural along " +
                          C.morphism_name(f));
            }
    return true;
}

bool check_idl_coproduct_is_omega(const FinCategory& C, const GrothTopology& J, int cap) {
    InternalFrame om = omega(C, J, cap);
    InternalLattice two = complemented_part(C, J, om);
    RelativeSite K = coherent_coverage(two);
    FibredIdeals idl = fibred_ideal_completion(two, K, cap);
    // Complemented elements of Omega(c), in fibre order of `two`.
    std::vector<std::vector<int>> comp(C.num_objects());
    for (int c = 0; c < C.num_objects(); ++c) {
        comp[c] = complemented_elements(om.fibre[c]);
        for (size_t u = 0; u < comp[c].size(); ++u)
            for (size_t v = 0; v < comp[c].size(); ++v)
                check(std::binary_search(comp[c].begin(), comp[c].end(),
                                         om.fibre[c].join(comp[c][u], comp[c][v])),
                      Errc::TheoremViolation,
                      "join of complemented elements is not complemented at " + at(C, c));
    }
    std::vector<std::vector<int>> r = rho_table(C, om, K, idl);
    for (int c = 0; c < C.num_objects(); ++c) {
        check(idl.carrier[c].size() == om.carrier[c].size() &&
                  [&] {
                      std::vector<int> seen(om.carrier[c].size(), 0);
                      for (int s : r[c]) ++seen[s];
                      return std::all_of(seen.begin(), seen.end(),
                                         [](int k) { return k == 1; });
                  }(),
              Errc::TheoremViolation,
              "the ideal completion of 1⊔1 is not the classifier at " + at(C, c));
        // Membership in a closed sieve is decided by its plain part:
        // (f, x) ∈ R  ⟺  x ⊆ f*(S_R) as sieves on dom f.
        for (size_t i = 0; i < idl.carrier[c].size(); ++i) {
            Sieve SR{c, om.carrier[c][r[c][i]]};
            for (int m : K.total.morphisms_into(idl.top_object[c])) {
                int d = K.object_base[K.total.dom(m)];
                const Bits& x = om.carrier[d][comp[d][K.object_element[K.total.dom(m)]]];
                bool plain =
                    x.subset_of(pullback_sieve(C, SR, K.morphism_base[m]).members);
                check(idl.carrier[c][i].get(m) == plain, Errc::TheoremViolation,
                      "closed-sieve membership disagrees with the plain part at " +
                          at(C, c));
            }
        }
    }
    return true;
}

bool is_equivalence(const GleasonCover& G) {
    const FinCategory& C = G.base;
    bool pointwise = true;
    for (int c = 0; c < C.num_objects() && pointwise; ++c) {
        if (G.ideals.carrier[c].size() != G.omega.carrier[c].size()) pointwise = false;
        std::vector<int> seen(G.omega.carrier[c].size(), 0);
        for (int s : G.rho[c])
            if (++seen[s] > 1) pointwise = false;
    }
    bool dm = is_de_morgan_topos(C, G.topology).verdict;
    check(pointwise == dm, Errc::TheoremViolation,
          "rho bijectivity disagrees with the base De Morgan decision");
    return pointwise;
}

FinCategory atoms_category(const FinCategory& C, const GrothTopology& J, int cap) {
    for (int c = 0; c < C.num_objects(); ++c)
        check(J.covering[c].size() == 1 &&
                  J.covering[c][0] == maximal_sieve(C, c).members,
              Errc::NotPresheafBase,
              "atoms are only taken over the trivial topology; " + at(C, c) +
                  " has other covers");
    InternalLattice nn = as_internal_lattice(C, J, omega_notnot(C, J, cap));
    RelativeSite G = grothendieck_construction(nn);
    const FinCategory& T = G.total;
    auto is_atom = [&](int c, int x) {
        const FinLattice& L = nn.fibre[c];
        if (x == L.bottom) return false;
        for (int y = 0; y < L.n(); ++y)
            if (y != x && y != L.bottom && L.leq(y, x)) return false;
        return true;
    };
    std::vector<int> new_object(T.num_objects(), -1), new_morphism(T.num_morphisms(), -1);
    RawCategory raw;
    for (int t = 0; t < T.num_objects(); ++t)
        if (is_atom(G.object_base[t], G.object_element[t])) {
            new_object[t] = static_cast<int>(raw.objects.size());
            raw.objects.push_back(T.object_name(t));
        }
    for (int m = 0; m < T.num_morphisms(); ++m)
        if (new_object[T.dom(m)] >= 0 && new_object[T.cod(m)] >= 0) {
            new_morphism[m] = static_cast<int>(raw.morphisms.size());
            raw.morphisms.push_back(
                {T.morphism_name(m), new_object[T.dom(m)], new_object[T.cod(m)]});
        }
    raw.identities.resize(raw.objects.size());
    for (int t = 0; t < T.num_objects(); ++t)
        if (new_object[t] >= 0) raw.identities[new_object[t]] = new_morphism[T.identity(t)];
    for (int g = 0; g < T.num_morphisms(); ++g)
        for (int f = 0; f < T.num_morphisms(); ++f)
            if (new_morphism[g] >= 0 && new_morphism[f] >= 0 && T.composable(g, f))
                raw.composition.push_back(
                    {new_morphism[g], new_morphism[f], new_morphism[T.compose(g, f)]});
    FinCategory atoms = validate_category(raw);
    check(has_right_ore(atoms).holds, Errc::TheoremViolation,
          "the atoms category fails the right Ore condition");
    return atoms;
}

}  // namespace finsite
