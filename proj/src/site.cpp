#include "finsite/site.hpp"

#include <algorithm>
#include <unordered_set>

#include "finsite/error.hpp"

namespace finsite {

namespace {

// Principal sieve of f: everything that factors through f.
Bits principal_sieve(const FinCategory& C, int f) {
    Bits out(C.num_morphisms());
    for (int g : C.morphisms_into(C.dom(f))) out.set(C.compose(f, g));
    out.set(f);  // f = f∘id is already present; kept for clarity
    return out;
}

}  // namespace

bool is_sieve(const FinCategory& C, const Sieve& S) {
    if (S.target < 0 || S.target >= C.num_objects()) return false;
    if (S.members.size() != C.num_morphisms()) return false;
    bool ok = true;
    S.members.for_each([&](int f) {
        if (C.cod(f) != S.target) ok = false;
    });
    if (!ok) return false;
    S.members.for_each([&](int f) {
        for (int g : C.morphisms_into(C.dom(f)))
            if (!S.members.get(C.compose(f, g))) ok = false;
    });
    return ok;
}

Sieve empty_sieve(const FinCategory& C, int c) {
    check(0 <= c && c < C.num_objects(), Errc::BadInput, "no such object");
    return {c, Bits(C.num_morphisms())};
}

Sieve maximal_sieve(const FinCategory& C, int c) {
    Sieve S = empty_sieve(C, c);
    for (int f : C.morphisms_into(c)) S.members.set(f);
    return S;
}

Sieve generated_sieve(const FinCategory& C, int c, const std::vector<int>& family) {
    Sieve S = empty_sieve(C, c);
    for (int f : family) {
        check(0 <= f && f < C.num_morphisms(), Errc::BadInput, "no such morphism");
        check(C.cod(f) == c, Errc::WrongCodomain,
              "generator " + C.morphism_name(f) + " does not land in " + C.object_name(c));
        S.members |= principal_sieve(C, f);
    }
    return S;
}

Sieve pullback_sieve(const FinCategory& C, const Sieve& S, int f) {
    check(0 <= f && f < C.num_morphisms(), Errc::BadInput, "no such morphism");
    check(C.cod(f) == S.target, Errc::TargetMismatch,
          "cannot pull back a sieve on " + C.object_name(S.target) + " along " +
              C.morphism_name(f));
    Sieve out = empty_sieve(C, C.dom(f));
    for (int g : C.morphisms_into(C.dom(f)))
        if (S.members.get(C.compose(f, g))) out.members.set(g);
    return out;
}

Sieve intersect_sieves(const FinCategory& C, const Sieve& S, const Sieve& T) {
    (void)C;
    check(S.target == T.target, Errc::TargetMismatch, "sieves on different objects");
    return {S.target, S.members & T.members};
}

std::vector<Bits> sieves_on(const FinCategory& C, int c, int cap) {
    check(0 <= c && c < C.num_objects(), Errc::BadInput, "no such object");
    const auto& into = C.morphisms_into(c);
    std::vector<Bits> principal;
    principal.reserve(into.size());
    for (int f : into) principal.push_back(principal_sieve(C, f));

    std::unordered_set<Bits, BitsHash> seen;
    std::vector<Bits> out;
    out.emplace_back(C.num_morphisms());
    seen.insert(out.back());
    // Worklist closure: every sieve is a union of principal sieves, so
    // adding one principal sieve at a time reaches all of them.
    for (size_t i = 0; i < out.size(); ++i) {
        Bits cur = out[i];  // copy: out may reallocate below
        for (size_t k = 0; k < into.size(); ++k) {
            if (cur.get(into[k])) continue;
            Bits next = cur | principal[k];
            if (seen.insert(next).second) {
                check(static_cast<int>(out.size()) < cap, Errc::SizeExceeded,
                      "sieve space on " + C.object_name(c) + " exceeds cap");
                out.push_back(std::move(next));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool GrothTopology::covers(int c, const Bits& members) const {
    const auto& v = covering[c];
    return std::binary_search(v.begin(), v.end(), members);
}

GrothTopology trivial_topology(const FinCategory& C) {
    GrothTopology J;
    J.covering.resize(C.num_objects());
    for (int c = 0; c < C.num_objects(); ++c)
        J.covering[c].push_back(maximal_sieve(C, c).members);
    return J;
}

GrothTopology saturate(const FinCategory& C, const std::vector<Sieve>& families, int cap) {
    const int nobj = C.num_objects();
    std::vector<std::vector<Bits>> space(nobj);
    for (int c = 0; c < nobj; ++c) space[c] = sieves_on(C, c, cap);

    std::vector<std::unordered_set<Bits, BitsHash>> cov(nobj);
    for (int c = 0; c < nobj; ++c) cov[c].insert(maximal_sieve(C, c).members);
    for (const Sieve& S : families) {
        check(is_sieve(C, S), Errc::BadInput, "coverage family is not a sieve");
        cov[S.target].insert(S.members);
    }

    // Least fixpoint of: pullback stability, upward closure, and
    // "closure covering implies covering".  Upward closure plus the
    // closure rule generate exactly the transitivity axiom: an instance
    // S ∈ J, S ⊆ Cl(R) first lifts S to Cl(R) upward, then closes R;
    // conversely both rules are special cases of transitivity.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int c = 0; c < nobj; ++c) {
            std::vector<Bits> snapshot(cov[c].begin(), cov[c].end());
            for (const Bits& s : snapshot) {
                for (int f = 0; f < C.num_morphisms(); ++f) {
                    if (C.cod(f) != c) continue;
                    Sieve p = pullback_sieve(C, {c, s}, f);
                    if (cov[C.dom(f)].insert(p.members).second) changed = true;
                }
            }
        }
        for (int c = 0; c < nobj; ++c) {
            for (const Bits& r : space[c]) {
                if (cov[c].count(r)) continue;
                bool add = false;
                for (const Bits& s : cov[c])
                    if (s.subset_of(r)) { add = true; break; }
                if (!add) {
                    // closure rule: r covers if Cl(r) does
                    Bits cl(C.num_morphisms());
                    for (int f : C.morphisms_into(c))
                        if (cov[C.dom(f)].count(pullback_sieve(C, {c, r}, f).members))
                            cl.set(f);
                    add = cov[c].count(cl) > 0;
                }
                if (add) {
                    cov[c].insert(r);
                    changed = true;
                }
            }
        }
    }

    GrothTopology J;
    J.covering.resize(nobj);
    for (int c = 0; c < nobj; ++c) {
        J.covering[c].assign(cov[c].begin(), cov[c].end());
        std::sort(J.covering[c].begin(), J.covering[c].end());
    }
    return J;
}

void validate_topology(const FinCategory& C, const GrothTopology& J, int cap) {
    check(static_cast<int>(J.covering.size()) == C.num_objects(), Errc::BadInput,
          "covering table size mismatch");
    for (int c = 0; c < C.num_objects(); ++c) {
        const auto& v = J.covering[c];
        check(std::is_sorted(v.begin(), v.end()) &&
                  std::adjacent_find(v.begin(), v.end()) == v.end(),
              Errc::BadInput, "covering sieves not sorted or not unique");
        for (const Bits& s : v)
            check(is_sieve(C, {c, s}), Errc::BadInput,
                  "covering entry on " + C.object_name(c) + " is not a sieve");
        check(J.covers(c, maximal_sieve(C, c).members), Errc::BadInput,
              "maximal sieve on " + C.object_name(c) + " does not cover");
        for (const Bits& s : v)
            for (int f = 0; f < C.num_morphisms(); ++f) {
                if (C.cod(f) != c) continue;
                Sieve p = pullback_sieve(C, {c, s}, f);
                check(J.covers(p), Errc::BadInput,
                      "stability fails on " + C.object_name(c) + " along " +
                          C.morphism_name(f));
            }
    }
    // Transitivity, directly from the definition: if some covering sieve S
    // has every pullback of R covering (that is, S ⊆ Cl(R)) then R covers.
    for (int c = 0; c < C.num_objects(); ++c) {
        for (const Bits& r : sieves_on(C, c, cap)) {
            if (J.covers(c, r)) continue;
            Bits cl(C.num_morphisms());
            for (int f : C.morphisms_into(c))
                if (J.covers(pullback_sieve(C, {c, r}, f))) cl.set(f);
            for (const Bits& s : J.covering[c])
                check(!s.subset_of(cl), Errc::BadInput,
                      "transitivity fails on " + C.object_name(c));
        }
    }
}

Sieve closure(const FinCategory& C, const CoversFn& covers, const Sieve& S) {
    check(is_sieve(C, S), Errc::BadInput, "closure of a non-sieve");
    Sieve out = empty_sieve(C, S.target);
    for (int f : C.morphisms_into(S.target))
        if (covers(C.dom(f), pullback_sieve(C, S, f).members)) out.members.set(f);
    check(is_sieve(C, out), Errc::SelfCheckFailed, "closure is not a sieve");
    return out;
}

Sieve closure(const FinCategory& C, const GrothTopology& J, const Sieve& S) {
    return closure(
        C, [&J](int c, const Bits& members) { return J.covers(c, members); }, S);
}

FinPresheaf validate_presheaf(const FinCategory& C, FinPresheaf P) {
    check(static_cast<int>(P.size.size()) == C.num_objects(), Errc::BadInput,
          "presheaf sections table size mismatch");
    for (int n : P.size) check(n >= 0, Errc::BadInput, "negative section count");
    check(static_cast<int>(P.restriction.size()) == C.num_morphisms(), Errc::BadInput,
          "presheaf restriction table size mismatch");
    for (int f = 0; f < C.num_morphisms(); ++f) {
        const auto& r = P.restriction[f];
        check(static_cast<int>(r.size()) == P.size[C.cod(f)], Errc::BadInput,
              "restriction along " + C.morphism_name(f) + " has wrong domain size");
        for (int v : r)
            check(0 <= v && v < P.size[C.dom(f)], Errc::BadInput,
                  "restriction along " + C.morphism_name(f) + " escapes its codomain");
    }
    for (int c = 0; c < C.num_objects(); ++c)
        for (int s = 0; s < P.size[c]; ++s)
            check(P.apply(C.identity(c), s) == s, Errc::BadInput,
                  "identity restriction is not the identity on " + C.object_name(c));
    for (int g = 0; g < C.num_morphisms(); ++g)
        for (int f = 0; f < C.num_morphisms(); ++f) {
            if (!C.composable(g, f)) continue;
            int gf = C.compose(g, f);
            for (int s = 0; s < P.size[C.cod(g)]; ++s)
                check(P.apply(gf, s) == P.apply(f, P.apply(g, s)), Errc::BadInput,
                      "restriction is not functorial at " + C.morphism_name(g) + " ∘ " +
                          C.morphism_name(f));
        }
    return P;
}

FinPresheaf constant_presheaf(const FinCategory& C, int k) {
    check(k >= 0, Errc::BadInput, "negative section count");
    FinPresheaf P;
    P.size.assign(C.num_objects(), k);
    P.restriction.resize(C.num_morphisms());
    for (int f = 0; f < C.num_morphisms(); ++f) {
        P.restriction[f].resize(k);
        for (int s = 0; s < k; ++s) P.restriction[f][s] = s;
    }
    return P;
}

FinPresheaf representable_presheaf(const FinCategory& C, int c) {
    check(0 <= c && c < C.num_objects(), Errc::BadInput, "no such object");
    // Section s of P(d) is the s-th morphism of hom(d, c).
    std::vector<std::vector<int>> index(C.num_objects(),
                                        std::vector<int>(C.num_morphisms(), -1));
    FinPresheaf P;
    P.size.resize(C.num_objects());
    for (int d = 0; d < C.num_objects(); ++d) {
        const auto& h = C.hom(d, c);
        P.size[d] = static_cast<int>(h.size());
        for (int s = 0; s < P.size[d]; ++s) index[d][h[s]] = s;
    }
    P.restriction.resize(C.num_morphisms());
    for (int g = 0; g < C.num_morphisms(); ++g) {
        const auto& h = C.hom(C.cod(g), c);
        P.restriction[g].resize(h.size());
        for (size_t s = 0; s < h.size(); ++s)
            P.restriction[g][s] = index[C.dom(g)][C.compose(h[s], g)];
    }
    return P;
}

namespace {

// All matching families for P over the sieve `members` on c: assignments
// f ↦ values[f] ∈ P(dom f) with values[f∘g] = P(g)(values[f]).
std::vector<std::vector<int>> matching_families(const FinCategory& C,
                                                const FinPresheaf& P, int c,
                                                const Bits& members) {
    (void)c;
    std::vector<int> ms;
    members.for_each([&](int f) { ms.push_back(f); });
    // Constraints (f, g, f∘g) with both ends in the sieve.
    struct Cons {
        int f, g, fg;
    };
    std::vector<Cons> cons;
    for (int f : ms)
        for (int g : C.morphisms_into(C.dom(f))) cons.push_back({f, g, C.compose(f, g)});

    // Assignment plan: whenever some unplaced morphism is a precomposition
    // f∘g of a placed f, its value is forced; only genuinely new morphisms
    // branch.  This keeps the search linear over e.g. maximal sieves.
    struct Step {
        int m;
        int from_f = -1, from_g = -1;  // m = from_f ∘ from_g when forced
    };
    std::vector<Step> plan;
    std::vector<char> placed(C.num_morphisms(), 0);
    std::vector<char> pending(C.num_morphisms(), 0);
    for (int m : ms) pending[m] = 1;
    size_t left = ms.size();
    while (left > 0) {
        bool forced = false;
        for (const Cons& k : cons)
            if (placed[k.f] && pending[k.fg]) {
                plan.push_back({k.fg, k.f, k.g});
                placed[k.fg] = 1;
                pending[k.fg] = 0;
                --left;
                forced = true;
                break;
            }
        if (forced) continue;
        for (int m : ms)
            if (pending[m]) {
                plan.push_back({m});
                placed[m] = 1;
                pending[m] = 0;
                --left;
                break;
            }
    }

    std::vector<int> values(C.num_morphisms(), -1);
    std::vector<std::vector<int>> out;
    auto consistent_at = [&](int m) {
        for (const Cons& k : cons) {
            if (k.f != m && k.fg != m) continue;
            if (values[k.f] < 0 || values[k.fg] < 0) continue;
            if (values[k.fg] != P.apply(k.g, values[k.f])) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == plan.size()) {
            out.push_back(values);
            return;
        }
        const Step& st = plan[i];
        if (st.from_f >= 0) {
            values[st.m] = P.apply(st.from_g, values[st.from_f]);
            if (consistent_at(st.m)) self(self, i + 1);
            values[st.m] = -1;
            return;
        }
        for (int v = 0; v < P.size[C.dom(st.m)]; ++v) {
            values[st.m] = v;
            if (consistent_at(st.m)) self(self, i + 1);
        }
        values[st.m] = -1;
    };
    rec(rec, 0);
    return out;
}

}  // namespace

SheafReport is_sheaf(const FinCategory& C, const GrothTopology& J, const FinPresheaf& P) {
    for (int c = 0; c < C.num_objects(); ++c) {
        for (const Bits& s : J.covering[c]) {
            for (auto& fam : matching_families(C, P, c, s)) {
                int count = 0;
                for (int x = 0; x < P.size[c]; ++x) {
                    bool amalg = true;
                    s.for_each([&](int f) {
                        if (P.apply(f, x) != fam[f]) amalg = false;
                    });
                    if (amalg) ++count;
                }
                if (count != 1) {
                    SheafReport r;
                    r.ok = false;
                    r.failing = MatchingFamily{c, s, fam};
                    r.amalgamation_count = count;
                    return r;
                }
            }
        }
    }
    return {};
}

PlusResult plus_construction(const FinCategory& C, const GrothTopology& J,
                             const FinPresheaf& P) {
    struct Family {
        int sieve;  // index into J.covering[c]
        std::vector<int> values;
    };
    const int nobj = C.num_objects();
    std::vector<std::vector<Family>> fams(nobj);
    std::vector<std::vector<int>> cls(nobj);   // family -> class id
    std::vector<std::vector<int>> rep(nobj);   // class id -> family index

    for (int c = 0; c < nobj; ++c) {
        for (size_t si = 0; si < J.covering[c].size(); ++si)
            for (auto& v : matching_families(C, P, c, J.covering[c][si]))
                fams[c].push_back({static_cast<int>(si), std::move(v)});

        // Two families are equal in P⁺ iff they agree on a common covering
        // refinement.  Union-find over all families at c.
        const int n = static_cast<int>(fams[c].size());
        std::vector<int> parent(n);
        for (int i = 0; i < n; ++i) parent[i] = i;
        auto find = [&](int i) {
            while (parent[i] != i) i = parent[i] = parent[parent[i]];
            return i;
        };
        auto agree_on = [&](const Family& a, const Family& b, const Bits& w) {
            bool ok = true;
            w.for_each([&](int f) {
                if (a.values[f] != b.values[f]) ok = false;
            });
            return ok;
        };
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (find(i) == find(j)) continue;
                Bits common =
                    J.covering[c][fams[c][i].sieve] & J.covering[c][fams[c][j].sieve];
                for (const Bits& w : J.covering[c]) {
                    if (!w.subset_of(common)) continue;
                    if (agree_on(fams[c][i], fams[c][j], w)) {
                        parent[find(i)] = find(j);
                        break;
                    }
                }
            }
        cls[c].resize(n);
        for (int i = 0; i < n; ++i)
            if (find(i) == i) rep[c].push_back(i);
        // Number classes in representative order.
        std::vector<int> number(n, -1);
        for (size_t k = 0; k < rep[c].size(); ++k) number[rep[c][k]] = static_cast<int>(k);
        for (int i = 0; i < n; ++i) cls[c][i] = number[find(i)];
    }

    // The class of the family obtained by pulling `fam` (over a sieve on c)
    // back along f : d -> c.
    auto restrict_class = [&](int c, const Family& fam, int f) {
        const int d = C.dom(f);
        Sieve p = pullback_sieve(C, {c, J.covering[c][fam.sieve]}, f);
        std::vector<int> values(C.num_morphisms(), -1);
        p.members.for_each([&](int g) { values[g] = fam.values[C.compose(f, g)]; });
        for (size_t si = 0; si < J.covering[d].size(); ++si) {
            if (!(J.covering[d][si] == p.members)) continue;
            for (size_t i = 0; i < fams[d].size(); ++i)
                if (fams[d][i].sieve == static_cast<int>(si) &&
                    fams[d][i].values == values)
                    return cls[d][i];
        }
        fail(Errc::SelfCheckFailed, "restricted family not found (pullback not covering?)");
    };

    PlusResult out;
    out.presheaf.size.resize(nobj);
    out.representatives.resize(nobj);
    for (int c = 0; c < nobj; ++c) {
        out.presheaf.size[c] = static_cast<int>(rep[c].size());
        for (int i : rep[c])
            out.representatives[c].push_back(
                {c, J.covering[c][fams[c][i].sieve], fams[c][i].values});
    }
    out.presheaf.restriction.resize(C.num_morphisms());
    for (int f = 0; f < C.num_morphisms(); ++f) {
        const int c = C.cod(f);
        out.presheaf.restriction[f].resize(out.presheaf.size[c]);
        for (size_t k = 0; k < rep[c].size(); ++k)
            out.presheaf.restriction[f][k] = restrict_class(c, fams[c][rep[c][k]], f);
    }
    // Restriction must be constant on classes; spot-check every family.
    for (int f = 0; f < C.num_morphisms(); ++f) {
        const int c = C.cod(f);
        for (size_t i = 0; i < fams[c].size(); ++i)
            check(restrict_class(c, fams[c][i], f) ==
                      out.presheaf.restriction[f][cls[c][i]],
                  Errc::SelfCheckFailed, "plus restriction not class-invariant");
    }

    // Unit: x ∈ P(c) becomes the family (P(f)(x))_f over the maximal sieve.
    out.unit.resize(nobj);
    for (int c = 0; c < nobj; ++c) {
        Bits maxs = maximal_sieve(C, c).members;
        std::vector<int> values(C.num_morphisms(), -1);
        out.unit[c].resize(P.size[c]);
        for (int x = 0; x < P.size[c]; ++x) {
            maxs.for_each([&](int f) { values[f] = P.apply(f, x); });
            int found = -1;
            for (size_t i = 0; i < fams[c].size(); ++i)
                if (J.covering[c][fams[c][i].sieve] == maxs && fams[c][i].values == values)
                    found = cls[c][i];
            check(found >= 0, Errc::SelfCheckFailed, "unit family not enumerated");
            out.unit[c][x] = found;
        }
    }
    out.presheaf = validate_presheaf(C, std::move(out.presheaf));
    return out;
}

PlusResult sheafify(const FinCategory& C, const GrothTopology& J, const FinPresheaf& P) {
    PlusResult first = plus_construction(C, J, P);
    PlusResult second = plus_construction(C, J, first.presheaf);
    PlusResult out;
    out.presheaf = std::move(second.presheaf);
    out.representatives = std::move(second.representatives);
    out.unit.resize(C.num_objects());
    for (int c = 0; c < C.num_objects(); ++c) {
        out.unit[c].resize(P.size[c]);
        for (int x = 0; x < P.size[c]; ++x)
            out.unit[c][x] = second.unit[c][first.unit[c][x]];
    }
    check(is_sheaf(C, J, out.presheaf).ok, Errc::SelfCheckFailed,
          "plus construction applied twice is not a sheaf");
    return out;
}

}  // namespace finsite
