#include "finsite/fincat.hpp"

#include <algorithm>

namespace finsite {

FinCategory validate_category(const RawCategory& raw) {
    const int nobj = static_cast<int>(raw.objects.size());
    const int nmor = static_cast<int>(raw.morphisms.size());
    check(nobj > 0, Errc::EmptyCategory, "a category must own at least one object");
    check(static_cast<int>(raw.identities.size()) == nobj, Errc::BadInput,
          "identities must list one morphism per object");

    FinCategory C;
    C.object_names_ = raw.objects;
    C.morphism_names_.reserve(nmor);
    C.dom_.reserve(nmor);
    C.cod_.reserve(nmor);
    for (const auto& m : raw.morphisms) {
        check(0 <= m.dom && m.dom < nobj && 0 <= m.cod && m.cod < nobj, Errc::BadInput,
              "morphism '" + m.name + "' has endpoints outside the object list");
        C.morphism_names_.push_back(m.name);
        C.dom_.push_back(m.dom);
        C.cod_.push_back(m.cod);
    }
    C.identity_ = raw.identities;
    for (int o = 0; o < nobj; ++o) {
        int e = C.identity_[o];
        check(0 <= e && e < nmor, Errc::BadInput, "identity id out of range");
        check(C.dom_[e] == o && C.cod_[e] == o, Errc::BadIdentity,
              "identity of '" + raw.objects[o] + "' is not an endomorphism of it");
    }

    C.comp_.assign(static_cast<size_t>(nmor) * nmor, -1);
    for (const auto& [g, f, r] : raw.composition) {
        check(0 <= g && g < nmor && 0 <= f && f < nmor && 0 <= r && r < nmor, Errc::BadInput,
              "composition entry references an unknown morphism");
        check(C.cod_[f] == C.dom_[g], Errc::BadInput,
              "composition entry (" + C.morphism_names_[g] + ", " + C.morphism_names_[f] +
                  ") is not a composable pair");
        check(C.dom_[r] == C.dom_[f] && C.cod_[r] == C.cod_[g], Errc::BadInput,
              "composite of (" + C.morphism_names_[g] + ", " + C.morphism_names_[f] +
                  ") has mismatched endpoints");
        int& cell = C.comp_[static_cast<size_t>(g) * nmor + f];
        check(cell == -1 || cell == r, Errc::BadInput, "duplicate conflicting composition entry");
        cell = r;
    }

    // Synthesize composites with identities when omitted, then demand totality.
    for (int f = 0; f < nmor; ++f) {
        int& with_dom_id = C.comp_[static_cast<size_t>(f) * nmor + C.identity_[C.dom_[f]]];
        if (with_dom_id == -1) with_dom_id = f;
        int& with_cod_id = C.comp_[static_cast<size_t>(C.identity_[C.cod_[f]]) * nmor + f];
        if (with_cod_id == -1) with_cod_id = f;
    }
    for (int g = 0; g < nmor; ++g)
        for (int f = 0; f < nmor; ++f) {
            if (C.cod_[f] != C.dom_[g]) continue;
            check(C.comp_[static_cast<size_t>(g) * nmor + f] != -1, Errc::MissingComposite,
                  "no composite for (" + C.morphism_names_[g] + " after " + C.morphism_names_[f] +
                      ")");
        }

    // Identity laws.
    for (int f = 0; f < nmor; ++f) {
        check(C.compose(f, C.identity_[C.dom_[f]]) == f, Errc::BadIdentity,
              "right identity law fails at " + C.morphism_names_[f]);
        check(C.compose(C.identity_[C.cod_[f]], f) == f, Errc::BadIdentity,
              "left identity law fails at " + C.morphism_names_[f]);
    }

    // Associativity over all composable triples.
    for (int h = 0; h < nmor; ++h)
        for (int g = 0; g < nmor; ++g) {
            if (C.cod_[g] != C.dom_[h]) continue;
            const int hg = C.compose(h, g);
            for (int f = 0; f < nmor; ++f) {
                if (C.cod_[f] != C.dom_[g]) continue;
                if (C.compose(hg, f) != C.compose(h, C.compose(g, f)))
                    fail(Errc::NonAssociative,
                         "triple (" + C.morphism_names_[h] + ", " + C.morphism_names_[g] + ", " +
                             C.morphism_names_[f] + ")");
            }
        }

    C.hom_.assign(static_cast<size_t>(nobj) * nobj, {});
    C.into_.assign(nobj, {});
    C.from_.assign(nobj, {});
    for (int m = 0; m < nmor; ++m) {
        C.hom_[static_cast<size_t>(C.dom_[m]) * nobj + C.cod_[m]].push_back(m);
        C.into_[C.cod_[m]].push_back(m);
        C.from_[C.dom_[m]].push_back(m);
    }
    return C;
}

FinCategory opposite(const FinCategory& C) {
    RawCategory raw;
    raw.objects = std::vector<std::string>(C.num_objects());
    for (int o = 0; o < C.num_objects(); ++o) raw.objects[o] = C.object_name(o);
    for (int m = 0; m < C.num_morphisms(); ++m)
        raw.morphisms.push_back({C.morphism_name(m), C.cod(m), C.dom(m)});
    raw.identities.resize(C.num_objects());
    for (int o = 0; o < C.num_objects(); ++o) raw.identities[o] = C.identity(o);
    for (int g = 0; g < C.num_morphisms(); ++g)
        for (int f = 0; f < C.num_morphisms(); ++f)
            if (C.composable(g, f))
                raw.composition.push_back({f, g, C.compose(g, f)});
    return validate_category(raw);
}

std::optional<PullbackSquare> find_pullback(const FinCategory& C, int f, int g) {
    check(C.cod(f) == C.cod(g), Errc::NotCospan,
          "pullback requested for (" + C.morphism_name(f) + ", " + C.morphism_name(g) +
              ") with different codomains");
    const int df = C.dom(f), dg = C.dom(g);

    // All competing cones, fixed once.
    std::vector<std::array<int, 2>> cones;  // (u: z->df, v: z->dg), f u = g v
    for (int z = 0; z < C.num_objects(); ++z)
        for (int u : C.hom(z, df))
            for (int v : C.hom(z, dg))
                if (C.compose(f, u) == C.compose(g, v)) cones.push_back({u, v});

    for (int apex = 0; apex < C.num_objects(); ++apex)
        for (int p : C.hom(apex, df))
            for (int q : C.hom(apex, dg)) {
                if (C.compose(f, p) != C.compose(g, q)) continue;
                PullbackSquare sq{apex, p, q, f, g, {}};
                bool universal = true;
                for (const auto& [u, v] : cones) {
                    int found = -1;
                    bool unique = true;
                    for (int w : C.hom(C.dom(u), apex)) {
                        if (C.compose(p, w) == u && C.compose(q, w) == v) {
                            if (found != -1) {
                                unique = false;
                                break;
                            }
                            found = w;
                        }
                    }
                    if (found == -1 || !unique) {
                        universal = false;
                        break;
                    }
                    sq.certificate.push_back({u, v, found});
                }
                if (universal) return sq;
            }
    return std::nullopt;
}

const PullbackSquare& CartesianCheck::pullback(int f, int g) const {
    for (const auto& sq : pullbacks)
        if (sq.f == f && sq.g == g) return sq;
    fail(Errc::BadInput, "no pullback recorded for the requested cospan");
}

CartesianCheck is_cartesian(const FinCategory& C) {
    CartesianCheck res;
    int terminal = -1;
    for (int t = 0; t < C.num_objects() && terminal == -1; ++t) {
        bool ok = true;
        for (int x = 0; x < C.num_objects(); ++x)
            if (C.hom(x, t).size() != 1) {
                ok = false;
                break;
            }
        if (ok) terminal = t;
    }
    if (terminal == -1) {
        res.missing_terminal = true;
        return res;
    }
    res.terminal = terminal;
    for (int f = 0; f < C.num_morphisms(); ++f)
        for (int g = 0; g < C.num_morphisms(); ++g) {
            if (C.cod(f) != C.cod(g)) continue;
            auto sq = find_pullback(C, f, g);
            if (!sq) {
                res.failing_cospan = {f, g};
                res.pullbacks.clear();
                return res;
            }
            res.pullbacks.push_back(std::move(*sq));
        }
    res.cartesian = true;
    return res;
}

OreCheck has_right_ore(const FinCategory& C) {
    for (int f = 0; f < C.num_morphisms(); ++f)
        for (int g = 0; g < C.num_morphisms(); ++g) {
            if (C.cod(f) != C.cod(g)) continue;
            const int a = C.dom(f), b = C.dom(g);
            bool completed = false;
            for (int z = 0; z < C.num_objects() && !completed; ++z)
                for (int h : C.hom(z, a)) {
                    const int fh = C.compose(f, h);
                    for (int k : C.hom(z, b))
                        if (fh == C.compose(g, k)) {
                            completed = true;
                            break;
                        }
                    if (completed) break;
                }
            if (!completed) return {false, std::make_pair(f, g)};
        }
    return {true, std::nullopt};
}

OreCheck has_amalgamation(const FinCategory& C) {
    for (int f = 0; f < C.num_morphisms(); ++f)
        for (int g = 0; g < C.num_morphisms(); ++g) {
            if (C.dom(f) != C.dom(g)) continue;
            const int a = C.cod(f), b = C.cod(g);
            bool completed = false;
            for (int z = 0; z < C.num_objects() && !completed; ++z)
                for (int u : C.hom(a, z)) {
                    const int uf = C.compose(u, f);
                    for (int v : C.hom(b, z))
                        if (uf == C.compose(v, g)) {
                            completed = true;
                            break;
                        }
                    if (completed) break;
                }
            if (!completed) return {false, std::make_pair(f, g)};
        }
    return {true, std::nullopt};
}

RawCategory poset_raw_category(const std::vector<std::vector<bool>>& leq,
                               const std::vector<std::string>& names) {
    const int n = static_cast<int>(leq.size());
    RawCategory raw;
    for (int i = 0; i < n; ++i)
        raw.objects.push_back(names.empty() ? "p" + std::to_string(i) : names[i]);
    // morphism per related pair a<=b, identities first so identity(o)=o
    std::vector<std::vector<int>> mid(n, std::vector<int>(n, -1));
    for (int a = 0; a < n; ++a) {
        raw.morphisms.push_back({"id_" + raw.objects[a], a, a});
        mid[a][a] = a;
        raw.identities.push_back(a);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && leq[a][b]) {
                mid[a][b] = static_cast<int>(raw.morphisms.size());
                raw.morphisms.push_back({raw.objects[a] + "<=" + raw.objects[b], a, b});
            }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (mid[a][b] != -1 && mid[b][c] != -1)
                    raw.composition.push_back({mid[b][c], mid[a][b], mid[a][c]});
    return raw;
}

RawCategory monoid_raw_category(const std::vector<std::vector<int>>& table) {
    const int n = static_cast<int>(table.size());
    RawCategory raw;
    raw.objects = {"*"};
    for (int i = 0; i < n; ++i) raw.morphisms.push_back({"m" + std::to_string(i), 0, 0});
    raw.identities = {0};
    for (int g = 0; g < n; ++g)
        for (int f = 0; f < n; ++f) raw.composition.push_back({g, f, table[g][f]});
    return raw;
}

}  // namespace finsite
