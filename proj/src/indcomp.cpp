#include "finsite/indcomp.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>

#include "finsite/error.hpp"

namespace finsite {

namespace {

std::string idx_name(int i) { return "i" + std::to_string(i); }

bool same_diagram(const IndObject& A, const IndObject& B) {
    if (A.index.n() != B.index.n()) return false;
    if (A.object != B.object || A.connect != B.connect) return false;
    for (int i = 0; i < A.index.n(); ++i)
        for (int j = 0; j < A.index.n(); ++j)
            if (A.index.leq(i, j) != B.index.leq(i, j)) return false;
    return true;
}

void assert_limit_condition(const FinCategory& C, const IndMorphism& m, Errc errc) {
    const int n = m.source.index.n();
    for (int i = 0; i < n; ++i)
        for (int i2 = 0; i2 < n; ++i2) {
            if (i == i2 || !m.source.index.leq(i, i2)) continue;
            const int restricted = C.compose(m.component[i2], m.source.connect[i][i2]);
            check(ind_same_class(C, m.target, m.target_index[i], m.component[i],
                                 m.target_index[i2], restricted),
                  errc,
                  "component family breaks the limit condition between indices " + idx_name(i) +
                      " and " + idx_name(i2));
        }
}

// Zig-zag classes of colim_j Hom(source_obj, B_j): literal union-find over all
// pairs (index, morphism), every class normalized by pushing a representative
// to the maximum; the set of normalized components is cross-checked against
// the hom-set at the maximum index.
std::vector<int> colim_classes(const FinCategory& C, const IndObject& B, int source_obj) {
    const int nB = B.index.n();
    const int M = ind_max_index(B);
    std::vector<std::pair<int, int>> pairs;  // (target index, base morphism)
    for (int j = 0; j < nB; ++j)
        for (int f : C.hom(source_obj, B.object[j])) pairs.emplace_back(j, f);

    std::vector<int> cls(pairs.size(), -1);
    std::vector<int> norm;  // class id -> component at the maximum
    for (size_t p = 0; p < pairs.size(); ++p) {
        for (size_t q = 0; q < p; ++q)
            if (ind_same_class(C, B, pairs[q].first, pairs[q].second, pairs[p].first,
                               pairs[p].second)) {
                cls[p] = cls[q];
                break;
            }
        const int at_max = C.compose(B.connect[pairs[p].first][M], pairs[p].second);
        if (cls[p] < 0) {
            cls[p] = static_cast<int>(norm.size());
            norm.push_back(at_max);
        } else {
            check(norm[cls[p]] == at_max, Errc::SelfCheckFailed,
                  "zig-zag classes must normalize consistently at the maximum");
        }
    }
    std::sort(norm.begin(), norm.end());
    check(norm == C.hom(source_obj, B.object[M]), Errc::SelfCheckFailed,
          "zig-zag classes must match the hom-set at the maximum index");
    return norm;
}

// All reflexive, antisymmetric, transitive, directed relations on n labeled
// indices as row-major 0/1 matrices, in ascending bit-pattern order over the
// off-diagonal slots.
std::vector<std::vector<uint8_t>> directed_orders(int n) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) slots.emplace_back(i, j);
    std::vector<std::vector<uint8_t>> out;
    const uint64_t lim = uint64_t{1} << slots.size();
    for (uint64_t mask = 0; mask < lim; ++mask) {
        std::vector<uint8_t> leq(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < n; ++i) leq[static_cast<size_t>(i) * n + i] = 1;
        for (size_t s = 0; s < slots.size(); ++s)
            if (mask >> s & 1) leq[static_cast<size_t>(slots[s].first) * n + slots[s].second] = 1;
        auto rel = [&](int a, int b) { return leq[static_cast<size_t>(a) * n + b] != 0; };
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                if (i != j && rel(i, j) && rel(j, i)) ok = false;  // antisymmetry
                if (!rel(i, j)) continue;
                for (int k = 0; k < n && ok; ++k)
                    if (rel(j, k) && !rel(i, k)) ok = false;  // transitivity
            }
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j) {
                bool bounded = false;
                for (int k = 0; k < n && !bounded; ++k) bounded = rel(i, k) && rel(j, k);
                if (!bounded) ok = false;  // directedness
            }
        if (ok) out.push_back(std::move(leq));
    }
    return out;
}

FinPoset poset_from_matrix(const std::vector<uint8_t>& leq, int n) {
    FinPoset P;
    P.names.reserve(n);
    for (int i = 0; i < n; ++i) P.names.push_back(idx_name(i));
    P.below.assign(n, Bits(n));
    P.above.assign(n, Bits(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (leq[static_cast<size_t>(i) * n + j]) {
                P.above[i].set(j);
                P.below[j].set(i);
            }
    return P;
}

// A diagram is kept only when its encoding (order relation, then objects,
// then connecting table, row-major) is lexicographically minimal among all
// relabelings of its indices.
bool is_canonical_diagram(const std::vector<uint8_t>& leq, const std::vector<int>& obj,
                          const std::vector<std::vector<int>>& con, int n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    while (std::next_permutation(perm.begin(), perm.end())) {
        // compare E(identity) against E(perm) entry by entry; perm[a] is the
        // original index placed at the new position a
        int cmp = 0;
        for (int a = 0; a < n && cmp == 0; ++a)
            for (int b = 0; b < n && cmp == 0; ++b) {
                const int lhs = leq[static_cast<size_t>(a) * n + b];
                const int rhs = leq[static_cast<size_t>(perm[a]) * n + perm[b]];
                cmp = lhs - rhs;
            }
        for (int a = 0; a < n && cmp == 0; ++a) cmp = obj[a] - obj[perm[a]];
        for (int a = 0; a < n && cmp == 0; ++a)
            for (int b = 0; b < n && cmp == 0; ++b) cmp = con[a][b] - con[perm[a]][perm[b]];
        if (cmp > 0) return false;
    }
    return true;
}

// Enumerates every canonical diagram with exactly n indices in deterministic
// order (order relation, object assignment, connecting table); fn returning
// true stops the walk.  Returns whether the walk was stopped.
bool for_each_diagram(const FinCategory& C, int n,
                      const std::function<bool(const IndObject&)>& fn) {
    for (const auto& leq : directed_orders(n)) {
        auto rel = [&](int a, int b) { return leq[static_cast<size_t>(a) * n + b] != 0; };
        const FinPoset P = poset_from_matrix(leq, n);

        // strict related pairs, ordered by interval size so any composite is
        // determined before the pair that needs it
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && rel(i, j)) pairs.emplace_back(i, j);
        auto interval = [&](int i, int j) {
            int c = 0;
            for (int t = 0; t < n; ++t)
                if (rel(i, t) && rel(t, j)) ++c;
            return c;
        };
        std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
            const int ia = interval(a.first, a.second), ib = interval(b.first, b.second);
            return std::tie(ia, a.first, a.second) < std::tie(ib, b.first, b.second);
        });

        std::vector<int> obj(n, 0);
        std::vector<std::vector<int>> con(n, std::vector<int>(n, -1));
        bool stopped = false;

        std::function<void(size_t)> fill = [&](size_t p) {
            if (stopped) return;
            if (p == pairs.size()) {
                // full functoriality over every ordered chain i <= j <= k
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (!rel(i, j)) continue;
                        for (int k = 0; k < n; ++k)
                            if (rel(j, k) && C.compose(con[j][k], con[i][j]) != con[i][k]) return;
                    }
                if (!is_canonical_diagram(leq, obj, con, n)) return;
                IndObject D;
                D.index = P;
                D.object = obj;
                D.connect = con;
                if (fn(D)) stopped = true;
                return;
            }
            const auto [i, j] = pairs[p];
            int between = -1;
            for (int t = 0; t < n && between < 0; ++t)
                if (t != i && t != j && rel(i, t) && rel(t, j)) between = t;
            if (between < 0) {
                for (int f : C.hom(obj[i], obj[j])) {
                    con[i][j] = f;
                    fill(p + 1);
                    if (stopped) break;
                }
                con[i][j] = -1;
            } else {
                con[i][j] = C.compose(con[between][j], con[i][between]);
                fill(p + 1);
                con[i][j] = -1;
            }
        };

        std::function<void(int)> assign = [&](int at) {
            if (stopped) return;
            if (at == n) {
                for (int i = 0; i < n; ++i) con[i][i] = C.identity(obj[i]);
                fill(0);
                for (int i = 0; i < n; ++i) con[i][i] = -1;
                return;
            }
            for (int o = 0; o < C.num_objects() && !stopped; ++o) {
                obj[at] = o;
                assign(at + 1);
            }
            obj[at] = 0;
        };

        assign(0);
        if (stopped) return true;
    }
    return false;
}

}  // namespace

int ind_max_index(const IndObject& A) {
    const int n = A.index.n();
    for (int m = 0; m < n; ++m) {
        bool all = true;
        for (int i = 0; i < n && all; ++i) all = A.index.leq(i, m);
        if (all) return m;
    }
    fail(Errc::BadInput, "index poset has no maximum, so it cannot be finite directed");
}

IndObject validate_ind_object(const FinCategory& C, IndObject A) {
    const int n = A.index.n();
    check(n > 0, Errc::BadInput, "a directed diagram needs at least one index");
    check(static_cast<int>(A.object.size()) == n, Errc::BadInput,
          "object assignment sized off the index poset");
    check(static_cast<int>(A.connect.size()) == n, Errc::BadInput,
          "connecting table sized off the index poset");
    for (const auto& row : A.connect)
        check(static_cast<int>(row.size()) == n, Errc::BadInput,
              "connecting table row sized off the index poset");

    // normalize the order and require the given relation to be exactly it
    std::vector<std::pair<int, int>> rel;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && A.index.leq(i, j)) rel.emplace_back(i, j);
    FinPoset rebuilt = validate_poset(A.index.names, rel);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            check(rebuilt.leq(i, j) == A.index.leq(i, j), Errc::BadInput,
                  "index order must be reflexive and transitively closed as given");
    A.index = std::move(rebuilt);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool bounded = false;
            for (int k = 0; k < n && !bounded; ++k)
                bounded = A.index.leq(i, k) && A.index.leq(j, k);
            check(bounded, Errc::BadInput,
                  "index pair " + idx_name(i) + "," + idx_name(j) +
                      " has no upper bound; the index poset must be directed");
        }

    for (int i = 0; i < n; ++i)
        check(0 <= A.object[i] && A.object[i] < C.num_objects(), Errc::BadInput,
              "diagram object out of range at " + idx_name(i));

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int c = A.connect[i][j];
            if (!A.index.leq(i, j)) {
                check(c == -1, Errc::BadInput,
                      "connecting entry present off the order at " + idx_name(i) + "->" +
                          idx_name(j));
                continue;
            }
            check(0 <= c && c < C.num_morphisms(), Errc::BadInput,
                  "connecting morphism out of range at " + idx_name(i) + "->" + idx_name(j));
            check(C.dom(c) == A.object[i] && C.cod(c) == A.object[j], Errc::BadInput,
                  "connecting morphism endpoints disagree with the diagram at " + idx_name(i) +
                      "->" + idx_name(j));
            if (i == j)
                check(c == C.identity(A.object[i]), Errc::BadInput,
                      "diagonal of the connecting table must be the identity at " + idx_name(i));
        }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!A.index.leq(i, j)) continue;
            for (int k = 0; k < n; ++k)
                if (A.index.leq(j, k))
                    check(C.compose(A.connect[j][k], A.connect[i][j]) == A.connect[i][k],
                          Errc::BadInput,
                          "connecting table is not functorial along " + idx_name(i) + "<=" +
                              idx_name(j) + "<=" + idx_name(k));
        }

    ind_max_index(A);  // directedness at finite size forces a maximum
    return A;
}

IndObject ind_embed_object(const FinCategory& C, int c) {
    check(0 <= c && c < C.num_objects(), Errc::BadInput, "object id out of range");
    IndObject A;
    A.index = validate_poset({idx_name(0)}, {});
    A.object = {c};
    A.connect = {{C.identity(c)}};
    return A;
}

bool ind_same_class(const FinCategory& C, const IndObject& B, int j, int f, int j2, int f2) {
    for (int k = 0; k < B.index.n(); ++k)
        if (B.index.leq(j, k) && B.index.leq(j2, k) &&
            C.compose(B.connect[j][k], f) == C.compose(B.connect[j2][k], f2))
            return true;
    return false;
}

IndMorphism validate_ind_morphism(const FinCategory& C, IndMorphism m) {
    m.source = validate_ind_object(C, m.source);
    m.target = validate_ind_object(C, m.target);
    const int n = m.source.index.n();
    check(static_cast<int>(m.target_index.size()) == n &&
              static_cast<int>(m.component.size()) == n,
          Errc::BadInput, "component family sized off the source index");
    for (int i = 0; i < n; ++i) {
        const int ti = m.target_index[i];
        const int c = m.component[i];
        check(0 <= ti && ti < m.target.index.n(), Errc::BadInput,
              "representative index out of range at " + idx_name(i));
        check(0 <= c && c < C.num_morphisms(), Errc::BadInput,
              "component morphism out of range at " + idx_name(i));
        check(C.dom(c) == m.source.object[i] && C.cod(c) == m.target.object[ti], Errc::BadInput,
              "component endpoints disagree with the diagrams at " + idx_name(i));
    }
    assert_limit_condition(C, m, Errc::BadInput);
    return m;
}

IndMorphism ind_embed_morphism(const FinCategory& C, int f) {
    check(0 <= f && f < C.num_morphisms(), Errc::BadInput, "morphism id out of range");
    IndMorphism m;
    m.source = ind_embed_object(C, C.dom(f));
    m.target = ind_embed_object(C, C.cod(f));
    m.target_index = {0};
    m.component = {f};
    return m;
}

IndMorphism ind_identity(const FinCategory& C, const IndObject& A) {
    IndMorphism m;
    m.source = validate_ind_object(C, A);
    m.target = m.source;
    const int n = m.source.index.n();
    m.target_index.resize(n);
    m.component.resize(n);
    for (int i = 0; i < n; ++i) {
        m.target_index[i] = i;
        m.component[i] = C.identity(m.source.object[i]);
    }
    assert_limit_condition(C, m, Errc::SelfCheckFailed);
    return m;
}

bool ind_equal(const FinCategory& C, const IndMorphism& a, const IndMorphism& b) {
    if (!same_diagram(a.source, b.source) || !same_diagram(a.target, b.target)) return false;
    const int n = a.source.index.n();
    if (static_cast<int>(b.component.size()) != n) return false;
    for (int i = 0; i < n; ++i)
        if (!ind_same_class(C, a.target, a.target_index[i], a.component[i], b.target_index[i],
                            b.component[i]))
            return false;
    return true;
}

std::vector<IndMorphism> ind_hom(const FinCategory& C, const IndObject& A, const IndObject& B) {
    const IndObject VA = validate_ind_object(C, A);
    const IndObject VB = validate_ind_object(C, B);
    const int nA = VA.index.n();
    const int MB = ind_max_index(VB);

    std::vector<std::vector<int>> classes(nA);
    for (int i = 0; i < nA; ++i) classes[i] = colim_classes(C, VB, VA.object[i]);

    std::vector<IndMorphism> out;
    std::vector<int> choice(nA, -1);
    // depth-first family assembly; every ordered pair of indices is checked
    // against the limit condition as soon as both choices exist
    std::function<void(int)> extend = [&](int i) {
        if (i == nA) {
            IndMorphism m;
            m.source = VA;
            m.target = VB;
            m.target_index.assign(nA, MB);
            m.component.resize(nA);
            for (int t = 0; t < nA; ++t) m.component[t] = classes[t][choice[t]];
            out.push_back(std::move(m));
            return;
        }
        for (int c = 0; c < static_cast<int>(classes[i].size()); ++c) {
            choice[i] = c;
            bool ok = true;
            for (int p = 0; p < i && ok; ++p) {
                if (VA.index.leq(p, i))
                    ok = ind_same_class(C, VB, MB, classes[p][choice[p]], MB,
                                        C.compose(classes[i][c], VA.connect[p][i]));
                if (ok && VA.index.leq(i, p))
                    ok = ind_same_class(C, VB, MB, classes[i][c], MB,
                                        C.compose(classes[p][choice[p]], VA.connect[i][p]));
            }
            if (ok) extend(i + 1);
        }
        choice[i] = -1;
    };
    extend(0);

    const int mA = ind_max_index(VA);
    check(out.size() == C.hom(VA.object[mA], VB.object[MB]).size(), Errc::SelfCheckFailed,
          "directed hom-set must collapse onto the maxima");
    std::sort(out.begin(), out.end(),
              [](const IndMorphism& x, const IndMorphism& y) { return x.component < y.component; });
    return out;
}

IndMorphism ind_compose(const FinCategory& C, const IndMorphism& g, const IndMorphism& f) {
    const IndMorphism vf = validate_ind_morphism(C, f);
    const IndMorphism vg = validate_ind_morphism(C, g);
    check(same_diagram(vf.target, vg.source), Errc::BadInput,
          "composition needs the middle diagrams to agree");
    const IndObject& A = vf.source;
    const IndObject& B = vf.target;
    const IndObject& T = vg.target;
    const int nA = A.index.n();

    IndMorphism out;
    out.source = A;
    out.target = T;
    out.target_index.resize(nA);
    out.component.resize(nA);
    for (int i = 0; i < nA; ++i) {
        const int j = vf.target_index[i];
        out.target_index[i] = vg.target_index[j];
        out.component[i] = C.compose(vg.component[j], vf.component[i]);
    }

    // exhaustive representative variation: every equivalent representative of
    // the source component, against every equivalent representative of the
    // middle component at its landing index, must give the same class
    for (int i = 0; i < nA; ++i)
        for (int j2 = 0; j2 < B.index.n(); ++j2)
            for (int f2 : C.hom(A.object[i], B.object[j2])) {
                if (!ind_same_class(C, B, vf.target_index[i], vf.component[i], j2, f2)) continue;
                const int k0 = vg.target_index[j2];
                const int g0 = vg.component[j2];
                for (int k2 = 0; k2 < T.index.n(); ++k2)
                    for (int g2 : C.hom(B.object[j2], T.object[k2])) {
                        if (!ind_same_class(C, T, k0, g0, k2, g2)) continue;
                        check(ind_same_class(C, T, out.target_index[i], out.component[i], k2,
                                             C.compose(g2, f2)),
                              Errc::SelfCheckFailed,
                              "composite class must not depend on chosen representatives");
                    }
            }

    assert_limit_condition(C, out, Errc::SelfCheckFailed);
    return out;
}

std::optional<IndAmalgamation> ind_amalgamate(const FinCategory& C, const IndMorphism& f,
                                              const IndMorphism& g, int bound) {
    check(bound <= kMaxIndBound, Errc::SizeExceeded,
          "amalgamation bound above " + std::to_string(kMaxIndBound) +
              "; the candidate diagram space grows too fast");
    const IndMorphism vf = validate_ind_morphism(C, f);
    const IndMorphism vg = validate_ind_morphism(C, g);
    check(same_diagram(vf.source, vg.source), Errc::BadInput,
          "span legs need a common source diagram");
    check(vf.source.index.n() <= bound && vf.target.index.n() <= bound &&
              vg.target.index.n() <= bound,
          Errc::BadInput, "span diagrams must fit within the bound");

    std::optional<IndAmalgamation> result;
    for (int n = 1; n <= bound && !result; ++n) {
        for_each_diagram(C, n, [&](const IndObject& D) {
            const std::vector<IndMorphism> HB = ind_hom(C, vf.target, D);
            if (HB.empty()) return false;
            const std::vector<IndMorphism> HC = ind_hom(C, vg.target, D);
            if (HC.empty()) return false;
            std::vector<IndMorphism> through_g;
            through_g.reserve(HC.size());
            for (const IndMorphism& v : HC) through_g.push_back(ind_compose(C, v, vg));
            for (size_t ui = 0; ui < HB.size(); ++ui) {
                const IndMorphism through_f = ind_compose(C, HB[ui], vf);
                for (size_t vi = 0; vi < HC.size(); ++vi)
                    if (ind_equal(C, through_f, through_g[vi])) {
                        result = IndAmalgamation{D, HB[ui], HC[vi]};
                        return true;
                    }
            }
            return false;
        });
    }
    return result;
}

BaseFailureCertificate extract_base_failure(const FinCategory& C, int f, int g) {
    check(0 <= f && f < C.num_morphisms() && 0 <= g && g < C.num_morphisms(), Errc::BadInput,
          "morphism id out of range");
    check(C.dom(f) == C.dom(g), Errc::BadInput, "a span needs a common domain");
    for (int d = 0; d < C.num_objects(); ++d)
        for (int u : C.hom(C.cod(f), d))
            for (int v : C.hom(C.cod(g), d))
                if (C.compose(u, f) == C.compose(v, g))
                    return BaseFailureCertificate{false, std::make_pair(u, v)};
    return BaseFailureCertificate{true, std::nullopt};
}

std::optional<int> presentation_size(const FinCategory& C, const IndObject& A, int bound) {
    check(bound <= kMaxIndBound, Errc::SizeExceeded,
          "presentation bound above " + std::to_string(kMaxIndBound) +
              "; the candidate diagram space grows too fast");
    const IndObject VA = validate_ind_object(C, A);
    const IndMorphism id_A = ind_identity(C, VA);
    for (int n = 1; n <= bound; ++n) {
        bool found = false;
        for_each_diagram(C, n, [&](const IndObject& D) {
            const std::vector<IndMorphism> to_A = ind_hom(C, D, VA);
            if (to_A.empty()) return false;
            const std::vector<IndMorphism> from_A = ind_hom(C, VA, D);
            const IndMorphism id_D = ind_identity(C, D);
            for (const IndMorphism& u : to_A)
                for (const IndMorphism& v : from_A)
                    if (ind_equal(C, ind_compose(C, u, v), id_A) &&
                        ind_equal(C, ind_compose(C, v, u), id_D)) {
                        found = true;
                        return true;
                    }
            return false;
        });
        if (found) return n;
    }
    return std::nullopt;
}

int count_apex_candidates(const FinCategory& C, int n) {
    check(1 <= n && n <= kMaxIndBound, Errc::SizeExceeded,
          "candidate count requested outside 1.." + std::to_string(kMaxIndBound));
    int count = 0;
    for_each_diagram(C, n, [&](const IndObject&) {
        ++count;
        return false;
    });
    return count;
}

}  // namespace finsite
