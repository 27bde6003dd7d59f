#include "finsite/lattice.hpp"

#include <algorithm>
#include <map>

namespace finsite {

FinPoset validate_poset(const std::vector<std::string>& names,
                        const std::vector<std::pair<int, int>>& leq_pairs) {
    const int n = static_cast<int>(names.size());
    FinPoset P;
    P.names = names;
    P.above.assign(n, Bits(n));
    for (int i = 0; i < n; ++i) P.above[i].set(i);
    for (auto [a, b] : leq_pairs) {
        check(0 <= a && a < n && 0 <= b && b < n, Errc::BadInput, "leq pair out of range");
        P.above[a].set(b);
    }
    // transitive closure (Warshall over rows)
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (P.above[i].get(k)) P.above[i] |= P.above[k];
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            check(!(P.above[a].get(b) && P.above[b].get(a)), Errc::BadInput,
                  "antisymmetry fails between '" + names[a] + "' and '" + names[b] + "'");
    P.below.assign(n, Bits(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (P.above[a].get(b)) P.below[b].set(a);
    return P;
}

namespace {

// Greatest element of `s` if it exists (an element of s above all of s).
int greatest_of(const FinPoset& P, const Bits& s) {
    int best = -1;
    s.for_each([&](int x) {
        if (best == -1 || P.leq(best, x)) best = x;
    });
    if (best == -1) return -1;
    bool ok = true;
    s.for_each([&](int x) {
        if (!P.leq(x, best)) ok = false;
    });
    return ok ? best : -1;
}

int least_of(const FinPoset& P, const Bits& s) {
    int best = -1;
    s.for_each([&](int x) {
        if (best == -1 || P.leq(x, best)) best = x;
    });
    if (best == -1) return -1;
    bool ok = true;
    s.for_each([&](int x) {
        if (!P.leq(best, x)) ok = false;
    });
    return ok ? best : -1;
}

void check_distributive(const FinLattice& L) {
    const int n = L.n();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int xy = L.meet(x, y);
            for (int z = 0; z < n; ++z) {
                if (L.meet(x, L.join(y, z)) != L.join(xy, L.meet(x, z)))
                    fail(Errc::NotDistributive,
                         "witness triple (" + L.name(x) + ", " + L.name(y) + ", " + L.name(z) +
                             ")");
            }
        }
}

}  // namespace

FinLattice validate_lattice(const FinPoset& poset, int cap) {
    const int n = poset.n();
    check(n > 0, Errc::BadInput, "empty carrier");
    check(n <= cap, Errc::SizeExceeded,
          "lattice has " + std::to_string(n) + " elements, cap " + std::to_string(cap));
    FinLattice L;
    L.poset = poset;
    L.meet_table.assign(static_cast<size_t>(n) * n, -1);
    L.join_table.assign(static_cast<size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            Bits lower = poset.below[a] & poset.below[b];
            int m = greatest_of(poset, lower);
            check(m != -1, Errc::NotALattice,
                  "no meet for (" + poset.names[a] + ", " + poset.names[b] + ")");
            Bits upper = poset.above[a] & poset.above[b];
            int j = least_of(poset, upper);
            check(j != -1, Errc::NotALattice,
                  "no join for (" + poset.names[a] + ", " + poset.names[b] + ")");
            L.meet_table[static_cast<size_t>(a) * n + b] = m;
            L.meet_table[static_cast<size_t>(b) * n + a] = m;
            L.join_table[static_cast<size_t>(a) * n + b] = j;
            L.join_table[static_cast<size_t>(b) * n + a] = j;
        }
    L.bottom = least_of(poset, Bits::full(n));
    L.top = greatest_of(poset, Bits::full(n));
    check(L.bottom != -1 && L.top != -1, Errc::NotALattice, "missing bottom or top");
    check_distributive(L);
    return L;
}

FinLattice make_lattice_from_tables(FinPoset poset, std::vector<int> meet, std::vector<int> join,
                                    int distributivity_cap) {
    const int n = poset.n();
    check(n > 0, Errc::BadInput, "empty carrier");
    FinLattice L;
    L.poset = std::move(poset);
    L.meet_table = std::move(meet);
    L.join_table = std::move(join);
    check(L.meet_table.size() == static_cast<size_t>(n) * n &&
              L.join_table.size() == static_cast<size_t>(n) * n,
          Errc::BadInput, "table size mismatch");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int m = L.meet(a, b), j = L.join(a, b);
            // glb: below both, and above every common lower bound (via order rows)
            check(L.leq(m, a) && L.leq(m, b), Errc::SelfCheckFailed, "meet not a lower bound");
            check(L.leq(a, j) && L.leq(b, j), Errc::SelfCheckFailed, "join not an upper bound");
            check(L.meet(a, b) == L.meet(b, a) && L.join(a, b) == L.join(b, a),
                  Errc::SelfCheckFailed, "tables not commutative");
            // order compatibility: a<=b iff meet=a iff join=b
            const bool le = L.leq(a, b);
            check((L.meet(a, b) == a) == le && (L.join(a, b) == b) == le, Errc::SelfCheckFailed,
                  "tables disagree with the order");
        }
    // bound-completeness of glb/lub against the order relation
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int m = L.meet(a, b), j = L.join(a, b);
            Bits lower = L.poset.below[a] & L.poset.below[b];
            if (!lower.subset_of(L.poset.below[m])) fail(Errc::SelfCheckFailed, "meet not greatest");
            Bits upper = L.poset.above[a] & L.poset.above[b];
            if (!upper.subset_of(L.poset.above[j])) fail(Errc::SelfCheckFailed, "join not least");
        }
    L.bottom = least_of(L.poset, Bits::full(n));
    L.top = greatest_of(L.poset, Bits::full(n));
    check(L.bottom != -1 && L.top != -1, Errc::NotALattice, "missing bottom or top");
    if (n <= distributivity_cap) check_distributive(L);
    return L;
}

DownsetLattice downsets_of_poset(const FinPoset& poset, int cap) {
    const int n = poset.n();
    check(n <= 64, Errc::SizeExceeded, "downset loader requires a poset with at most 64 elements");
    // below-masks as machine words
    std::vector<uint64_t> below(n, 0);
    for (int x = 0; x < n; ++x)
        poset.below[x].for_each([&](int y) { below[x] |= uint64_t{1} << y; });
    // enumerate downsets by scanning all subsets when n is small, else grow
    std::vector<uint64_t> sets;
    if (n <= 20) {
        for (uint64_t s = 0;; ++s) {
            bool down = true;
            for (int x = 0; x < n && down; ++x)
                if ((s >> x) & 1)
                    if ((below[x] & ~s) != 0) down = false;
            if (down) {
                sets.push_back(s);
                check(static_cast<int>(sets.size()) <= cap, Errc::SizeExceeded,
                      "downset lattice exceeds cap " + std::to_string(cap));
            }
            if (s == (n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1)) break;
        }
    } else {
        // worklist closure: start from ∅, add one principal downset at a time
        std::vector<uint64_t> work{0};
        std::map<uint64_t, bool> seen{{0, true}};
        while (!work.empty()) {
            uint64_t s = work.back();
            work.pop_back();
            sets.push_back(s);
            check(static_cast<int>(sets.size()) <= cap, Errc::SizeExceeded,
                  "downset lattice exceeds cap " + std::to_string(cap));
            for (int x = 0; x < n; ++x) {
                uint64_t t = s | below[x];
                if (!seen.count(t)) {
                    seen[t] = true;
                    work.push_back(t);
                }
            }
        }
        std::sort(sets.begin(), sets.end());
        // this closure reaches exactly the unions of principal downsets, i.e. all downsets
    }

    std::map<uint64_t, int> id;
    for (size_t i = 0; i < sets.size(); ++i) id[sets[i]] = static_cast<int>(i);
    const int m = static_cast<int>(sets.size());
    FinPoset P;
    P.names.reserve(m);
    for (auto s : sets) {
        std::string nm = "{";
        bool first = true;
        for (int x = 0; x < n; ++x)
            if ((s >> x) & 1) {
                if (!first) nm += ",";
                nm += poset.names[x];
                first = false;
            }
        nm += "}";
        P.names.push_back(nm);
    }
    P.above.assign(m, Bits(m));
    P.below.assign(m, Bits(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if ((sets[i] & ~sets[j]) == 0) {
                P.above[i].set(j);
                P.below[j].set(i);
            }
    DownsetLattice D;
    std::vector<int> meet(static_cast<size_t>(m) * m), join(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            meet[static_cast<size_t>(i) * m + j] = id.at(sets[i] & sets[j]);
            join[static_cast<size_t>(i) * m + j] = id.at(sets[i] | sets[j]);
        }
    D.lattice = make_lattice_from_tables(std::move(P), std::move(meet), std::move(join),
                                         /*distributivity_cap=*/256);
    D.downsets = std::move(sets);
    return D;
}

int heyting_implication(const FinLattice& L, int a, int b) {
    int z = L.bottom;
    for (int c = 0; c < L.n(); ++c)
        if (L.leq(L.meet(c, a), b)) z = L.join(z, c);
    // the fold's result must itself be a candidate (true in distributive lattices)
    check(L.leq(L.meet(z, a), b), Errc::SelfCheckFailed, "implication candidate escaped");
    return z;
}

int pseudo_complement(const FinLattice& L, int a) { return heyting_implication(L, a, L.bottom); }

StoneReport is_stone(const FinLattice& L) {
    const int n = L.n();
    std::vector<int> neg(n);
    for (int x = 0; x < n; ++x) neg[x] = pseudo_complement(L, x);

    bool crit_de_morgan = true;
    std::optional<std::pair<int, int>> xy;
    for (int x = 0; x < n && crit_de_morgan; ++x)
        for (int y = 0; y < n; ++y)
            if (neg[L.meet(x, y)] != L.join(neg[x], neg[y])) {
                crit_de_morgan = false;
                xy = {x, y};
                break;
            }
    bool crit_dense = true;
    std::optional<int> wx;
    for (int x = 0; x < n; ++x)
        if (L.join(neg[x], neg[neg[x]]) != L.top) {
            crit_dense = false;
            wx = x;
            break;
        }
    check(crit_de_morgan == crit_dense, Errc::CriteriaDisagree,
          "¬(x∧y)=¬x∨¬y and ¬x∨¬¬x=1 returned different verdicts");
    StoneReport r;
    r.stone = crit_dense;
    r.witness_x = wx;
    r.witness_xy = xy;
    return r;
}

bool is_boolean(const FinLattice& L) {
    for (int x = 0; x < L.n(); ++x)
        if (L.join(x, pseudo_complement(L, x)) != L.top) return false;
    return true;
}

LeeReport lee_property(const FinLattice& L, int r) {
    check(r >= 1, Errc::BadInput, "lee_property requires r >= 1");
    const int n = L.n();
    std::vector<int> neg(n);
    for (int x = 0; x < n; ++x) neg[x] = pseudo_complement(L, x);

    // ascending tuples of distinct nonzero pairwise-disjoint elements; a tuple
    // with a zero or repeated entry satisfies the implication automatically
    // (its pseudo-complement join picks up ¬0 = 1 / the law is symmetric).
    std::vector<int> tuple;
    LeeReport rep{true, std::nullopt};
    auto dfs = [&](auto&& self, int start, int joined_neg) -> bool {
        if (static_cast<int>(tuple.size()) == r + 1) {
            if (joined_neg != L.top) {
                rep.holds = false;
                rep.witness = tuple;
                return false;
            }
            return true;
        }
        for (int x = start; x < n; ++x) {
            if (x == L.bottom) continue;
            bool disjoint = true;
            for (int y : tuple)
                if (L.meet(x, y) != L.bottom) {
                    disjoint = false;
                    break;
                }
            if (!disjoint) continue;
            tuple.push_back(x);
            if (!self(self, x + 1, L.join(joined_neg, neg[x]))) return false;
            tuple.pop_back();
        }
        return true;
    };
    dfs(dfs, 0, L.bottom);
    if (r == 1) {
        check(rep.holds == is_stone(L).stone, Errc::CriteriaDisagree,
              "lee_property(L,1) disagrees with is_stone");
    }
    return rep;
}

namespace {

Sublattice sublattice_on(const FinLattice& L, const std::vector<int>& carrier,
                         const std::vector<int>& meet_amb, const std::vector<int>& join_amb) {
    const int m = static_cast<int>(carrier.size());
    Sublattice S;
    S.carrier = carrier;
    S.index.assign(L.n(), -1);
    for (int i = 0; i < m; ++i) S.index[carrier[i]] = i;
    FinPoset P;
    P.names.reserve(m);
    for (int x : carrier) P.names.push_back(L.name(x));
    P.above.assign(m, Bits(m));
    P.below.assign(m, Bits(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (L.leq(carrier[i], carrier[j])) {
                P.above[i].set(j);
                P.below[j].set(i);
            }
    std::vector<int> meet(static_cast<size_t>(m) * m), join(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const int ma = meet_amb[static_cast<size_t>(carrier[i]) * L.n() + carrier[j]];
            const int ja = join_amb[static_cast<size_t>(carrier[i]) * L.n() + carrier[j]];
            check(S.index[ma] != -1 && S.index[ja] != -1, Errc::SelfCheckFailed,
                  "sublattice tables escape the carrier");
            meet[static_cast<size_t>(i) * m + j] = S.index[ma];
            join[static_cast<size_t>(i) * m + j] = S.index[ja];
        }
    S.lattice = make_lattice_from_tables(std::move(P), std::move(meet), std::move(join));
    return S;
}

}  // namespace

Sublattice down_algebra(const FinLattice& L, int x) {
    std::vector<int> carrier;
    for (int z = 0; z < L.n(); ++z)
        if (L.leq(z, x)) carrier.push_back(z);
    Sublattice S = sublattice_on(L, carrier, L.meet_table, L.join_table);
    // implication relativizes as (a→b)∧x, double negation as (¬¬a)∧x
    for (int i = 0; i < S.lattice.n(); ++i)
        for (int j = 0; j < S.lattice.n(); ++j) {
            const int a = S.carrier[i], b = S.carrier[j];
            const int expect = L.meet(heyting_implication(L, a, b), x);
            check(S.carrier[heyting_implication(S.lattice, i, j)] == expect, Errc::SelfCheckFailed,
                  "down-algebra implication is not (a→b)∧x");
        }
    for (int i = 0; i < S.lattice.n(); ++i) {
        const int a = S.carrier[i];
        const int nn = pseudo_complement(L, pseudo_complement(L, a));
        const int expect = L.meet(nn, x);
        const int got =
            S.carrier[pseudo_complement(S.lattice, pseudo_complement(S.lattice, i))];
        check(got == expect, Errc::SelfCheckFailed, "down-algebra ¬¬ is not (¬¬a)∧x");
    }
    return S;
}

Sublattice regular_elements(const FinLattice& L) {
    std::vector<int> neg(L.n());
    for (int x = 0; x < L.n(); ++x) neg[x] = pseudo_complement(L, x);
    std::vector<int> carrier;
    for (int x = 0; x < L.n(); ++x)
        if (neg[neg[x]] == x) carrier.push_back(x);
    // meets of regulars are regular; joins are re-closed by ¬¬
    std::vector<int> meet = L.meet_table;
    std::vector<int> join(L.meet_table.size());
    for (int a = 0; a < L.n(); ++a)
        for (int b = 0; b < L.n(); ++b)
            join[static_cast<size_t>(a) * L.n() + b] = neg[neg[L.join(a, b)]];
    Sublattice S = sublattice_on(L, carrier, meet, join);
    check(is_boolean(S.lattice), Errc::SelfCheckFailed,
          "regular elements did not form a Boolean algebra");
    return S;
}

IdealLattice ideals(const FinLattice& L) {
    const int n = L.n();
    auto close = [&](Bits s) {
        // downset + binary-join closure fixpoint
        bool changed = true;
        while (changed) {
            changed = false;
            Bits next = s;
            s.for_each([&](int x) {
                L.poset.below[x].for_each([&](int y) {
                    if (!next.get(y)) {
                        next.set(y);
                        changed = true;
                    }
                });
                s.for_each([&](int y) {
                    const int j = L.join(x, y);
                    if (!next.get(j)) {
                        next.set(j);
                        changed = true;
                    }
                });
            });
            s = next;
        }
        return s;
    };

    std::vector<Bits> found;
    std::vector<Bits> work;
    Bits zero(n);
    zero.set(L.bottom);
    work.push_back(close(zero));
    std::map<Bits, int> seen;
    seen[work[0]] = 0;
    while (!work.empty()) {
        Bits I = work.back();
        work.pop_back();
        found.push_back(I);
        for (int x = 0; x < n; ++x) {
            if (I.get(x)) continue;
            Bits J = I;
            J.set(x);
            J = close(J);
            if (!seen.count(J)) {
                seen[J] = 1;
                work.push_back(J);
            }
        }
    }
    std::sort(found.begin(), found.end());

    IdealLattice R;
    R.ideals = found;
    const int m = static_cast<int>(found.size());
    std::map<Bits, int> id;
    for (int i = 0; i < m; ++i) id[found[i]] = i;

    // every ideal of a finite lattice is principal: it contains the join of
    // its members (binary-join closure), which is its maximum
    R.principal.assign(n, -1);
    std::vector<int> gen(m, -1);
    for (int i = 0; i < m; ++i) {
        int top_member = -1;
        found[i].for_each([&](int x) {
            if (top_member == -1 || L.leq(top_member, x)) top_member = x;
        });
        bool is_max = true;
        found[i].for_each([&](int x) {
            if (!L.leq(x, top_member)) is_max = false;
        });
        check(is_max, Errc::SelfCheckFailed, "ideal without a maximum element");
        gen[i] = top_member;
        // and conversely the ideal is the whole downset of its maximum
        check(found[i] == L.poset.below[top_member], Errc::SelfCheckFailed,
              "ideal differs from the downset of its maximum");
        check(R.principal[top_member] == -1, Errc::SelfCheckFailed, "duplicate principal ideal");
        R.principal[top_member] = i;
    }
    for (int x = 0; x < n; ++x)
        check(R.principal[x] != -1, Errc::SelfCheckFailed, "missing principal ideal");

    FinPoset P;
    P.names.reserve(m);
    for (int i = 0; i < m; ++i) P.names.push_back("idl(" + L.name(gen[i]) + ")");
    P.above.assign(m, Bits(m));
    P.below.assign(m, Bits(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (found[i].subset_of(found[j])) {
                P.above[i].set(j);
                P.below[j].set(i);
            }
    std::vector<int> meet(static_cast<size_t>(m) * m), join(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Bits inter = found[i] & found[j];
            auto it = id.find(inter);
            check(it != id.end(), Errc::SelfCheckFailed, "ideal intersection is not an ideal");
            meet[static_cast<size_t>(i) * m + j] = it->second;
            join[static_cast<size_t>(i) * m + j] = id.at(close(found[i] | found[j]));
        }
    R.lattice = make_lattice_from_tables(std::move(P), std::move(meet), std::move(join));
    return R;
}

RegularFrameReport is_regular_frame(const FinLattice& L) {
    const int n = L.n();
    RegularFrameReport rep;
    rep.regular = true;
    rep.well_inside.assign(n, Bits(n));
    for (int l = 0; l < n; ++l) {
        for (int y = 0; y < n; ++y) {
            if (!L.leq(y, l)) continue;
            for (int t = 0; t < n; ++t)
                if (L.meet(t, y) == L.bottom && L.join(t, l) == L.top) {
                    rep.well_inside[l].set(y);
                    break;
                }
        }
        int j = L.bottom;
        rep.well_inside[l].for_each([&](int y) { j = L.join(j, y); });
        if (j != l && rep.regular) {
            rep.regular = false;
            rep.witness = l;
        }
    }
    return rep;
}

std::vector<int> complemented_elements(const FinLattice& L) {
    std::vector<int> out;
    for (int x = 0; x < L.n(); ++x)
        for (int y = 0; y < L.n(); ++y)
            if (L.meet(x, y) == L.bottom && L.join(x, y) == L.top) {
                out.push_back(x);
                break;
            }
    return out;
}

std::vector<int> compact_elements(const FinLattice& L) {
    IdealLattice I = ideals(L);
    std::vector<int> out;
    for (int x = 0; x < L.n(); ++x) {
        bool compact = true;
        for (size_t i = 0; i < I.ideals.size() && compact; ++i) {
            int sup = L.bottom;
            I.ideals[i].for_each([&](int y) { sup = L.join(sup, y); });
            if (L.leq(x, sup) && !I.ideals[i].get(x)) compact = false;
        }
        if (compact) out.push_back(x);
    }
    check(static_cast<int>(out.size()) == L.n(), Errc::SelfCheckFailed,
          "a finite lattice element failed the compactness check");
    return out;
}

FinPoset chain_poset(int n) {
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        names.push_back("c" + std::to_string(i));
        if (i + 1 < n) pairs.push_back({i, i + 1});
    }
    return validate_poset(names, pairs);
}

FinLattice chain_lattice(int n) { return validate_lattice(chain_poset(n)); }

FinLattice boolean_lattice(int num_atoms) {
    std::vector<std::string> names;
    for (int i = 0; i < num_atoms; ++i) names.push_back("a" + std::to_string(i));
    FinPoset antichain = validate_poset(names, {});
    return downsets_of_poset(antichain).lattice;
}

}  // namespace finsite
