#include "finsite/locale.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "finsite/error.hpp"
#include "finsite/gleason.hpp"

namespace finsite {
namespace {

// Lattice of a subfamily of ideals ordered by inclusion; meets and joins are
// rederived from the order, so the survivors must still form a lattice.
FinLattice lattice_of_ideal_family(const IdealLattice& I, const std::vector<int>& keep) {
    int n = static_cast<int>(keep.size());
    FinPoset P;
    P.names.reserve(static_cast<size_t>(n));
    for (int id : keep) P.names.push_back(I.lattice.name(id));
    P.below.assign(static_cast<size_t>(n), Bits(n));
    P.above.assign(static_cast<size_t>(n), Bits(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (I.ideals[keep[a]].subset_of(I.ideals[keep[b]])) {
                P.below[b].set(a);
                P.above[a].set(b);
            }
    return validate_lattice(P, std::max(n, 1));
}

std::string open_name(const Bits& mask) {
    if (mask.none()) return "∅";
    std::string s = "{";
    bool first = true;
    mask.for_each([&](int p) {
        if (!first) s += ",";
        s += std::to_string(p);
        first = false;
    });
    return s + "}";
}

}  // namespace

FrameSite frame_to_site(const FinLattice& L, int max_column) {
    std::vector<std::vector<bool>> leq(static_cast<size_t>(L.n()),
                                       std::vector<bool>(static_cast<size_t>(L.n())));
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(L.n()));
    for (int a = 0; a < L.n(); ++a) {
        names.push_back(L.name(a));
        for (int b = 0; b < L.n(); ++b) leq[static_cast<size_t>(a)][static_cast<size_t>(b)] = L.leq(a, b);
    }
    FrameSite out{L, validate_category(poset_raw_category(leq, names)), {}};

    out.topology.covering.resize(static_cast<size_t>(L.n()));
    for (int x = 0; x < L.n(); ++x) {
        check(static_cast<int>(out.site.morphisms_into(x).size()) <= max_column,
              Errc::SizeExceeded, "frame column at " + L.name(x) + " has " +
                                      std::to_string(out.site.morphisms_into(x).size()) +
                                      " elements; raise max_column to enumerate its sieves");
        for (const Bits& s : sieves_on(out.site, x)) {
            int join = L.bottom;
            s.for_each([&](int f) { join = L.join(join, out.site.dom(f)); });
            if (join == x) out.topology.covering[static_cast<size_t>(x)].push_back(s);
        }
    }
    validate_topology(out.site, out.topology);
    return out;
}

Sublattice booleanization_frame(const FinLattice& L) { return regular_elements(L); }

FinLattice gleason_locale_direct(const FinLattice& L) {
    Sublattice B = regular_elements(L);
    IdealLattice I = ideals(B.lattice);
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(I.ideals.size()); ++i) {
        const Bits& mask = I.ideals[static_cast<size_t>(i)];
        bool closed = true;
        for (int x = 0; x < B.lattice.n() && closed; ++x) {
            if (mask.get(x)) continue;
            // the maximal family of l with ¬¬(x∧l) in I; a join-1 family of
            // admissible elements exists exactly when this one joins to 1
            int acc = L.bottom;
            for (int l = 0; l < L.n(); ++l) {
                int nn = pseudo_complement(L, pseudo_complement(L, L.meet(B.carrier[x], l)));
                int nb = B.index[nn];
                if (nb >= 0 && mask.get(nb)) acc = L.join(acc, l);
            }
            if (acc == L.top) closed = false;  // x is forced into I but missing
        }
        if (closed) keep.push_back(i);
    }
    return lattice_of_ideal_family(I, keep);
}

FinLattice idl_plus_plus(const FinLattice& L) {
    IdealLattice I = ideals(L);
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(I.ideals.size()); ++i) {
        const Bits& mask = I.ideals[static_cast<size_t>(i)];
        bool closed = true;
        for (int x = 0; x < L.n() && closed; ++x) {
            if (mask.get(x)) continue;
            int acc = L.bottom;
            for (int l = 0; l < L.n(); ++l)
                if (mask.get(L.meet(x, l))) acc = L.join(acc, l);
            if (acc == L.top) closed = false;
        }
        if (closed) keep.push_back(i);
    }
    return lattice_of_ideal_family(I, keep);
}

namespace {

std::vector<int> join_irreducibles(const FinLattice& L) {
    std::vector<int> ji;
    for (int x = 0; x < L.n(); ++x) {
        if (x == L.bottom) continue;
        int acc = L.bottom;
        for (int y = 0; y < L.n(); ++y)
            if (y != x && L.leq(y, x)) acc = L.join(acc, y);
        if (acc != x) ji.push_back(x);
    }
    return ji;
}

// Extends a partial matching of join-irreducibles to a full one and, at the
// leaves, rebuilds the element map x ↦ ⋁{σ(j) : j <= x} and verifies it is a
// bijection preserving meet and join.
bool extend_iso(const FinLattice& A, const FinLattice& B, const std::vector<int>& ja,
                const std::vector<int>& jb, std::vector<int>& img, std::vector<bool>& used,
                size_t k) {
    if (k == ja.size()) {
        std::vector<int> phi(static_cast<size_t>(A.n()));
        std::vector<bool> hit(static_cast<size_t>(B.n()), false);
        for (int x = 0; x < A.n(); ++x) {
            int acc = B.bottom;
            for (size_t i = 0; i < ja.size(); ++i)
                if (A.leq(ja[i], x)) acc = B.join(acc, jb[static_cast<size_t>(img[i])]);
            phi[static_cast<size_t>(x)] = acc;
            if (hit[static_cast<size_t>(acc)]) return false;
            hit[static_cast<size_t>(acc)] = true;
        }
        for (int x = 0; x < A.n(); ++x)
            for (int y = 0; y < A.n(); ++y) {
                if (phi[static_cast<size_t>(A.meet(x, y))] !=
                    B.meet(phi[static_cast<size_t>(x)], phi[static_cast<size_t>(y)]))
                    return false;
                if (phi[static_cast<size_t>(A.join(x, y))] !=
                    B.join(phi[static_cast<size_t>(x)], phi[static_cast<size_t>(y)]))
                    return false;
            }
        return true;
    }
    for (size_t j = 0; j < jb.size(); ++j) {
        if (used[j]) continue;
        bool compatible = true;
        for (size_t i = 0; i < k && compatible; ++i) {
            if (A.leq(ja[i], ja[k]) != B.leq(jb[static_cast<size_t>(img[i])], jb[j]))
                compatible = false;
            if (A.leq(ja[k], ja[i]) != B.leq(jb[j], jb[static_cast<size_t>(img[i])]))
                compatible = false;
        }
        if (!compatible) continue;
        img[k] = static_cast<int>(j);
        used[j] = true;
        if (extend_iso(A, B, ja, jb, img, used, k + 1)) return true;
        used[j] = false;
    }
    return false;
}

}  // namespace

bool lattices_isomorphic(const FinLattice& A, const FinLattice& B) {
    if (A.n() != B.n()) return false;
    std::vector<int> ja = join_irreducibles(A), jb = join_irreducibles(B);
    if (ja.size() != jb.size()) return false;
    std::vector<int> img(ja.size(), -1);
    std::vector<bool> used(jb.size(), false);
    return extend_iso(A, B, ja, jb, img, used, 0);
}

GleasonLocaleCrossCheck cross_check_gleason_report(const FinLattice& L, int max_column) {
    check(L.n() >= 2, Errc::BadInput,
          "the one-element frame presents the inconsistent topos; the cover pipeline needs at "
          "least two elements");
    FrameSite fs = frame_to_site(L, max_column);
    GleasonCover G = gleason_cover(fs.site, fs.topology);
    GleasonLocaleCrossCheck out;
    out.regular = is_regular_frame(L).regular;
    out.isomorphic =
        lattices_isomorphic(G.cover_locale().lattice.fibre[static_cast<size_t>(L.top)],
                            gleason_locale_direct(L));
    out.holds = !out.regular || out.isomorphic;
    return out;
}

bool cross_check_gleason(const FinLattice& L) { return cross_check_gleason_report(L).holds; }

SpacePredicates space_predicates(const FinLattice& L) {
    SpacePredicates out;
    out.extremally_disconnected = is_stone(L).stone;
    out.almost_discrete = is_boolean(L);
    out.regular = is_regular_frame(L).regular;
    out.idl_omega_fixed = ideals(L).lattice.n() == L.n();
    if (out.regular) {
        check(out.almost_discrete, Errc::TheoremViolation,
              "a finite regular frame must be Boolean");
        check(out.idl_omega_fixed == out.almost_discrete, Errc::TheoremViolation,
              "on a regular frame a fixed ideal completion must coincide with Booleanness");
    }
    return out;
}

FinLattice frame_from_opens(int num_points, const std::vector<Bits>& opens) {
    check(num_points >= 0, Errc::BadInput, "negative point count");
    std::vector<Bits> masks;
    masks.reserve(opens.size());
    for (const Bits& o : opens) {
        check(o.size() == num_points, Errc::BadInput,
              "open-set mask sized for a different point count");
        masks.push_back(o);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    check(!masks.empty() && masks.front() == Bits(num_points), Errc::BadInput,
          "the empty set must be open");
    check(masks.back() == Bits::full(num_points), Errc::BadInput, "the total set must be open");
    auto present = [&](const Bits& b) {
        return std::binary_search(masks.begin(), masks.end(), b);
    };
    for (size_t i = 0; i < masks.size(); ++i)
        for (size_t j = i + 1; j < masks.size(); ++j) {
            check(present(masks[i] | masks[j]), Errc::BadInput,
                  "opens are not closed under union: " + open_name(masks[i]) + " ∪ " +
                      open_name(masks[j]) + " is missing");
            check(present(masks[i] & masks[j]), Errc::BadInput,
                  "opens are not closed under intersection: " + open_name(masks[i]) + " ∩ " +
                      open_name(masks[j]) + " is missing");
        }

    int n = static_cast<int>(masks.size());
    FinPoset P;
    P.names.reserve(static_cast<size_t>(n));
    for (const Bits& m : masks) P.names.push_back(open_name(m));
    P.below.assign(static_cast<size_t>(n), Bits(n));
    P.above.assign(static_cast<size_t>(n), Bits(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (masks[static_cast<size_t>(a)].subset_of(masks[static_cast<size_t>(b)])) {
                P.below[b].set(a);
                P.above[a].set(b);
            }
    return validate_lattice(P, n);
}

}  // namespace finsite
