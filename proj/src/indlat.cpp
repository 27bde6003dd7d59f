// Internal lattices/locales, the total category of pairs with its covering
// regimes, and the relative (closed-sieve) and pointwise ideal completions.
#include "finsite/indlat.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>

#include "finsite/error.hpp"

namespace finsite {
namespace {

std::unordered_map<Bits, int, BitsHash> index_of(const std::vector<Bits>& elements) {
    std::unordered_map<Bits, int, BitsHash> ix;
    ix.reserve(elements.size() * 2);
    for (size_t i = 0; i < elements.size(); ++i) ix.emplace(elements[i], static_cast<int>(i));
    return ix;
}

void check_shape(const InternalLattice& L, const char* who) {
    const FinCategory& C = L.base;
    check(static_cast<int>(L.fibre.size()) == C.num_objects(), Errc::BadInput,
          std::string(who) + ": one fibre per object required");
    check(static_cast<int>(L.topology.covering.size()) == C.num_objects(), Errc::BadInput,
          std::string(who) + ": topology covering lists do not match the base");
    check(static_cast<int>(L.transition.size()) == C.num_morphisms(), Errc::BadInput,
          std::string(who) + ": one transition per morphism required");
    for (int f = 0; f < C.num_morphisms(); ++f) {
        int src = L.fibre[C.cod(f)].n();
        int dst = L.fibre[C.dom(f)].n();
        check(static_cast<int>(L.transition[f].size()) == src, Errc::BadInput,
              std::string(who) + ": transition of " + C.morphism_name(f) +
                  " has the wrong source fibre size");
        for (int v : L.transition[f])
            check(v >= 0 && v < dst, Errc::BadInput,
                  std::string(who) + ": transition of " + C.morphism_name(f) +
                      " leaves the target fibre");
    }
    for (int o = 0; o < C.num_objects(); ++o) {
        const std::vector<int>& t = L.transition[C.identity(o)];
        for (int x = 0; x < static_cast<int>(t.size()); ++x)
            check(t[x] == x, Errc::BadInput,
                  std::string(who) + ": identity transition at " + C.object_name(o) +
                      " is not the identity");
    }
    for (int f = 0; f < C.num_morphisms(); ++f)
        for (int g : C.morphisms_from(C.cod(f)))
            for (int x = 0; x < L.fibre[C.cod(g)].n(); ++x)
                check(L.transition[C.compose(g, f)][x] == L.transition[f][L.transition[g][x]],
                      Errc::BadInput,
                      std::string(who) + ": transitions are not functorial at " +
                          C.morphism_name(g) + " after " + C.morphism_name(f));
}

// meets/top and joins/bottom preservation, separately selectable so the
// locale validator can leave meet failures to the adjoint search.
void check_lattice_maps(const InternalLattice& L, bool meets, bool joins, const char* who) {
    const FinCategory& C = L.base;
    for (int f = 0; f < C.num_morphisms(); ++f) {
        const FinLattice& src = L.fibre[C.cod(f)];
        const FinLattice& dst = L.fibre[C.dom(f)];
        const std::vector<int>& t = L.transition[f];
        if (meets)
            check(t[src.top] == dst.top, Errc::BadInput,
                  std::string(who) + ": transition of " + C.morphism_name(f) +
                      " does not preserve top");
        if (joins)
            check(t[src.bottom] == dst.bottom, Errc::BadInput,
                  std::string(who) + ": transition of " + C.morphism_name(f) +
                      " does not preserve bottom");
        for (int a = 0; a < src.n(); ++a)
            for (int b = 0; b <= a; ++b) {
                if (meets)
                    check(t[src.meet(a, b)] == dst.meet(t[a], t[b]), Errc::BadInput,
                          std::string(who) + ": transition of " + C.morphism_name(f) +
                              " does not preserve meets");
                if (joins)
                    check(t[src.join(a, b)] == dst.join(t[a], t[b]), Errc::BadInput,
                          std::string(who) + ": transition of " + C.morphism_name(f) +
                              " does not preserve joins");
            }
    }
}

// The five locale certificates.  With `as_certificate` every failure is a
// CertificateFailure (theorem-backed constructions); otherwise the specific
// error codes fire (user-supplied data under validation).
LocaleCertificates run_locale_certificates(const InternalLattice& L,
                                           const std::vector<std::vector<int>>& adj,
                                           bool as_certificate, bool require_cartesian,
                                           const char* who) {
    const FinCategory& C = L.base;
    auto raise = [&](Errc specific, const std::string& msg) {
        fail(as_certificate ? Errc::CertificateFailure : specific, std::string(who) + ": " + msg);
    };
    check(static_cast<int>(adj.size()) == C.num_morphisms(), Errc::BadInput,
          std::string(who) + ": one adjoint per morphism required");

    LocaleCertificates cert;
    for (int f = 0; f < C.num_morphisms(); ++f) {
        const FinLattice& down = L.fibre[C.dom(f)];
        const FinLattice& up = L.fibre[C.cod(f)];
        check(static_cast<int>(adj[f].size()) == down.n(), Errc::BadInput,
              std::string(who) + ": adjoint of " + C.morphism_name(f) +
                  " has the wrong fibre size");
        for (int x = 0; x < down.n(); ++x)
            for (int y = 0; y < up.n(); ++y)
                if (up.leq(adj[f][x], y) != down.leq(x, L.transition[f][y]))
                    raise(Errc::CertificateFailure,
                          "adjointness fails at " + C.morphism_name(f) + ", x=" + down.name(x) +
                              ", y=" + up.name(y));
    }
    cert.adjointness = true;

    // Beck-Chevalley quantifies over the pullback squares the base has.  The
    // cartesian-base validator demands all of them; constructions that exist
    // over arbitrary bases check the squares that exist.
    std::vector<PullbackSquare> squares;
    if (require_cartesian) {
        CartesianCheck cart = is_cartesian(C);
        if (!cart.cartesian)
            fail(Errc::NotCartesianBase,
                 std::string(who) + ": base has no " +
                     (cart.missing_terminal
                          ? std::string("terminal object")
                          : "pullback for the cospan (" +
                                C.morphism_name(cart.failing_cospan->first) + ", " +
                                C.morphism_name(cart.failing_cospan->second) + ")"));
        squares = std::move(cart.pullbacks);
    } else {
        for (int f = 0; f < C.num_morphisms(); ++f)
            for (int g = 0; g < C.num_morphisms(); ++g)
                if (C.cod(f) == C.cod(g))
                    if (std::optional<PullbackSquare> sq = find_pullback(C, f, g))
                        squares.push_back(*sq);
    }
    for (const PullbackSquare& sq : squares) {
        // f : a -> c, g : b -> c; proj_f : apex -> a, proj_g : apex -> b.
        const FinLattice& fa = L.fibre[C.dom(sq.f)];
        for (int x = 0; x < fa.n(); ++x) {
            int lhs = L.transition[sq.g][adj[sq.f][x]];
            int rhs = adj[sq.proj_g][L.transition[sq.proj_f][x]];
            if (lhs != rhs)
                raise(Errc::BeckChevalleyFails,
                      "Beck-Chevalley fails on the square of (" + C.morphism_name(sq.f) + ", " +
                          C.morphism_name(sq.g) + ") at x=" + fa.name(x));
        }
    }
    cert.beck_chevalley = true;

    for (int f = 0; f < C.num_morphisms(); ++f) {
        const FinLattice& down = L.fibre[C.dom(f)];
        const FinLattice& up = L.fibre[C.cod(f)];
        for (int lp = 0; lp < up.n(); ++lp)
            for (int l = 0; l < down.n(); ++l)
                if (adj[f][down.meet(L.transition[f][lp], l)] != up.meet(adj[f][l], lp))
                    raise(Errc::FrobeniusFails, "Frobenius fails at " + C.morphism_name(f) +
                                                    ", l'=" + up.name(lp) + ", l=" + down.name(l));
    }
    cert.frobenius = true;

    SheafReport sh = is_sheaf(C, L.topology, L.as_presheaf());
    if (!sh.ok)
        raise(Errc::NotASheaf,
              "underlying presheaf is not a sheaf (matching family over " +
                  C.object_name(sh.failing->object) + " with " +
                  std::to_string(sh.amalgamation_count) + " amalgamations)");
    cert.sheaf = true;

    for (int f = 0; f < C.num_morphisms(); ++f) {
        const FinLattice& up = L.fibre[C.cod(f)];
        const FinLattice& down = L.fibre[C.dom(f)];
        for (int x = 0; x < up.n(); ++x)
            if (L.transition[f][pseudo_complement(up, x)] !=
                pseudo_complement(down, L.transition[f][x]))
                raise(Errc::CertificateFailure,
                      "transition of " + C.morphism_name(f) +
                          " does not preserve the pseudo-complement of " + up.name(x));
    }
    cert.pseudo_complements = true;
    return cert;
}

void check_certified(const InternalLocale& L, const char* who) {
    const LocaleCertificates& c = L.certificates;
    check(c.adjointness && c.beck_chevalley && c.frobenius && c.sheaf && c.pseudo_complements,
          Errc::NotALocale, std::string(who) + ": input locale is not fully certified");
    check(static_cast<int>(L.adjoint.size()) == L.lattice.base.num_morphisms(), Errc::NotALocale,
          std::string(who) + ": input locale has no adjoint table");
}

CoversFn covers_fn(const RelativeSite& T) {
    return [&T](int t, const Bits& members) { return T.covers(t, members); };
}

// Existence of every cartesian lift (f, L(f)(x)) — the witness family for
// the cover-lifting property of the projection.
void check_cartesian_lifts(const RelativeSite& rs) {
    const FinCategory& B = rs.content.base;
    for (int f = 0; f < B.num_morphisms(); ++f)
        for (int x = 0; x < rs.content.fibre[B.cod(f)].n(); ++x)
            check(rs.morphism_of[f][x][rs.content.transition[f][x]] >= 0, Errc::SelfCheckFailed,
                  "relative site: missing cartesian lift of " + B.morphism_name(f));
}

}  // namespace

FinPresheaf InternalLattice::as_presheaf() const {
    FinPresheaf P;
    P.size.reserve(fibre.size());
    for (const FinLattice& L : fibre) P.size.push_back(L.n());
    P.restriction = transition;
    return P;
}

InternalLattice validate_internal_lattice(InternalLattice L) {
    check_shape(L, "internal lattice");
    check_lattice_maps(L, true, true, "internal lattice");
    return L;
}

InternalLattice as_internal_lattice(const FinCategory& C, const GrothTopology& J,
                                    const InternalFrame& F) {
    InternalLattice L;
    L.base = C;
    L.topology = J;
    L.fibre = F.fibre;
    L.transition = F.transition;
    return validate_internal_lattice(std::move(L));
}

InternalLattice constant_internal_lattice(const FinCategory& C, const GrothTopology& J,
                                          const FinLattice& fibre) {
    InternalLattice L;
    L.base = C;
    L.topology = J;
    L.fibre.assign(static_cast<size_t>(C.num_objects()), fibre);
    std::vector<int> id(static_cast<size_t>(fibre.n()));
    for (int x = 0; x < fibre.n(); ++x) id[x] = x;
    L.transition.assign(static_cast<size_t>(C.num_morphisms()), id);
    return validate_internal_lattice(std::move(L));
}

InternalLattice complemented_part(const FinCategory& C, const GrothTopology& J,
                                  const InternalFrame& F) {
    InternalLattice L;
    L.base = C;
    L.topology = J;
    L.fibre.resize(F.fibre.size());
    std::vector<std::vector<int>> carrier(F.fibre.size());  // sub id -> ambient id
    std::vector<std::vector<int>> index(F.fibre.size());    // ambient id -> sub id or -1
    for (size_t c = 0; c < F.fibre.size(); ++c) {
        const FinLattice& amb = F.fibre[c];
        carrier[c] = complemented_elements(amb);
        index[c].assign(static_cast<size_t>(amb.n()), -1);
        int n = static_cast<int>(carrier[c].size());
        for (int i = 0; i < n; ++i) index[c][carrier[c][i]] = i;
        FinPoset poset;
        poset.names.reserve(static_cast<size_t>(n));
        for (int a : carrier[c]) poset.names.push_back(amb.name(a));
        poset.below.assign(static_cast<size_t>(n), Bits(n));
        poset.above.assign(static_cast<size_t>(n), Bits(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (amb.leq(carrier[c][a], carrier[c][b])) {
                    poset.below[b].set(a);
                    poset.above[a].set(b);
                }
        std::vector<int> meet(static_cast<size_t>(n) * n), join(static_cast<size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                int m = index[c][amb.meet(carrier[c][a], carrier[c][b])];
                int j = index[c][amb.join(carrier[c][a], carrier[c][b])];
                check(m >= 0 && j >= 0, Errc::SelfCheckFailed,
                      "complemented elements are not closed under meet/join");
                meet[static_cast<size_t>(a) * n + b] = m;
                join[static_cast<size_t>(a) * n + b] = j;
            }
        L.fibre[c] = make_lattice_from_tables(std::move(poset), std::move(meet), std::move(join));
    }
    L.transition.resize(F.transition.size());
    for (int f = 0; f < C.num_morphisms(); ++f) {
        int c = C.cod(f);
        int d = C.dom(f);
        L.transition[f].resize(carrier[c].size());
        for (size_t i = 0; i < carrier[c].size(); ++i) {
            int v = index[d][F.transition[f][carrier[c][i]]];
            check(v >= 0, Errc::TransitionEscapesFibre,
                  "complemented part: transition of " + C.morphism_name(f) +
                      " leaves the complemented elements");
            L.transition[f][i] = v;
        }
    }
    // The complemented elements realize the sheaf coproduct of two terminals.
    TwoPointSheaf tp = coproduct_of_terminals(C, J);
    for (int c = 0; c < C.num_objects(); ++c)
        check(tp.sheaf.size[c] == L.fibre[c].n(), Errc::SelfCheckFailed,
              "complemented part of the classifier disagrees with the sheaf 1+1 at " +
                  C.object_name(c));
    return validate_internal_lattice(std::move(L));
}

namespace {

InternalLocale locale_from_lattice(InternalLattice L, bool require_cartesian) {
    check_shape(L, "internal locale");
    // Joins and bottom are genuine preconditions; meets and top follow from
    // adjointness, so a meet-breaking transition is reported by the adjoint
    // search instead.
    check_lattice_maps(L, false, true, "internal locale");

    InternalLocale out;
    const FinCategory& C = L.base;
    out.adjoint.resize(static_cast<size_t>(C.num_morphisms()));
    for (int f = 0; f < C.num_morphisms(); ++f) {
        const FinLattice& down = L.fibre[C.dom(f)];
        const FinLattice& up = L.fibre[C.cod(f)];
        out.adjoint[f].resize(static_cast<size_t>(down.n()));
        for (int x = 0; x < down.n(); ++x) {
            int m = -1;  // meet of {y : x <= transition(f)(y)}; the minimum iff it stays inside
            for (int y = 0; y < up.n(); ++y)
                if (down.leq(x, L.transition[f][y])) m = m < 0 ? y : up.meet(m, y);
            check(m >= 0 && down.leq(x, L.transition[f][m]), Errc::NoLeftAdjoint,
                  "no least y with x <= transition(y) at " + C.morphism_name(f) +
                      ", x=" + down.name(x));
            out.adjoint[f][x] = m;
        }
    }
    out.certificates =
        run_locale_certificates(L, out.adjoint, false, require_cartesian, "internal locale");
    out.lattice = std::move(L);
    return out;
}

}  // namespace

InternalLocale validate_internal_locale(InternalLattice L) {
    return locale_from_lattice(std::move(L), true);
}

InternalLocale as_internal_locale(InternalLattice L) {
    return locale_from_lattice(std::move(L), false);
}

const char* topology_kind_name(TopologyKind k) {
    switch (k) {
        case TopologyKind::none: return "none";
        case TopologyKind::giraud: return "giraud";
        case TopologyKind::coherent: return "coherent";
        case TopologyKind::existential: return "existential";
        case TopologyKind::finitary_existential: return "finitary_existential";
    }
    return "?";
}

bool RelativeSite::covers(int t, const Bits& members) const {
    check(kind != TopologyKind::none, Errc::BadInput, "relative site carries no covering regime");
    const FinCategory& B = content.base;
    int c = object_base[t];
    int x = object_element[t];
    switch (kind) {
        case TopologyKind::giraud: {
            Bits T(B.num_morphisms());
            for (int m : total.morphisms_into(t))
                if (members.get(m)) {
                    int f = morphism_base[m];
                    if (object_element[total.dom(m)] == content.transition[f][x]) T.set(f);
                }
            return content.topology.covers(c, T);
        }
        case TopologyKind::coherent: {
            // {f : the f-component of S joins to transition(f)(x)} must cover.
            std::vector<int> acc(static_cast<size_t>(B.num_morphisms()), -1);
            for (int m : total.morphisms_into(t))
                if (members.get(m)) {
                    int f = morphism_base[m];
                    int y = object_element[total.dom(m)];
                    acc[f] = acc[f] < 0 ? y : content.fibre[B.dom(f)].join(acc[f], y);
                }
            Bits T(B.num_morphisms());
            for (int f : B.morphisms_into(c)) {
                const FinLattice& fd = content.fibre[B.dom(f)];
                int j = acc[f] < 0 ? fd.bottom : acc[f];
                if (j == content.transition[f][x]) T.set(f);
            }
            return content.topology.covers(c, T);
        }
        case TopologyKind::existential:
        case TopologyKind::finitary_existential: {
            const FinLattice& fc = content.fibre[c];
            int j = fc.bottom;
            for (int m : total.morphisms_into(t))
                if (members.get(m)) {
                    // members have y <= transition(f)(x), so the join stays <= x
                    j = fc.join(j, adjoint[morphism_base[m]][object_element[total.dom(m)]]);
                    if (j == x) return true;
                }
            return j == x;
        }
        default: break;
    }
    fail(Errc::BadInput, "relative site: unknown covering regime");
}

GrothTopology RelativeSite::materialize(int cap) const {
    GrothTopology out;
    out.covering.resize(static_cast<size_t>(total.num_objects()));
    for (int t = 0; t < total.num_objects(); ++t)
        for (const Bits& s : sieves_on(total, t, cap))
            if (covers(t, s)) out.covering[t].push_back(s);
    return out;
}

int RelativeSite::total_object(int c, int x) const {
    check(c >= 0 && c < static_cast<int>(object_of.size()), Errc::BadInput,
          "relative site: no such base object");
    check(x >= 0 && x < static_cast<int>(object_of[c].size()), Errc::BadInput,
          "relative site: no such fibre element");
    return object_of[c][x];
}

int RelativeSite::total_morphism(int f, int x, int y) const {
    check(f >= 0 && f < static_cast<int>(morphism_of.size()), Errc::BadInput,
          "relative site: no such base morphism");
    check(x >= 0 && x < static_cast<int>(morphism_of[f].size()), Errc::BadInput,
          "relative site: no such target element");
    check(y >= 0 && y < static_cast<int>(morphism_of[f][x].size()), Errc::BadInput,
          "relative site: no such source element");
    return morphism_of[f][x][y];
}

std::pair<int, int> RelativeSite::vertical_cartesian_factorization(int m) const {
    check(m >= 0 && m < total.num_morphisms(), Errc::BadInput, "relative site: no such morphism");
    int f = morphism_base[m];
    int x = object_element[total.cod(m)];
    int y = object_element[total.dom(m)];
    int d = object_base[total.dom(m)];
    int tx = content.transition[f][x];
    int cart = morphism_of[f][x][tx];
    int vert = morphism_of[content.base.identity(d)][tx][y];
    check(cart >= 0 && vert >= 0 && total.compose(cart, vert) == m, Errc::SelfCheckFailed,
          "vertical/cartesian factorization failed for " + total.morphism_name(m));
    return {vert, cart};
}

RelativeSite grothendieck_construction(const InternalLattice& L0) {
    RelativeSite rs;
    rs.content = validate_internal_lattice(L0);
    const InternalLattice& L = rs.content;
    const FinCategory& B = L.base;

    RawCategory raw;
    rs.object_of.resize(static_cast<size_t>(B.num_objects()));
    for (int c = 0; c < B.num_objects(); ++c)
        for (int x = 0; x < L.fibre[c].n(); ++x) {
            rs.object_of[c].push_back(static_cast<int>(raw.objects.size()));
            rs.object_base.push_back(c);
            rs.object_element.push_back(x);
            raw.objects.push_back("(" + B.object_name(c) + "," + L.fibre[c].name(x) + ")");
        }
    rs.morphism_of.resize(static_cast<size_t>(B.num_morphisms()));
    for (int f = 0; f < B.num_morphisms(); ++f) {
        int d = B.dom(f);
        int c = B.cod(f);
        rs.morphism_of[f].assign(static_cast<size_t>(L.fibre[c].n()),
                                 std::vector<int>(static_cast<size_t>(L.fibre[d].n()), -1));
        for (int x = 0; x < L.fibre[c].n(); ++x) {
            int tx = L.transition[f][x];
            for (int y = 0; y < L.fibre[d].n(); ++y) {
                if (!L.fibre[d].leq(y, tx)) continue;
                rs.morphism_of[f][x][y] = static_cast<int>(raw.morphisms.size());
                rs.morphism_base.push_back(f);
                raw.morphisms.push_back({B.morphism_name(f) + "[" + L.fibre[d].name(y) + "|" +
                                             L.fibre[c].name(x) + "]",
                                         rs.object_of[d][y], rs.object_of[c][x]});
            }
        }
    }
    raw.identities.resize(raw.objects.size());
    for (size_t t = 0; t < raw.objects.size(); ++t) {
        int c = rs.object_base[t];
        int x = rs.object_element[t];
        raw.identities[t] = rs.morphism_of[B.identity(c)][x][x];
    }
    std::vector<std::vector<int>> by_dom(raw.objects.size());
    for (size_t m = 0; m < raw.morphisms.size(); ++m)
        by_dom[raw.morphisms[m].dom].push_back(static_cast<int>(m));
    for (size_t m1 = 0; m1 < raw.morphisms.size(); ++m1)
        for (int m2 : by_dom[raw.morphisms[m1].cod]) {
            int fb = B.compose(rs.morphism_base[m2], rs.morphism_base[static_cast<int>(m1)]);
            int comp = rs.morphism_of[fb][rs.object_element[raw.morphisms[m2].cod]]
                                     [rs.object_element[raw.morphisms[m1].dom]];
            check(comp >= 0, Errc::SelfCheckFailed,
                  "grothendieck construction: missing composite over " + B.morphism_name(fb));
            raw.composition.push_back({m2, static_cast<int>(m1), comp});
        }
    rs.total = validate_category(raw);
    return rs;
}

RelativeSite giraud_topology(const InternalLattice& L) {
    RelativeSite rs = grothendieck_construction(L);
    rs.kind = TopologyKind::giraud;
    check_cartesian_lifts(rs);
    return rs;
}

RelativeSite coherent_coverage(const InternalLattice& A) {
    RelativeSite rs = grothendieck_construction(A);
    rs.kind = TopologyKind::coherent;
    check_cartesian_lifts(rs);
    return rs;
}

namespace {

RelativeSite existential_site(const InternalLocale& L, TopologyKind kind, const char* who) {
    check_certified(L, who);
    RelativeSite rs = grothendieck_construction(L.lattice);
    rs.kind = kind;
    rs.adjoint = L.adjoint;
    check_cartesian_lifts(rs);
    // ⋁_{f in S} ∃_f(1) = 1 for every base covering sieve: the reason this
    // regime contains the cartesian-lift regime.
    const FinCategory& B = rs.content.base;
    for (int c = 0; c < B.num_objects(); ++c) {
        const FinLattice& fc = rs.content.fibre[c];
        for (const Bits& S : rs.content.topology.covering[c]) {
            int j = fc.bottom;
            S.for_each([&](int f) {
                j = fc.join(j, rs.adjoint[f][rs.content.fibre[B.dom(f)].top]);
            });
            check(j == fc.top, Errc::SelfCheckFailed,
                  std::string(who) + ": a covering sieve on " + B.object_name(c) +
                      " has ⋁∃(1) ≠ 1");
        }
    }
    return rs;
}

}  // namespace

RelativeSite existential_topology(const InternalLocale& L) {
    return existential_site(L, TopologyKind::existential, "existential topology");
}

RelativeSite finitary_existential_topology(const InternalLocale& L) {
    // Finitary base check: every covering sieve is generated by its own
    // finite member list — vacuous for finite data, kept as the real loop.
    const FinCategory& B = L.lattice.base;
    for (int c = 0; c < B.num_objects(); ++c)
        for (const Bits& S : L.lattice.topology.covering[c]) {
            int generators = 0;
            S.for_each([&](int) { ++generators; });
            check(generators <= B.num_morphisms(), Errc::NotFinitary,
                  "base covering sieve with no finite generating family");
        }
    return existential_site(L, TopologyKind::finitary_existential,
                            "finitary existential topology");
}

FibredIdeals fibred_ideal_completion(const InternalLattice& A0, const RelativeSite& T, int cap) {
    check(T.kind != TopologyKind::none, Errc::BadInput,
          "ideal completion needs a covering regime");
    InternalLattice A = validate_internal_lattice(A0);
    const FinCategory& B = A.base;
    check(B.num_objects() == T.content.base.num_objects() &&
              B.num_morphisms() == T.content.base.num_morphisms() &&
              A.transition == T.content.transition,
          Errc::BadInput, "covering regime was built over different fibred data");
    for (int c = 0; c < B.num_objects(); ++c)
        check(A.fibre[c].n() == T.content.fibre[c].n(), Errc::BadInput,
              "covering regime was built over different fibres");

    CoversFn covers = covers_fn(T);
    FibredIdeals out;
    int nc = B.num_objects();
    int nm = B.num_morphisms();
    out.top_object.resize(static_cast<size_t>(nc));
    out.carrier.resize(static_cast<size_t>(nc));
    out.locale.lattice.base = B;
    out.locale.lattice.topology = A.topology;
    out.locale.lattice.fibre.resize(static_cast<size_t>(nc));
    std::vector<std::unordered_map<Bits, int, BitsHash>> ix(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        out.top_object[c] = T.total_object(c, A.fibre[c].top);
        OmegaFibre fib = omega_fibre(T.total, covers, out.top_object[c], cap);
        out.carrier[c] = std::move(fib.elements);
        out.locale.lattice.fibre[c] = std::move(fib.lattice);
        ix[c] = index_of(out.carrier[c]);
    }
    out.locale.lattice.transition.resize(static_cast<size_t>(nm));
    out.locale.adjoint.resize(static_cast<size_t>(nm));
    for (int f = 0; f < nm; ++f) {
        int d = B.dom(f);
        int c = B.cod(f);
        int lift = T.total_morphism(f, A.fibre[c].top, A.fibre[d].top);
        int n = static_cast<int>(out.carrier[c].size());
        out.locale.lattice.transition[f].resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            Sieve R{out.top_object[c], out.carrier[c][i]};
            auto it = ix[d].find(pullback_sieve(T.total, R, lift).members);
            check(it != ix[d].end(), Errc::CertificateFailure,
                  "ideal completion: transition of " + B.morphism_name(f) + " left the fibre");
            out.locale.lattice.transition[f][i] = it->second;
        }
        int nd = static_cast<int>(out.carrier[d].size());
        out.locale.adjoint[f].resize(static_cast<size_t>(nd));
        for (int i = 0; i < nd; ++i) {
            std::vector<int> family;
            out.carrier[d][i].for_each(
                [&](int h) { family.push_back(T.total.compose(lift, h)); });
            Sieve gen = generated_sieve(T.total, out.top_object[c], family);
            auto it = ix[c].find(closure(T.total, covers, gen).members);
            check(it != ix[c].end(), Errc::CertificateFailure,
                  "ideal completion: adjoint of " + B.morphism_name(f) + " left the fibre");
            out.locale.adjoint[f][i] = it->second;
        }
    }
    check_shape(out.locale.lattice, "ideal completion");
    check_lattice_maps(out.locale.lattice, true, true, "ideal completion");
    out.locale.certificates = run_locale_certificates(out.locale.lattice, out.locale.adjoint,
                                                      true, false, "ideal completion");
    return out;
}

InternalLocale pointwise_ideal_completion(const InternalLocale& L) {
    check_certified(L, "pointwise ideal completion");
    const FinCategory& B = L.lattice.base;
    for (int c = 0; c < B.num_objects(); ++c)
        for (const Bits& S : L.lattice.topology.covering[c]) {
            int generators = 0;
            S.for_each([&](int) { ++generators; });
            check(generators <= B.num_morphisms(), Errc::NotFinitary,
                  "base covering sieve with no finite generating family");
        }

    InternalLocale out;
    out.lattice.base = B;
    out.lattice.topology = L.lattice.topology;
    int nc = B.num_objects();
    int nm = B.num_morphisms();
    out.lattice.fibre.resize(static_cast<size_t>(nc));
    std::vector<IdealLattice> ideal(static_cast<size_t>(nc));
    std::vector<std::unordered_map<Bits, int, BitsHash>> ix(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        ideal[c] = ideals(L.lattice.fibre[c]);
        out.lattice.fibre[c] = ideal[c].lattice;
        ix[c] = index_of(ideal[c].ideals);
    }
    // image of an ideal under an element map, as the downset it generates
    auto map_ideal = [&](const std::vector<int>& elt_map, const FinLattice& target,
                         const Bits& members) {
        Bits outm(target.n());
        members.for_each([&](int y) { outm |= target.poset.below[elt_map[y]]; });
        return outm;
    };
    out.lattice.transition.resize(static_cast<size_t>(nm));
    out.adjoint.resize(static_cast<size_t>(nm));
    for (int f = 0; f < nm; ++f) {
        int d = B.dom(f);
        int c = B.cod(f);
        int n = static_cast<int>(ideal[c].ideals.size());
        out.lattice.transition[f].resize(static_cast<size_t>(n));
        for (int u = 0; u < n; ++u) {
            auto it = ix[d].find(
                map_ideal(L.lattice.transition[f], L.lattice.fibre[d], ideal[c].ideals[u]));
            check(it != ix[d].end(), Errc::SelfCheckFailed,
                  "pointwise ideal completion: image downset is not an ideal");
            out.lattice.transition[f][u] = it->second;
        }
        int nd = static_cast<int>(ideal[d].ideals.size());
        out.adjoint[f].resize(static_cast<size_t>(nd));
        for (int u = 0; u < nd; ++u) {
            auto it =
                ix[c].find(map_ideal(L.adjoint[f], L.lattice.fibre[c], ideal[d].ideals[u]));
            check(it != ix[c].end(), Errc::SelfCheckFailed,
                  "pointwise ideal completion: adjoint image downset is not an ideal");
            out.adjoint[f][u] = it->second;
        }
    }
    // The principal-ideal map is a natural lattice isomorphism.
    for (int c = 0; c < nc; ++c) {
        const FinLattice& fib = L.lattice.fibre[c];
        for (int a = 0; a < fib.n(); ++a)
            for (int b = 0; b < fib.n(); ++b)
                check(out.lattice.fibre[c].leq(ideal[c].principal[a], ideal[c].principal[b]) ==
                          fib.leq(a, b),
                      Errc::CertificateFailure,
                      "principal-ideal map is not an order embedding at " + B.object_name(c));
    }
    for (int f = 0; f < nm; ++f) {
        int d = B.dom(f);
        int c = B.cod(f);
        for (int y = 0; y < L.lattice.fibre[c].n(); ++y)
            check(out.lattice.transition[f][ideal[c].principal[y]] ==
                      ideal[d].principal[L.lattice.transition[f][y]],
                  Errc::CertificateFailure,
                  "principal-ideal map is not natural at " + B.morphism_name(f));
    }
    check_shape(out.lattice, "pointwise ideal completion");
    check_lattice_maps(out.lattice, true, true, "pointwise ideal completion");
    out.certificates = run_locale_certificates(out.lattice, out.adjoint, true, false,
                                               "pointwise ideal completion");
    return out;
}

LocIdealEquivalence check_loc_ideal_equivalence(const InternalLocale& L, int cap) {
    LocIdealEquivalence out;
    RelativeSite T = finitary_existential_topology(L);
    FibredIdeals fib = fibred_ideal_completion(L.lattice, T, cap);
    InternalLocale pw = pointwise_ideal_completion(L);
    CoversFn covers = covers_fn(T);
    const FinCategory& B = L.lattice.base;
    int nc = B.num_objects();
    out.iso.resize(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c) {
        IdealLattice il = ideals(L.lattice.fibre[c]);
        int n = static_cast<int>(il.ideals.size());
        if (n != static_cast<int>(fib.carrier[c].size())) return out;
        std::vector<bool> hit(static_cast<size_t>(n), false);
        out.iso[c].resize(static_cast<size_t>(n), -1);
        int idc = B.identity(c);
        int top = L.lattice.fibre[c].top;
        for (int u = 0; u < n; ++u) {
            std::vector<int> verticals;
            il.ideals[u].for_each(
                [&](int y) { verticals.push_back(T.total_morphism(idc, top, y)); });
            Sieve gen = generated_sieve(T.total, fib.top_object[c], verticals);
            Bits R = closure(T.total, covers, gen).members;
            auto pos = std::lower_bound(fib.carrier[c].begin(), fib.carrier[c].end(), R);
            if (pos == fib.carrier[c].end() || !(*pos == R)) return out;
            int id = static_cast<int>(pos - fib.carrier[c].begin());
            if (hit[id]) return out;
            hit[id] = true;
            out.iso[c][u] = id;
        }
        // order isomorphism (lattice structure follows from the order)
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (pw.lattice.fibre[c].leq(u, v) !=
                    fib.locale.lattice.fibre[c].leq(out.iso[c][u], out.iso[c][v]))
                    return out;
    }
    for (int f = 0; f < B.num_morphisms(); ++f) {
        int d = B.dom(f);
        int c = B.cod(f);
        for (int u = 0; u < static_cast<int>(out.iso[c].size()); ++u)
            if (out.iso[d][pw.lattice.transition[f][u]] !=
                fib.locale.lattice.transition[f][out.iso[c][u]])
                return out;
        for (int u = 0; u < static_cast<int>(out.iso[d].size()); ++u)
            if (out.iso[c][pw.adjoint[f][u]] != fib.locale.adjoint[f][out.iso[d][u]])
                return out;
    }
    out.equivalent = true;
    return out;
}

bool is_nontrivial(const InternalLattice& A) {
    for (int c = 0; c < A.base.num_objects(); ++c) {
        if (A.topology.covers(c, Bits(A.base.num_morphisms()))) continue;
        if (A.fibre[c].bottom == A.fibre[c].top) return false;
    }
    return true;
}

SurjectivityVerdict surjectivity_verdict(const InternalLattice& A, const RelativeSite& T,
                                         int cap) {
    SurjectivityVerdict out;
    out.surjective = is_nontrivial(A);
    if (!out.surjective) return out;
    try {
        for (int c = 0; c < A.base.num_objects(); ++c) {
            int t1 = T.total_object(c, A.fibre[c].top);
            for (const Bits& S : sieves_on(T.total, t1, cap)) {
                if (!T.covers(t1, S)) continue;
                Bits proj(A.base.num_morphisms());
                S.for_each([&](int m) { proj.set(T.morphism_base[m]); });
                check(A.topology.covers(c, proj), Errc::SelfCheckFailed,
                      "a covering sieve of (" + A.base.object_name(c) +
                          ", 1) projects to a non-covering sieve");
            }
        }
        out.cover_projection_checked = true;
    } catch (const Error& e) {
        if (e.kind() != Errc::SizeExceeded) throw;  // too many sieves: skip the certificate
    }
    return out;
}

RelativeDeMorganReport relative_de_morgan(const InternalLocale& L, int cap) {
    RelativeDeMorganReport out{true, true};
    RelativeSite T = existential_topology(L);
    CoversFn covers = covers_fn(T);
    const FinCategory& B = L.lattice.base;
    for (int c = 0; c < B.num_objects(); ++c) {
        const FinLattice& fib = L.lattice.fibre[c];
        if (!is_stone(fib).stone) out.verdict = false;
        int t1 = T.total_object(c, fib.top);
        OmegaFibre closed = omega_fibre(T.total, covers, t1, cap);
        if (static_cast<int>(closed.elements.size()) != fib.n()) {
            out.principal_mechanism = false;
            continue;
        }
        // every closed sieve is {(f,y) : y <= transition(f)(x)} for a unique x,
        // and x <-> that sieve is an order isomorphism onto the fibre
        std::vector<int> at(static_cast<size_t>(fib.n()), -1);
        for (int x = 0; x < fib.n() && out.principal_mechanism; ++x) {
            Bits P(T.total.num_morphisms());
            for (int m : T.total.morphisms_into(t1)) {
                int f = T.morphism_base[m];
                int y = T.object_element[T.total.dom(m)];
                if (T.content.fibre[B.dom(f)].leq(y, T.content.transition[f][x])) P.set(m);
            }
            auto pos = std::lower_bound(closed.elements.begin(), closed.elements.end(), P);
            if (pos == closed.elements.end() || !(*pos == P)) {
                out.principal_mechanism = false;
                break;
            }
            at[x] = static_cast<int>(pos - closed.elements.begin());
            for (int w = 0; w < x; ++w)
                if ((at[w] == at[x]) ||
                    (fib.leq(w, x) != closed.elements[at[w]].subset_of(closed.elements[at[x]])) ||
                    (fib.leq(x, w) != closed.elements[at[x]].subset_of(closed.elements[at[w]]))) {
                    out.principal_mechanism = false;
                    break;
                }
        }
    }
    return out;
}

}  // namespace finsite
