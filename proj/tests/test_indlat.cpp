// Internal lattices and locales, the total category of pairs, its covering
// regimes, and the relative/pointwise ideal completions.

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>

#include "finsite/classifier.hpp"
#include "finsite/indlat.hpp"
#include "finsite/lattice.hpp"
#include "finsite/site.hpp"
#include "fixtures.hpp"
#include "helpers.hpp"

using namespace finsite;
using namespace finsite::testutil;

namespace {

std::optional<Errc> errc_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

Bits base_bits(const FinCategory& C, const std::vector<int>& morphisms) {
    Bits b(C.num_morphisms());
    for (int m : morphisms) b.set(m);
    return b;
}

// Element id of a classifier fibre given the sieve it stands for.
int elt_id(const InternalFrame& F, int c, const Bits& sieve) {
    for (size_t i = 0; i < F.carrier[c].size(); ++i)
        if (F.carrier[c][i] == sieve) return static_cast<int>(i);
    REQUIRE_MESSAGE(false, "no such classifier element");
    return -1;
}

bool same_topology(const GrothTopology& a, const GrothTopology& b) {
    return a.covering == b.covering;
}

// Base = the 2-chain poset site (trivial topology), fibre 2-chain at object 0
// and `upper` at object 1, with the given transition along 0 <= 1.
InternalLattice over_two_chain(const FinLattice& upper, const std::vector<int>& t) {
    InternalLattice L;
    FinLattice two = chain_lattice(2);
    L.base = frame_site(two);
    L.topology = trivial_topology(L.base);
    L.fibre = {two, upper};
    L.transition.resize(L.base.num_morphisms());
    L.transition[L.base.identity(0)] = {0, 1};
    std::vector<int> idu(upper.n());
    for (int x = 0; x < upper.n(); ++x) idu[x] = x;
    L.transition[L.base.identity(1)] = idu;
    L.transition[leq_morphism(L.base, 0, 1)] = t;
    return L;
}

// Indiscrete two-object category: one morphism in every hom-set.
FinCategory indiscrete2() {
    RawCategory raw;
    raw.objects = {"0", "1"};
    raw.morphisms = {{"id0", 0, 0}, {"id1", 1, 1}, {"a", 0, 1}, {"b", 1, 0}};
    raw.identities = {0, 1};
    raw.composition = {{3, 2, 0}, {2, 3, 1}};
    return validate_category(raw);
}

FinCategory discrete2() {
    RawCategory raw;
    raw.objects = {"0", "1"};
    raw.morphisms = {{"id0", 0, 0}, {"id1", 1, 1}};
    raw.identities = {0, 1};
    return validate_category(raw);
}

InternalLattice omega_lattice(const FinCategory& C, const GrothTopology& J) {
    return as_internal_lattice(C, J, omega(C, J));
}

InternalLattice omega_nn_lattice(const FinCategory& C, const GrothTopology& J) {
    return as_internal_lattice(C, J, omega_notnot(C, J));
}

std::vector<FinCategory> cartesian_slice(int max_obj, int max_mor, size_t keep) {
    std::vector<FinCategory> out;
    for (const FinCategory& C : corpus_slice(max_obj, max_mor, 100000)) {
        if (!is_cartesian(C).cartesian) continue;
        out.push_back(C);
        if (out.size() == keep) break;
    }
    return out;
}

// All covering sieves of the tagged regime, per object, by direct filter.
GrothTopology materialized(const RelativeSite& T) { return T.materialize(); }

}  // namespace

TEST_CASE("internal lattice validation accepts the constant lattice and rejects bad shapes") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    InternalLattice L = constant_internal_lattice(C, J, chain_lattice(2));
    CHECK(L.fibre.size() == 3);
    for (const FinLattice& f : L.fibre) CHECK(f.n() == 2);
    FinPresheaf P = L.as_presheaf();
    CHECK(P.size == std::vector<int>{2, 2, 2});
    CHECK(P.apply(3, 1) == 1);
    validate_presheaf(C, P);

    InternalLattice bad = L;
    bad.fibre.pop_back();
    CHECK(errc_of([&] { validate_internal_lattice(bad); }) == Errc::BadInput);
    bad = L;
    bad.transition[3] = {0};
    CHECK(errc_of([&] { validate_internal_lattice(bad); }) == Errc::BadInput);
    bad = L;
    bad.transition[C.identity(0)] = {1, 1};  // identity must act as identity
    CHECK(errc_of([&] { validate_internal_lattice(bad); }) == Errc::BadInput);
}

TEST_CASE("internal lattice validation rejects non-functorial and non-lattice transitions") {
    // composite transition disagrees with the composite of transitions
    FinLattice three = chain_lattice(3);
    FinCategory C = frame_site(three);
    InternalLattice L = constant_internal_lattice(C, trivial_topology(C), chain_lattice(2));
    L.transition[leq_morphism(C, 0, 2)] = {0, 0};
    Error caught{Errc::BadInput, ""};
    try {
        validate_internal_lattice(L);
        FAIL("expected BadInput");
    } catch (const Error& e) {
        caught = e;
    }
    CHECK(caught.kind() == Errc::BadInput);
    CHECK(std::string(caught.what()).find("functorial") != std::string::npos);

    // meet-breaking transition: a,b |-> 1 in the square, their meet to 0
    InternalLattice meets = over_two_chain(boolean_lattice(2), {0, 1, 1, 1});
    CHECK(errc_of([&] { validate_internal_lattice(meets); }) == Errc::BadInput);
    // join-breaking transition
    InternalLattice joins = over_two_chain(boolean_lattice(2), {0, 0, 0, 1});
    CHECK(errc_of([&] { validate_internal_lattice(joins); }) == Errc::BadInput);
}

TEST_CASE("internal locale validation: error taxonomy in order of detection") {
    // join preservation is an invariant failure
    CHECK(errc_of([&] {
              validate_internal_locale(over_two_chain(boolean_lattice(2), {0, 0, 0, 1}));
          }) == Errc::BadInput);
    // bottom preservation likewise
    CHECK(errc_of([&] {
              validate_internal_locale(over_two_chain(fixtures::fork(), {1, 1, 1, 1, 1}));
          }) == Errc::BadInput);
    // meet-breaking transitions preserve joins yet admit no least preimage
    CHECK(errc_of([&] {
              validate_internal_locale(over_two_chain(boolean_lattice(2), {0, 1, 1, 1}));
          }) == Errc::NoLeftAdjoint);
    // no terminal object
    FinCategory D2 = discrete2();
    CHECK(errc_of([&] {
              validate_internal_locale(
                  constant_internal_lattice(D2, trivial_topology(D2), chain_lattice(2)));
          }) == Errc::NotCartesianBase);
    // terminal object but a missing pullback
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    CHECK(errc_of([&] { validate_internal_locale(omega_lattice(C, J)); }) ==
          Errc::NotCartesianBase);
    // the same data is accepted when quantifying over existing squares only
    InternalLocale loc = as_internal_locale(omega_lattice(C, J));
    CHECK(loc.certificates.adjointness);
    CHECK(loc.certificates.beck_chevalley);
    CHECK(loc.certificates.frobenius);
    CHECK(loc.certificates.sheaf);
    CHECK(loc.certificates.pseudo_complements);
}

TEST_CASE("internal locale validation: classifier locales over cartesian sites") {
    std::vector<std::pair<FinCategory, GrothTopology>> sites;
    for (const FinLattice& L :
         {fixtures::fork(), boolean_lattice(2), chain_lattice(3)}) {
        FinCategory C = frame_site(L);
        sites.emplace_back(C, direct_joins_topology(C, L));
    }
    sites.emplace_back(fixtures::t1(), trivial_topology(fixtures::t1()));
    FinCategory I2 = indiscrete2();
    sites.emplace_back(I2, trivial_topology(I2));
    for (const auto& [C, J] : sites) {
        InternalLocale om = validate_internal_locale(omega_lattice(C, J));
        InternalLocale nn = validate_internal_locale(omega_nn_lattice(C, J));
        for (const InternalLocale* loc : {&om, &nn}) {
            CHECK(loc->certificates.adjointness);
            CHECK(loc->certificates.beck_chevalley);
            CHECK(loc->certificates.frobenius);
            CHECK(loc->certificates.sheaf);
            CHECK(loc->certificates.pseudo_complements);
            // the identity's adjoint is the identity
            for (int c = 0; c < C.num_objects(); ++c)
                for (int x = 0; x < loc->lattice.fibre[c].n(); ++x)
                    CHECK(loc->adjoint[C.identity(c)][x] == x);
        }
    }
}

TEST_CASE("grothendieck construction: frozen shapes and the projection section") {
    // constant 2-chain on the one-object site: two objects, one non-identity
    FinCategory T1 = fixtures::t1();
    RelativeSite tiny = grothendieck_construction(
        constant_internal_lattice(T1, trivial_topology(T1), chain_lattice(2)));
    CHECK(tiny.total.num_objects() == 2);
    CHECK(tiny.total.num_morphisms() == 3);
    int non_id = 0;
    for (int m = 0; m < 3; ++m)
        if (!tiny.total.is_identity(m)) ++non_id;
    CHECK(non_id == 1);

    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    RelativeSite Gnn = grothendieck_construction(omega_nn_lattice(C, J));
    CHECK(Gnn.total.num_objects() == 8);  // fibres 2+2+4
    CHECK(Gnn.total.num_morphisms() == 27);
    RelativeSite Gom = grothendieck_construction(omega_lattice(C, J));
    CHECK(Gom.total.num_objects() == 9);  // fibres 2+2+5
    CHECK(Gom.total.num_morphisms() == 36);

    // projection composed with the top section is the identity on the base
    for (int c = 0; c < C.num_objects(); ++c) {
        int t = Gom.total_object(c, Gom.content.fibre[c].top);
        CHECK(Gom.object_base[t] == c);
        CHECK(Gom.object_element[t] == Gom.content.fibre[c].top);
    }
    for (int f = 0; f < C.num_morphisms(); ++f) {
        int top_c = Gom.content.fibre[C.cod(f)].top;
        int lift = Gom.total_morphism(f, top_c, Gom.content.transition[f][top_c]);
        REQUIRE(lift >= 0);
        CHECK(Gom.morphism_base[lift] == f);
    }
    // morphism (d,y) -> (c,x) over f exists exactly when y <= transition(f)(x)
    for (int f = 0; f < C.num_morphisms(); ++f) {
        const FinLattice& fc = Gom.content.fibre[C.cod(f)];
        const FinLattice& fd = Gom.content.fibre[C.dom(f)];
        for (int x = 0; x < fc.n(); ++x)
            for (int y = 0; y < fd.n(); ++y)
                CHECK((Gom.morphism_of[f][x][y] >= 0) ==
                      fd.leq(y, Gom.content.transition[f][x]));
    }
    // accessor bounds
    CHECK(errc_of([&] { Gom.total_object(5, 0); }) == Errc::BadInput);
    CHECK(errc_of([&] { Gom.total_morphism(3, 99, 0); }) == Errc::BadInput);
    // no covering regime yet
    CHECK(errc_of([&] { Gom.covers(0, Bits(Gom.total.num_morphisms())); }) == Errc::BadInput);
}

TEST_CASE("grothendieck construction: vertical/cartesian factorization and cartesian arrows") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    RelativeSite G = grothendieck_construction(omega_nn_lattice(C, J));
    const FinCategory& T = G.total;
    for (int m = 0; m < T.num_morphisms(); ++m) {
        auto [vert, cart] = G.vertical_cartesian_factorization(m);
        CHECK(T.compose(cart, vert) == m);
        int f = G.morphism_base[m];
        CHECK(G.morphism_base[cart] == f);
        CHECK(G.morphism_base[vert] == C.identity(C.dom(f)));
        CHECK(G.object_element[T.dom(cart)] ==
              G.content.transition[f][G.object_element[T.cod(m)]]);
    }
    // a morphism is cartesian (unique lifts for every factorization through
    // its base) exactly when its source element is transition(f)(target element)
    for (int m = 0; m < T.num_morphisms(); ++m) {
        int f = G.morphism_base[m];
        int x = G.object_element[T.cod(m)];
        bool structurally = G.object_element[T.dom(m)] == G.content.transition[f][x];
        bool cartesian = true;
        for (int mp = 0; mp < T.num_morphisms() && cartesian; ++mp) {
            if (T.cod(mp) != T.cod(m)) continue;
            for (int h = 0; h < C.num_morphisms() && cartesian; ++h) {
                if (C.dom(h) != C.dom(G.morphism_base[mp])) continue;
                if (C.cod(h) != C.dom(f)) continue;
                if (C.compose(f, h) != G.morphism_base[mp]) continue;
                int lifts = 0;
                for (int u = 0; u < T.num_morphisms(); ++u)
                    if (G.morphism_base[u] == h && T.dom(u) == T.dom(mp) &&
                        T.cod(u) == T.dom(m) && T.compose(m, u) == mp)
                        ++lifts;
                if (lifts != 1) cartesian = false;
            }
        }
        CHECK(cartesian == structurally);
    }
}

TEST_CASE("giraud topology: trivial base gives the trivial topology; covers saturate the lifts") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    RelativeSite T = giraud_topology(omega_nn_lattice(C, J));
    CHECK(T.kind == TopologyKind::giraud);
    GrothTopology mat = materialized(T);
    CHECK(same_topology(mat, trivial_topology(T.total)));
    validate_topology(T.total, mat);

    // joins topology on the square lattice: giraud = saturation of the
    // cartesian-lift families of the base covers
    FinLattice B2 = boolean_lattice(2);
    FinCategory S = frame_site(B2);
    GrothTopology JJ = direct_joins_topology(S, B2);
    RelativeSite TG = giraud_topology(omega_lattice(S, JJ));
    std::vector<Sieve> fams;
    for (int c = 0; c < S.num_objects(); ++c)
        for (const Bits& sv : JJ.covering[c])
            for (int x = 0; x < TG.content.fibre[c].n(); ++x) {
                std::vector<int> lifts;
                sv.for_each([&](int f) {
                    lifts.push_back(TG.total_morphism(f, x, TG.content.transition[f][x]));
                });
                fams.push_back(generated_sieve(TG.total, TG.total_object(c, x), lifts));
            }
    CHECK(same_topology(materialized(TG), saturate(TG.total, fams)));
}

TEST_CASE("giraud topology: cover lifting holds across a small corpus") {
    std::mt19937 rng(7);
    int sites = 0;
    for (const FinCategory& C : corpus_slice(2, 5, 24)) {
        GrothTopology J = sites % 2 ? random_topology(C, rng) : trivial_topology(C);
        RelativeSite T = giraud_topology(omega_lattice(C, J));
        for (int c = 0; c < C.num_objects(); ++c)
            for (const Bits& sv : J.covering[c])
                for (int x = 0; x < T.content.fibre[c].n(); ++x) {
                    std::vector<int> lifts;
                    sv.for_each([&](int f) {
                        lifts.push_back(T.total_morphism(f, x, T.content.transition[f][x]));
                    });
                    CHECK(T.covers(generated_sieve(T.total, T.total_object(c, x), lifts)));
                }
        ++sites;
    }
    CHECK(sites == 24);
}

TEST_CASE("coherent coverage: join covers on the two-point lattice over one object") {
    FinCategory T1 = fixtures::t1();
    GrothTopology J = trivial_topology(T1);
    InternalLattice two = complemented_part(T1, J, omega(T1, J));
    CHECK(two.fibre[0].n() == 2);
    RelativeSite K = coherent_coverage(two);
    int t1 = K.total_object(0, 1);
    int t0 = K.total_object(0, 0);
    // (•,1) is covered by nothing but the maximal sieve
    for (const Bits& s : sieves_on(K.total, t1))
        CHECK(K.covers(t1, s) == (s == maximal_sieve(K.total, t1).members));
    // the empty sieve covers (•,0)
    CHECK(K.covers(t0, Bits(K.total.num_morphisms())));
    validate_topology(K.total, materialized(K));
}

TEST_CASE("coherent coverage: empty covers exactly the bottoms; a binary join cover") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    InternalFrame nnF = omega_notnot(C, J);
    InternalLattice nn = as_internal_lattice(C, J, nnF);
    RelativeSite K = coherent_coverage(nn);
    for (int t = 0; t < K.total.num_objects(); ++t)
        CHECK(K.covers(t, Bits(K.total.num_morphisms())) ==
              (K.object_element[t] == K.content.fibre[K.object_base[t]].bottom));
    // {(z,{f}) -> (z,max), (z,{g}) -> (z,max)} covers: {f} v {g} = max in Omega_nn(z)
    int zf = elt_id(nnF, 2, base_bits(C, {3}));
    int zg = elt_id(nnF, 2, base_bits(C, {4}));
    int ztop = nn.fibre[2].top;
    int tmax = K.total_object(2, ztop);
    Sieve pair = generated_sieve(
        K.total, tmax,
        {K.total_morphism(C.identity(2), ztop, zf), K.total_morphism(C.identity(2), ztop, zg)});
    CHECK(K.covers(pair));
    CHECK(nn.fibre[2].join(zf, zg) == ztop);
}

TEST_CASE("coherent coverage equals the saturation of join families plus cartesian lifts") {
    // On a trivial base topology the giraud part is redundant: K is the
    // saturation of the join families alone.
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    for (InternalLattice A : {omega_nn_lattice(C, J), omega_lattice(C, J)}) {
        RelativeSite K = coherent_coverage(A);
        std::vector<Sieve> joins;
        for (int c = 0; c < C.num_objects(); ++c) {
            const FinLattice& fib = A.fibre[c];
            joins.push_back(empty_sieve(K.total, K.total_object(c, fib.bottom)));
            for (int x = 0; x < fib.n(); ++x)
                for (int u = 0; u < fib.n(); ++u)
                    for (int v = u + 1; v < fib.n(); ++v)
                        if (fib.join(u, v) == x && fib.leq(u, x) && fib.leq(v, x))
                            joins.push_back(generated_sieve(
                                K.total, K.total_object(c, x),
                                {K.total_morphism(C.identity(c), x, u),
                                 K.total_morphism(C.identity(c), x, v)}));
        }
        GrothTopology mat = materialized(K);
        CHECK(same_topology(mat, saturate(K.total, joins)));
        validate_topology(K.total, mat);
    }
    // With a nontrivial base topology the cartesian-lift families join in.
    FinLattice B2 = boolean_lattice(2);
    FinCategory S = frame_site(B2);
    GrothTopology JJ = direct_joins_topology(S, B2);
    InternalLattice A = omega_lattice(S, JJ);
    RelativeSite K = coherent_coverage(A);
    std::vector<Sieve> fams;
    for (int c = 0; c < S.num_objects(); ++c) {
        const FinLattice& fib = A.fibre[c];
        fams.push_back(empty_sieve(K.total, K.total_object(c, fib.bottom)));
        for (int x = 0; x < fib.n(); ++x) {
            for (int u = 0; u < fib.n(); ++u)
                for (int v = u + 1; v < fib.n(); ++v)
                    if (fib.join(u, v) == x && fib.leq(u, x) && fib.leq(v, x))
                        fams.push_back(
                            generated_sieve(K.total, K.total_object(c, x),
                                            {K.total_morphism(S.identity(c), x, u),
                                             K.total_morphism(S.identity(c), x, v)}));
            for (const Bits& sv : JJ.covering[c]) {
                std::vector<int> lifts;
                sv.for_each([&](int f) {
                    lifts.push_back(K.total_morphism(f, x, A.transition[f][x]));
                });
                fams.push_back(generated_sieve(K.total, K.total_object(c, x), lifts));
            }
        }
    }
    CHECK(same_topology(materialized(K), saturate(K.total, fams)));
}

TEST_CASE("existential topology: definition, examples, and the classifier join gap") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    InternalFrame omF = omega(C, J);
    InternalLocale om = as_internal_locale(as_internal_lattice(C, J, omF));
    RelativeSite T = existential_topology(om);
    CHECK(T.kind == TopologyKind::existential);

    // (c,0) is covered by the empty sieve; the identity family covers anything
    for (int t = 0; t < T.total.num_objects(); ++t) {
        int c = T.object_base[t];
        if (T.object_element[t] == T.content.fibre[c].bottom)
            CHECK(T.covers(t, Bits(T.total.num_morphisms())));
        CHECK(T.covers(maximal_sieve(T.total, t)));
    }

    // the {f},{g} vertical pair does NOT cover (z,max) in the full classifier:
    // {f} v {g} is {f,g}, not the maximal sieve
    int zf = elt_id(omF, 2, base_bits(C, {3}));
    int zg = elt_id(omF, 2, base_bits(C, {4}));
    int ztop = om.lattice.fibre[2].top;
    int tmax = T.total_object(2, ztop);
    Sieve pair = generated_sieve(
        T.total, tmax,
        {T.total_morphism(C.identity(2), ztop, zf), T.total_morphism(C.identity(2), ztop, zg)});
    CHECK_FALSE(T.covers(pair));
    CHECK(om.lattice.fibre[2].join(zf, zg) == elt_id(omF, 2, base_bits(C, {3, 4})));

    // ...but it covers in the double-negation classifier, where the join is max
    InternalFrame nnF = omega_notnot(C, J);
    InternalLocale nn = as_internal_locale(as_internal_lattice(C, J, nnF));
    RelativeSite Tn = existential_topology(nn);
    int nzf = elt_id(nnF, 2, base_bits(C, {3}));
    int nzg = elt_id(nnF, 2, base_bits(C, {4}));
    int ntop = nn.lattice.fibre[2].top;
    int ntmax = Tn.total_object(2, ntop);
    Sieve npair = generated_sieve(Tn.total, ntmax,
                                  {Tn.total_morphism(C.identity(2), ntop, nzf),
                                   Tn.total_morphism(C.identity(2), ntop, nzg)});
    CHECK(Tn.covers(npair));

    // missing certificates are rejected
    InternalLocale uncertified;
    uncertified.lattice = om.lattice;
    uncertified.adjoint = om.adjoint;
    CHECK(errc_of([&] { existential_topology(uncertified); }) == Errc::NotALocale);

    validate_topology(T.total, materialized(T));
    validate_topology(Tn.total, materialized(Tn));
}

TEST_CASE("finitary existential topology: equality with the existential one, type-1 covers") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    InternalFrame omF = omega(C, J);
    InternalLocale om = as_internal_locale(as_internal_lattice(C, J, omF));
    RelativeSite Te = existential_topology(om);
    RelativeSite Tf = finitary_existential_topology(om);
    CHECK(Tf.kind == TopologyKind::finitary_existential);
    CHECK(same_topology(materialized(Te), materialized(Tf)));

    // exists_f(1) = the sieve generated by f; the type-1 family covers it
    int zf = elt_id(omF, 2, base_bits(C, {3}));
    CHECK(om.adjoint[3][om.lattice.fibre[0].top] == zf);
    int target = Tf.total_object(2, zf);
    Sieve type1 = generated_sieve(Tf.total, target,
                                  {Tf.total_morphism(3, zf, om.lattice.fibre[0].top)});
    CHECK(Tf.covers(type1));

    // giraud containment, objectwise
    RelativeSite Tg = giraud_topology(om.lattice);
    GrothTopology gm = materialized(Tg);
    GrothTopology fm = materialized(Tf);
    for (int t = 0; t < Tf.total.num_objects(); ++t)
        for (const Bits& s : gm.covering[t])
            CHECK(std::binary_search(fm.covering[t].begin(), fm.covering[t].end(), s));
}

TEST_CASE("finitary existential topology is the saturation of type-1 and type-2 covers") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    std::vector<InternalLocale> locs;
    locs.push_back(as_internal_locale(omega_lattice(C, J)));
    locs.push_back(as_internal_locale(omega_nn_lattice(C, J)));
    FinLattice B2 = boolean_lattice(2);
    FinCategory S = frame_site(B2);
    locs.push_back(validate_internal_locale(omega_lattice(S, direct_joins_topology(S, B2))));
    for (const InternalLocale& L : locs) {
        RelativeSite T = finitary_existential_topology(L);
        const FinCategory& B = L.lattice.base;
        std::vector<Sieve> fams;
        for (int f = 0; f < B.num_morphisms(); ++f)
            for (int x = 0; x < L.lattice.fibre[B.dom(f)].n(); ++x) {
                int ex = L.adjoint[f][x];
                fams.push_back(generated_sieve(T.total, T.total_object(B.cod(f), ex),
                                               {T.total_morphism(f, ex, x)}));
            }
        for (int c = 0; c < B.num_objects(); ++c) {
            const FinLattice& fib = L.lattice.fibre[c];
            fams.push_back(empty_sieve(T.total, T.total_object(c, fib.bottom)));
            for (int x = 0; x < fib.n(); ++x)
                for (int u = 0; u < fib.n(); ++u)
                    for (int v = u + 1; v < fib.n(); ++v)
                        if (fib.join(u, v) == x && fib.leq(u, x) && fib.leq(v, x))
                            fams.push_back(generated_sieve(
                                T.total, T.total_object(c, x),
                                {T.total_morphism(B.identity(c), x, u),
                                 T.total_morphism(B.identity(c), x, v)}));
        }
        CHECK(same_topology(materialized(T), saturate(T.total, fams)));
    }
}

TEST_CASE("existential adjoint joins: covering families join to the top") {
    FinLattice B2 = boolean_lattice(2);
    FinCategory S = frame_site(B2);
    GrothTopology JJ = direct_joins_topology(S, B2);
    InternalLocale L = validate_internal_locale(omega_lattice(S, JJ));
    for (int c = 0; c < S.num_objects(); ++c) {
        const FinLattice& fib = L.lattice.fibre[c];
        for (const Bits& sv : JJ.covering[c]) {
            int j = fib.bottom;
            sv.for_each(
                [&](int f) { j = fib.join(j, L.adjoint[f][L.lattice.fibre[S.dom(f)].top]); });
            CHECK(j == fib.top);
        }
    }
}

TEST_CASE("beck-chevalley is insensitive to the choice of pullback square") {
    // In the indiscrete two-object category every cospan has two pullback
    // apexes; the certificate uses the canonical one, so verify the equation
    // on the other by hand.
    FinCategory I2 = indiscrete2();
    GrothTopology J = trivial_topology(I2);
    InternalLocale L = validate_internal_locale(omega_lattice(I2, J));
    CartesianCheck cart = is_cartesian(I2);
    REQUIRE(cart.cartesian);
    auto hom1 = [&](int a, int b) {
        REQUIRE(I2.hom(a, b).size() == 1);
        return I2.hom(a, b)[0];
    };
    for (int f = 0; f < I2.num_morphisms(); ++f)
        for (int g = 0; g < I2.num_morphisms(); ++g) {
            if (I2.cod(f) != I2.cod(g)) continue;
            const PullbackSquare& sq = cart.pullback(f, g);
            int other = 1 - sq.apex;
            int pf = hom1(other, I2.dom(f));
            int pg = hom1(other, I2.dom(g));
            REQUIRE(I2.compose(f, pf) == I2.compose(g, pg));
            for (int x = 0; x < L.lattice.fibre[I2.dom(f)].n(); ++x)
                CHECK(L.lattice.transition[g][L.adjoint[f][x]] ==
                      L.adjoint[pg][L.lattice.transition[pf][x]]);
        }
}

TEST_CASE("fibred ideal completion: frozen fibres and a brute-force cross-check") {
    FinCategory T1 = fixtures::t1();
    GrothTopology Jt = trivial_topology(T1);
    InternalLattice two = constant_internal_lattice(T1, Jt, chain_lattice(2));
    FibredIdeals tiny = fibred_ideal_completion(two, coherent_coverage(two));
    CHECK(tiny.carrier[0].size() == 2);
    CHECK(tiny.locale.lattice.fibre[0].n() == 2);

    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    InternalLattice nn = omega_nn_lattice(C, J);
    RelativeSite K = coherent_coverage(nn);
    FibredIdeals idl = fibred_ideal_completion(nn, K);
    CHECK(idl.carrier[0].size() == 2);
    CHECK(idl.carrier[1].size() == 2);
    CHECK(idl.carrier[2].size() == 9);
    CHECK(idl.locale.certificates.sheaf);
    CHECK(idl.locale.certificates.beck_chevalley);

    // brute force: closed sieves on each top object, counted independently
    for (int c = 0; c < 3; ++c) {
        int t1 = idl.top_object[c];
        int closed = 0;
        for (const Bits& s : sieves_on(K.total, t1)) {
            Sieve S{t1, s};
            if (closure(K.total, [&K](int t, const Bits& m) { return K.covers(t, m); }, S)
                    .members == s)
                ++closed;
        }
        CHECK(closed == static_cast<int>(idl.carrier[c].size()));
    }
    // meet is intersection; join dominates union
    const FinLattice& fz = idl.locale.lattice.fibre[2];
    for (int a = 0; a < fz.n(); ++a)
        for (int b = 0; b < fz.n(); ++b) {
            CHECK(idl.carrier[2][fz.meet(a, b)] == (idl.carrier[2][a] & idl.carrier[2][b]));
            Bits uni = idl.carrier[2][a] | idl.carrier[2][b];
            CHECK(uni.subset_of(idl.carrier[2][fz.join(a, b)]));
        }

    // the enumeration cap is honoured
    CHECK(errc_of([&] { fibred_ideal_completion(nn, K, 4); }) == Errc::SizeExceeded);
    // a regime is required
    RelativeSite bare = grothendieck_construction(nn);
    CHECK(errc_of([&] { fibred_ideal_completion(nn, bare); }) == Errc::BadInput);
    // mismatched fibred data is rejected
    CHECK(errc_of([&] { fibred_ideal_completion(omega_lattice(C, J), K); }) == Errc::BadInput);
}

TEST_CASE("fibred ideal completion of the two-point lattice is the subobject classifier") {
    // Idl(1+1, K) = Omega, pointwise, via R |-> {f : (f, top) in R}
    std::vector<std::pair<FinCategory, GrothTopology>> sites;
    FinCategory T1 = fixtures::t1();
    sites.emplace_back(T1, trivial_topology(T1));
    FinCategory C = fixtures::cospan();
    sites.emplace_back(C, trivial_topology(C));
    FinCategory S = fixtures::span();
    sites.emplace_back(S, trivial_topology(S));
    FinLattice B2 = boolean_lattice(2);
    FinCategory FB2 = frame_site(B2);
    sites.emplace_back(FB2, direct_joins_topology(FB2, B2));
    FinLattice fork = fixtures::fork();
    FinCategory Ffork = frame_site(fork);
    sites.emplace_back(Ffork, direct_joins_topology(Ffork, fork));

    for (const auto& [B, J] : sites) {
        InternalLattice two = complemented_part(B, J, omega(B, J));
        RelativeSite K = coherent_coverage(two);
        FibredIdeals idl = fibred_ideal_completion(two, K);
        InternalFrame om = omega(B, J);
        for (int c = 0; c < B.num_objects(); ++c) {
            REQUIRE(idl.carrier[c].size() == om.carrier[c].size());
            // rho: closed sieve R on (c,1) |-> base sieve {f : (f,top) in R}
            std::vector<Bits> image;
            for (const Bits& R : idl.carrier[c]) {
                Bits rho(B.num_morphisms());
                R.for_each([&](int m) {
                    int f = K.morphism_base[m];
                    if (K.object_element[K.total.dom(m)] == two.fibre[B.dom(f)].top)
                        rho.set(f);
                });
                image.push_back(rho);
            }
            // bijective onto Omega(c), and monotone both ways
            std::vector<Bits> sorted = image;
            std::sort(sorted.begin(), sorted.end());
            CHECK(sorted == om.carrier[c]);
            for (size_t i = 0; i < image.size(); ++i)
                for (size_t j = 0; j < image.size(); ++j)
                    CHECK(idl.carrier[c][i].subset_of(idl.carrier[c][j]) ==
                          image[i].subset_of(image[j]));
        }
    }
}

TEST_CASE("pointwise ideal completion: principal ideals realize the original locale") {
    FinLattice B2 = boolean_lattice(2);
    FinCategory S = frame_site(B2);
    GrothTopology JJ = direct_joins_topology(S, B2);
    InternalLocale L = validate_internal_locale(omega_lattice(S, JJ));
    InternalLocale I = pointwise_ideal_completion(L);
    for (int c = 0; c < S.num_objects(); ++c)
        CHECK(I.lattice.fibre[c].n() == L.lattice.fibre[c].n());
    CHECK(I.certificates.adjointness);
    CHECK(I.certificates.sheaf);

    // I(f) sends the principal ideal of a to the principal ideal of L(f)(a)
    for (int f = 0; f < S.num_morphisms(); ++f) {
        IdealLattice up = ideals(L.lattice.fibre[S.cod(f)]);
        IdealLattice down = ideals(L.lattice.fibre[S.dom(f)]);
        for (int a = 0; a < L.lattice.fibre[S.cod(f)].n(); ++a)
            CHECK(I.lattice.transition[f][up.principal[a]] ==
                  down.principal[L.lattice.transition[f][a]]);
    }
    // uncertified input is rejected
    InternalLocale uncertified;
    uncertified.lattice = L.lattice;
    uncertified.adjoint = L.adjoint;
    CHECK(errc_of([&] { pointwise_ideal_completion(uncertified); }) == Errc::NotALocale);
}

TEST_CASE("relative and pointwise ideal completions agree") {
    FinCategory C = fixtures::cospan();
    GrothTopology Jc = trivial_topology(C);
    CHECK(check_loc_ideal_equivalence(as_internal_locale(omega_lattice(C, Jc))).equivalent);
    FinCategory S = fixtures::span();
    GrothTopology Js = trivial_topology(S);
    CHECK(check_loc_ideal_equivalence(as_internal_locale(omega_nn_lattice(S, Js))).equivalent);
    FinCategory T1 = fixtures::t1();
    CHECK(check_loc_ideal_equivalence(
              validate_internal_locale(constant_internal_lattice(
                  T1, trivial_topology(T1), chain_lattice(2))))
              .equivalent);
    FinLattice B2 = boolean_lattice(2);
    FinCategory FB2 = frame_site(B2);
    GrothTopology JJ = direct_joins_topology(FB2, B2);
    LocIdealEquivalence eq =
        check_loc_ideal_equivalence(validate_internal_locale(omega_lattice(FB2, JJ)));
    CHECK(eq.equivalent);
    // the recorded isomorphism has one entry per ideal, all distinct
    for (const std::vector<int>& column : eq.iso) {
        std::vector<int> seen = column;
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

TEST_CASE("loc-ideal equivalence across a small corpus of classifier locales") {
    std::vector<InternalLocale> locs;
    for (const FinCategory& C : cartesian_slice(2, 5, 6)) {
        GrothTopology J = trivial_topology(C);
        locs.push_back(validate_internal_locale(omega_lattice(C, J)));
        locs.push_back(validate_internal_locale(omega_nn_lattice(C, J)));
    }
    FinLattice fork = fixtures::fork();
    FinCategory Ff = frame_site(fork);
    GrothTopology Jf = direct_joins_topology(Ff, fork);
    locs.push_back(validate_internal_locale(omega_nn_lattice(Ff, Jf)));
    for (const InternalLocale& L : locs) {
        CHECK(check_loc_ideal_equivalence(L).equivalent);
        // surjectivity transfers: I_L is nontrivial exactly when L is
        CHECK(is_nontrivial(pointwise_ideal_completion(L).lattice) ==
              is_nontrivial(L.lattice));
    }
}

TEST_CASE("nontriviality follows the letter of the definition") {
    FinCategory T1 = fixtures::t1();
    GrothTopology Jt = trivial_topology(T1);
    CHECK_FALSE(is_nontrivial(constant_internal_lattice(T1, Jt, chain_lattice(1))));
    CHECK(is_nontrivial(constant_internal_lattice(T1, Jt, chain_lattice(2))));

    // the double-negation classifier over trivial topologies is nontrivial
    for (const FinCategory& C : corpus_slice(2, 5, 12))
        CHECK(is_nontrivial(omega_nn_lattice(C, trivial_topology(C))));

    // a one-point fibre at an object covered by the empty sieve is exempt
    FinCategory C = fixtures::cospan();
    GrothTopology J = saturate(C, {empty_sieve(C, 0)});
    CHECK(J.covers(0, Bits(C.num_morphisms())));
    InternalLattice L;
    L.base = C;
    L.topology = J;
    L.fibre = {chain_lattice(1), chain_lattice(2), chain_lattice(2)};
    L.transition.resize(C.num_morphisms());
    L.transition[C.identity(0)] = {0};
    L.transition[C.identity(1)] = {0, 1};
    L.transition[C.identity(2)] = {0, 1};
    L.transition[3] = {0, 0};  // into the one-point fibre
    L.transition[4] = {0, 1};
    CHECK(is_nontrivial(validate_internal_lattice(L)));
}

TEST_CASE("surjectivity verdict and its cover-projection certificate") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    InternalLattice nn = omega_nn_lattice(C, J);
    RelativeSite K = coherent_coverage(nn);
    SurjectivityVerdict v = surjectivity_verdict(nn, K);
    CHECK(v.surjective);
    CHECK(v.cover_projection_checked);

    // a trivial lattice is not surjective and skips the certificate
    FinCategory T1 = fixtures::t1();
    InternalLattice one = constant_internal_lattice(T1, trivial_topology(T1), chain_lattice(1));
    SurjectivityVerdict w = surjectivity_verdict(one, coherent_coverage(one));
    CHECK_FALSE(w.surjective);
    CHECK_FALSE(w.cover_projection_checked);

    // a tiny sieve-space cap downgrades the certificate, not the verdict
    SurjectivityVerdict capped = surjectivity_verdict(nn, K, 2);
    CHECK(capped.surjective);
    CHECK_FALSE(capped.cover_projection_checked);
}

TEST_CASE("relative de morgan: verdict mirrors stone fibres, principality always holds") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    // the full classifier of this site has the five-element fork fibre: not Stone
    RelativeDeMorganReport om = relative_de_morgan(as_internal_locale(omega_lattice(C, J)));
    CHECK_FALSE(om.verdict);
    CHECK(om.principal_mechanism);
    // its double-negation part is an internal Boolean algebra: Stone fibres
    RelativeDeMorganReport nn = relative_de_morgan(as_internal_locale(omega_nn_lattice(C, J)));
    CHECK(nn.verdict);
    CHECK(nn.principal_mechanism);
    // chains are Stone, so the span classifier passes despite not being Boolean
    FinCategory S = fixtures::span();
    GrothTopology Js = trivial_topology(S);
    RelativeDeMorganReport sp = relative_de_morgan(as_internal_locale(omega_lattice(S, Js)));
    CHECK(sp.verdict);
    CHECK(sp.principal_mechanism);
    // constant Boolean fibres
    FinCategory T1 = fixtures::t1();
    RelativeDeMorganReport cb = relative_de_morgan(validate_internal_locale(
        constant_internal_lattice(T1, trivial_topology(T1), boolean_lattice(2))));
    CHECK(cb.verdict);
    CHECK(cb.principal_mechanism);
}

TEST_CASE("relative de morgan across a small corpus: the mechanism and the fibre criterion") {
    for (const FinCategory& C : cartesian_slice(2, 5, 5)) {
        GrothTopology J = trivial_topology(C);
        for (InternalLattice A : {omega_lattice(C, J), omega_nn_lattice(C, J)}) {
            InternalLocale L = validate_internal_locale(std::move(A));
            RelativeDeMorganReport r = relative_de_morgan(L);
            CHECK(r.principal_mechanism);
            bool stone = true;
            for (const FinLattice& fib : L.lattice.fibre)
                if (!is_stone(fib).stone) stone = false;
            CHECK(r.verdict == stone);
        }
    }
}

TEST_CASE("complemented part: sizes match the sheaf coproduct of terminals") {
    FinCategory C = fixtures::cospan();
    GrothTopology J = trivial_topology(C);
    InternalLattice two = complemented_part(C, J, omega(C, J));
    CHECK(two.fibre[0].n() == 2);
    CHECK(two.fibre[1].n() == 2);
    CHECK(two.fibre[2].n() == 2);

    // with the empty sieve covering x, the coproduct merges there
    GrothTopology Jx = saturate(C, {empty_sieve(C, 0)});
    InternalLattice merged = complemented_part(C, Jx, omega(C, Jx));
    CHECK(merged.fibre[0].n() == 1);

    // a transition landing outside the complemented elements is rejected
    InternalFrame bad;
    bad.fibre = {fixtures::fork(), boolean_lattice(2)};
    bad.transition.resize(3);
    FinCategory two_chain_site = frame_site(chain_lattice(2));
    bad.transition[two_chain_site.identity(0)] = {0, 1, 2, 3, 4};
    bad.transition[two_chain_site.identity(1)] = {0, 1, 2, 3};
    bad.transition[leq_morphism(two_chain_site, 0, 1)] = {0, 1, 2, 4};
    CHECK(errc_of([&] {
              complemented_part(two_chain_site, trivial_topology(two_chain_site), bad);
          }) == Errc::TransitionEscapesFibre);
}

TEST_CASE("fibred ideal completion validates as an internal locale on cartesian bases") {
    FinLattice B2 = boolean_lattice(2);
    FinCategory S = frame_site(B2);
    GrothTopology JJ = direct_joins_topology(S, B2);
    InternalLattice A = omega_nn_lattice(S, JJ);
    FibredIdeals idl = fibred_ideal_completion(A, coherent_coverage(A));
    InternalLocale revalidated = validate_internal_locale(idl.locale.lattice);
    CHECK(revalidated.adjoint == idl.locale.adjoint);
    CHECK(revalidated.certificates.beck_chevalley);
}
