#include <doctest.h>

#include <random>
#include <set>

#include "finsite/bits.hpp"

using finsite::Bits;

namespace {

std::set<int> to_set(const Bits& b) {
    std::set<int> s;
    b.for_each([&](int i) { s.insert(i); });
    return s;
}

}  // namespace

TEST_CASE("bits operations match reference set semantics") {
    std::mt19937 rng(20260819);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 130);
        Bits a(n), b(n);
        std::set<int> sa, sb;
        for (int i = 0; i < n; ++i) {
            if (rng() % 2) {
                a.set(i);
                sa.insert(i);
            }
            if (rng() % 2) {
                b.set(i);
                sb.insert(i);
            }
        }
        CHECK(to_set(a) == sa);
        CHECK(a.count() == static_cast<int>(sa.size()));

        std::set<int> su = sa, si, sd = sa;
        su.insert(sb.begin(), sb.end());
        for (int x : sb) {
            if (sa.count(x)) si.insert(x);
            sd.erase(x);
        }
        CHECK(to_set(a | b) == su);
        CHECK(to_set(a & b) == si);
        Bits d = a;
        d.subtract(b);
        CHECK(to_set(d) == sd);

        CHECK(a.subset_of(a | b));
        CHECK((a & b).subset_of(a));
        CHECK(a.intersects(b) == !si.empty());
        CHECK(a.none() == sa.empty());
        CHECK(a.first() == (sa.empty() ? -1 : *sa.begin()));
    }
}

TEST_CASE("bits ordering equals numeric order of masks") {
    Bits a(70), b(70);
    a.set(0);
    b.set(1);
    CHECK(a < b);  // mask 1 < mask 2
    Bits c(70), d(70);
    c.set(65);
    d.set(64);
    CHECK(d < c);
    Bits e(70);
    CHECK(e < a);  // empty mask is least

    // cross-check against uint64 order on one-word samples
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        uint64_t u = rng(), v = rng();
        Bits x(64), y(64);
        for (int i = 0; i < 64; ++i) {
            if ((u >> i) & 1) x.set(i);
            if ((v >> i) & 1) y.set(i);
        }
        CHECK((x < y) == (u < v));
    }
}
