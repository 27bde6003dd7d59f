#!/usr/bin/env python3
"""Independent brute-force census of finite categories up to isomorphism.

Written as a deliberately naive cross-check for the optimized C++ enumerator:
no symmetry breaking during search, no constraint propagation.  It labels
identities as morphisms 0..k-1 (one per object), assigns arbitrary dom/cod to
the remaining morphisms, fills composition tables by plain backtracking with
an associativity check, canonicalizes every solution by minimizing over all
relabelings, and counts distinct canonical forms.

Usage: oracle_enum.py [max_objects] [max_morphisms]
Exits nonzero if the census disagrees with the frozen expected table.

The default bounds (3 objects, 4 morphisms) finish in about a second and
cover nine census cells.  Five or more morphisms is impractical in pure
Python (the one-object cell alone is a 5^16 labeled table space); larger
counts are pinned instead by the published monoid numbers checked in the
C++ unit tests.
"""

import itertools
import sys

def categories(k, n):
    """Yield every labeled category on objects 0..k-1, morphisms 0..n-1
    where morphism o < k is the identity of object o."""
    free = list(range(k, n))
    for domcod in itertools.product(range(k * k), repeat=len(free)):
        dom = list(range(k)) + [dc // k for dc in domcod]
        cod = list(range(k)) + [dc % k for dc in domcod]
        cells = [(g, f) for g in range(n) for f in range(n)
                 if cod[f] == dom[g] and g >= k and f >= k]
        comp = {}
        for f in range(n):
            comp[(cod[f], f)] = f
            comp[(f, dom[f])] = f

        block = {}
        for m in range(n):
            block.setdefault((dom[m], cod[m]), []).append(m)

        def assoc_ok():
            for h in range(n):
                for g in range(n):
                    if cod[g] != dom[h]:
                        continue
                    hg = comp[(h, g)]
                    for f in range(n):
                        if cod[f] != dom[g]:
                            continue
                        if comp[(hg, f)] != comp[(h, comp[(g, f)])]:
                            return False
            return True

        def fill(i):
            if i == len(cells):
                if assoc_ok():
                    yield dict(comp)
                return
            g, f = cells[i]
            if (g, f) in comp:
                yield from fill(i + 1)
                return
            for v in block.get((dom[f], cod[g]), []):
                comp[(g, f)] = v
                yield from fill(i + 1)
            del comp[(g, f)]

        for table in fill(0):
            yield dom, cod, table


def canonical(k, n, dom, cod, table):
    """Minimum serialization over object perms x free-morphism perms."""
    best = None
    free = list(range(k, n))
    for objp in itertools.permutations(range(k)):
        for freep in itertools.permutations(free):
            sigma = list(objp) + list(freep)  # morphism relabeling
            # image must keep identities at 0..k-1: identity o -> objp[o]
            ndom = [0] * n
            ncod = [0] * n
            ok = True
            for m in range(n):
                ndom[sigma[m]] = objp[dom[m]]
                ncod[sigma[m]] = objp[cod[m]]
            for o in range(k):
                if ndom[o] != o or ncod[o] != o:
                    ok = False  # identities must stay identities of their slot
            if not ok:
                continue
            ntab = {}
            for (g, f), v in table.items():
                ntab[(sigma[g], sigma[f])] = sigma[v]
            ser = (tuple(ndom), tuple(ncod), tuple(sorted(ntab.items())))
            if best is None or ser < best:
                best = ser
    return best


def census(max_obj, max_mor):
    out = {}
    for k in range(1, max_obj + 1):
        for n in range(k, max_mor + 1):
            forms = set()
            for dom, cod, table in categories(k, n):
                forms.add(canonical(k, n, dom, cod, table))
            out[(k, n)] = len(forms)
    return out


EXPECTED = {
    (1, 1): 1, (1, 2): 2, (1, 3): 7, (1, 4): 35,
    (2, 2): 1, (2, 3): 3, (2, 4): 16,
    (3, 3): 1, (3, 4): 3,
}

if __name__ == "__main__":
    max_obj = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    max_mor = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    got = census(max_obj, max_mor)
    bad = False
    for key in sorted(got):
        exp = EXPECTED.get(key)
        tag = ""
        if exp is not None and exp != got[key]:
            tag = f"  MISMATCH expected {exp}"
            bad = True
        print(f"({key[0]} obj, {key[1]} mor): {got[key]}{tag}")
    sys.exit(1 if bad else 0)
