"""Independent brute-force oracles for the test suite.

Everything here recomputes results from first principles (tuple-based
projections, 3^n cube scans, BFS distances) without touching the library's
packed-int fast paths, so agreement is meaningful.
"""

from __future__ import annotations

import random
from itertools import combinations, product

from cubeclass import ConceptClass, Vertex


def tuples_of(C: ConceptClass) -> set[tuple[int, ...]]:
    return {tuple(v.coord(i) for i in range(1, C.n + 1)) for v in C}


def brute_project(C: ConceptClass, J) -> set[tuple[int, ...]]:
    J = sorted(J)
    return {tuple(t[j - 1] for j in J) for t in tuples_of(C)}


def brute_shattered_sets(C: ConceptClass) -> set[frozenset[int]]:
    if not len(C):
        return set()
    out = {frozenset()}
    for size in range(1, C.n + 1):
        for J in combinations(range(1, C.n + 1), size):
            if len(brute_project(C, J)) == 2 ** size:
                out.add(frozenset(J))
    return out


def brute_vc(C: ConceptClass) -> int:
    sh = brute_shattered_sets(C)
    return max(map(len, sh)) if sh else -1


def brute_cubes(C: ConceptClass) -> set[tuple[frozenset[int], tuple[tuple[int, int], ...]]]:
    """All cubes in C as (colours, sorted anchor items), via a 3^n scan."""
    points = tuples_of(C)
    out = set()
    for cell in product((0, 1, 2), repeat=C.n):  # 2 marks a varying coordinate
        colours = frozenset(i + 1 for i, x in enumerate(cell) if x == 2)
        corners = []
        for completion in product((0, 1), repeat=len(colours)):
            it = iter(completion)
            corners.append(tuple(next(it) if x == 2 else x for x in cell))
        if all(c in points for c in corners):
            anchor = tuple(
                (i + 1, x) for i, x in enumerate(cell) if x != 2
            )
            out.add((colours, anchor))
    return out


def brute_maximal_cubes(C: ConceptClass):
    cubes = brute_cubes(C)

    def vertex_set(colours, anchor):
        fixed = dict(anchor)
        verts = []
        cols = sorted(colours)
        for completion in product((0, 1), repeat=len(cols)):
            t = []
            for i in range(1, C.n + 1):
                t.append(fixed[i] if i in fixed else completion[cols.index(i)])
            verts.append(tuple(t))
        return frozenset(verts)

    sets = {key: vertex_set(*key) for key in cubes}
    out = set()
    for key, vs in sets.items():
        if not any(key != other and vs < sets[other] for other in cubes):
            out.add(key)
    return out


def brute_is_spc(C: ConceptClass) -> bool:
    """Graph distance in the one-inclusion graph equals Hamming distance."""
    bits = sorted(C.bitset)
    n = C.n
    for src in bits:
        dist = {src: 0}
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for p in range(n):
                    w = u ^ (1 << p)
                    if w in C.bitset and w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        for v in bits:
            if dist.get(v) != (src ^ v).bit_count():
                return False
    return True


def brute_closure(C: ConceptClass) -> ConceptClass:
    """Products of all non-empty subsets, via round-by-round recomputation."""
    current = set(C.bitset)
    while True:
        nxt = {a & b for a in current for b in current} | current
        if nxt == current:
            return ConceptClass(C.n, current)
        current = nxt


def brute_is_intersection_closed(C: ConceptClass) -> bool:
    return all(a & b in C.bitset for a in C.bitset for b in C.bitset)


def brute_non_clashing(C: ConceptClass, rep_of) -> bool:
    """Direct Def-style check over ordered pairs of concepts."""
    items = list(rep_of.items())
    for v, rv in items:
        for w, rw in items:
            if v == w:
                continue
            union = sorted(rv | rw)
            pv = tuple(v.coord(i) for i in union)
            pw = tuple(w.coord(i) for i in union)
            if pv == pw:
                return False
    return True


def random_class(rng: random.Random, n: int, size=None) -> ConceptClass:
    if size is None:
        size = rng.randint(1, 1 << n)
    return ConceptClass(n, rng.sample(range(1 << n), min(size, 1 << n)))


def random_vertex(rng: random.Random, n: int) -> Vertex:
    return Vertex(rng.randrange(1 << n), n)
