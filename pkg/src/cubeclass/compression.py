"""Unlabelled sample compression schemes for extremal classes.

A scheme is an injection from concepts to coordinate subsets such that any
two concepts differ somewhere on the union of their two subsets
(non-clashing).  Schemes are built two ways:

* corner peeling: repeatedly remove a vertex lying in a unique maximal
  cube, recording that cube's colours; always works on the outputs of the
  shortest-path closure and on trees.

* descent through a chain of proper extremal subclasses, each pair
  satisfying the cubical colour condition (every non-maximal cube colour
  set of the larger class is realised by a cube of the smaller).  For such
  a pair every maximal cube of C not inside D owns a unique special vertex
  of C \\ D, and mapping that vertex to the cube's colours extends any
  valid scheme of D to one of C.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .analysis import classify, cube_colour_types, _witness_cube
from .core import (
    ConceptClass,
    Cube,
    Vertex,
    _cube_table,
    _gather,
    _is_maximal,
    _mirror,
    _scatter,
)

CoordSet = frozenset[int]


@dataclass(frozen=True)
class RepresentationMap:
    """Injection from concepts to coordinate subsets of size <= size_bound."""

    n: int
    entries: tuple[tuple[Vertex, CoordSet], ...]
    size_bound: int

    @classmethod
    def of(cls, n: int, mapping: Mapping[Vertex, Iterable[int]]) -> "RepresentationMap":
        entries = tuple(
            sorted(
                ((v, frozenset(rep)) for v, rep in mapping.items()),
                key=lambda e: _mirror(e[0].bits, n),
            )
        )
        bound = max((len(rep) for _, rep in entries), default=0)
        return cls(n, entries, bound)

    def as_dict(self) -> dict[Vertex, CoordSet]:
        return dict(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.size_bound,
            "entries": [
                {"vertex": str(v), "rep": sorted(rep)} for v, rep in self.entries
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "RepresentationMap":
        n = int(d["n"])
        mapping = {
            Vertex.from_bitstring(e["vertex"]): frozenset(int(c) for c in e["rep"])
            for e in d["entries"]
        }
        rm = cls.of(n, mapping)
        return cls(n, rm.entries, int(d["k"]))


def verify_scheme(
    C: ConceptClass, r: RepresentationMap, k: int
) -> tuple[bool, Optional[tuple]]:
    """Check injectivity, the size bound and pairwise non-clashing.

    The witness on failure is ("size", v), ("duplicate", u, v) or
    ("clash", u, v).  Two concepts mapped to the empty set always clash:
    nothing can separate them on an empty union.
    """
    if r.n != C.n:
        raise ValueError(f"scheme is over [{r.n}], class over [{C.n}]")
    rep_of = r.as_dict()
    missing = [v for v in C if v not in rep_of]
    if missing:
        raise ValueError(f"scheme lacks an entry for {missing[0]}")
    extra = [v for v in rep_of if v.bits not in C.bitset]
    if extra:
        raise ValueError(f"scheme has an entry for {extra[0]} outside the class")

    masks: dict[int, int] = {}
    seen: dict[CoordSet, Vertex] = {}
    for v, rep in rep_of.items():
        if len(rep) > k:
            return False, ("size", v)
        if rep in seen:
            return False, ("duplicate", seen[rep], v)
        seen[rep] = v
        m = 0
        for c in rep:
            m |= 1 << (c - 1)
        masks[v.bits] = m

    bits = sorted(masks)
    for i, u in enumerate(bits):
        mu = masks[u]
        for v in bits[i + 1:]:
            joint = mu | masks[v]
            if not (u ^ v) & joint:
                return False, ("clash", Vertex(u, C.n), Vertex(v, C.n))
    return True, None


def _maximal_cube_items(n: int, bits: frozenset[int]) -> list[tuple[int, int]]:
    """(colour_mask, anchor) for each maximal cube of the vertex set."""
    table = _cube_table(n, bits)
    return [
        (cmask, a)
        for cmask, anchors in table.items()
        for a in anchors
        if _is_maximal(table, n, cmask, a)
    ]


def _colours_of_mask(cmask: int, n: int) -> CoordSet:
    return frozenset(p + 1 for p in range(n) if (cmask >> p) & 1)


def corner_peel(C: ConceptClass) -> Optional[RepresentationMap]:
    """Peel corners (vertices in a unique maximal cube) until empty.

    Deterministic: always removes the lexicographically smallest corner.
    Returns None when some non-empty remainder has no corner.  A returned
    scheme is re-verified; its bound is the largest peeled cube dimension.
    """
    n = C.n
    remaining = set(C.bitset)
    mapping: dict[Vertex, CoordSet] = {}
    while remaining:
        counts: dict[int, int] = {}
        owner: dict[int, int] = {}
        for cmask, anchor in _maximal_cube_items(n, frozenset(remaining)):
            sub = cmask
            while True:
                b = anchor | sub
                counts[b] = counts.get(b, 0) + 1
                owner[b] = cmask
                if sub == 0:
                    break
                sub = (sub - 1) & cmask
        corners = [b for b, c in counts.items() if c == 1]
        if not corners:
            return None
        b = min(corners, key=lambda x: _mirror(x, n))
        mapping[Vertex(b, n)] = _colours_of_mask(owner[b], n)
        remaining.remove(b)
    scheme = RepresentationMap.of(n, mapping)
    ok, witness = verify_scheme(C, scheme, scheme.size_bound)
    if not ok:
        raise RuntimeError(f"peeling produced an invalid scheme: {witness}")
    return scheme


@dataclass(frozen=True)
class CccCertificate:
    """Per non-maximal cube colour set of C, a witness cube of D."""

    pairs: tuple[tuple[CoordSet, Cube], ...]


def _require_extremal_pair(C: ConceptClass, D: ConceptClass) -> None:
    if C.n != D.n:
        raise ValueError(f"ambient dimensions differ: {C.n} vs {D.n}")
    if not (D.bitset < C.bitset):
        raise ValueError("D must be a proper subclass of C")
    if not D.bitset:
        raise ValueError("D must be non-empty")
    if not classify(C).is_extremal:
        raise ValueError("C is not extremal")
    if not classify(D).is_extremal:
        raise ValueError("D is not extremal")


def ccc_check(C: ConceptClass, D: ConceptClass) -> Optional[CccCertificate]:
    """Cubical colour condition for the proper extremal pair (C, D)."""
    _require_extremal_pair(C, D)
    n = C.n
    table = _cube_table(n, C.bitset)
    non_maximal: set[int] = set()
    for cmask, anchors in table.items():
        for a in anchors:
            if not _is_maximal(table, n, cmask, a):
                non_maximal.add(cmask)
                break
    pairs = []
    for cmask in sorted(non_maximal):
        colours = _colours_of_mask(cmask, n)
        witness = _witness_cube(D, colours)
        if witness is None:
            return None
        pairs.append((colours, witness))
    pairs.sort(key=lambda p: (len(p[0]), tuple(sorted(p[0]))))
    return CccCertificate(tuple(pairs))


@dataclass(frozen=True)
class SandwichBijection:
    """Triples (c, c_star, v): maximal cube of C outside D, its
    complementary maximal cube in the complement of D, and the special
    vertex they share."""

    triples: tuple[tuple[Cube, Cube, Vertex], ...]


class SandwichError(ValueError):
    """Structure promised by the sandwich argument failed to materialise."""


def sandwich_bijection(C: ConceptClass, D: ConceptClass) -> SandwichBijection:
    """Match maximal cubes of C not inside D with vertices of C \\ D.

    For such a cube with colours I, the projection of D onto I misses
    exactly one pattern; the cube's vertex over that pattern is its special
    vertex and the missing pattern's full fibre is the complementary cube.
    Requires the cubical colour condition to hold for (C, D).
    """
    if ccc_check(C, D) is None:
        raise ValueError("the pair (C, D) fails the cubical colour condition")
    n = C.n
    all_coords = frozenset(range(1, n + 1))

    def inside_D(cmask: int, anchor: int) -> bool:
        sub = cmask
        while True:
            if (anchor | sub) not in D.bitset:
                return False
            if sub == 0:
                return True
            sub = (sub - 1) & cmask

    cubes = [
        (cmask, anchor)
        for cmask, anchor in _maximal_cube_items(n, C.bitset)
        if not inside_D(cmask, anchor)
    ]
    cubes.sort(key=lambda it: (it[0], _mirror(it[1], n)))
    triples = []
    specials: set[int] = set()
    for cmask, anchor in cubes:
        positions = tuple(p for p in range(n) if (cmask >> p) & 1)
        patterns = {_gather(b, positions) for b in D.bitset}
        missing = [p for p in range(1 << len(positions)) if p not in patterns]
        if len(missing) != 1:
            raise SandwichError(
                f"projection of D onto colours {_colours_of_mask(cmask, n)} misses "
                f"{len(missing)} patterns instead of exactly 1"
            )
        w = missing[0]
        v_bits = anchor | _scatter(w, positions)
        if v_bits not in C.bitset or v_bits in D.bitset:
            raise SandwichError("special vertex not in C \\ D")
        if v_bits in specials:
            raise SandwichError("two cubes share a special vertex")
        specials.add(v_bits)
        c = Cube(n, _colours_of_mask(cmask, n), anchor)
        c_star = Cube(n, all_coords - c.colours, _scatter(w, positions))
        triples.append((c, c_star, Vertex(v_bits, n)))
    if specials != C.bitset - D.bitset:
        raise SandwichError("special vertices do not cover C \\ D exactly")
    return SandwichBijection(tuple(triples))


def extend_scheme(
    C: ConceptClass, D: ConceptClass, rD: RepresentationMap
) -> RepresentationMap:
    """Extend a valid scheme of D to C via the special-vertex mapping."""
    ok, witness = verify_scheme(D, rD, rD.size_bound)
    if not ok:
        raise ValueError(f"scheme for D fails verification before extension: {witness}")
    sb = sandwich_bijection(C, D)
    mapping = rD.as_dict()
    for c, _c_star, v in sb.triples:
        mapping[v] = c.colours
    extended = RepresentationMap.of(C.n, mapping)
    ok, witness = verify_scheme(C, extended, extended.size_bound)
    if not ok:
        raise RuntimeError(f"extension produced an invalid scheme: {witness}")
    return extended


def _components_without_colour(
    n: int, bits: frozenset[int], colour: int
) -> list[frozenset[int]]:
    """Connected components of the one-inclusion graph minus one colour."""
    skip = 1 << (colour - 1)
    unvisited = set(bits)
    comps = []
    while unvisited:
        start = unvisited.pop()
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for p in range(n):
                m = 1 << p
                if m == skip:
                    continue
                w = u ^ m
                if w in unvisited:
                    unvisited.remove(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
    return comps


EXHAUSTIVE_N_CAP = 6
EXHAUSTIVE_CANDIDATE_CAP = 100_000


def find_ccc_subclass(C: ConceptClass) -> Optional[ConceptClass]:
    """Search for a proper extremal subclass satisfying the colour condition.

    Strategies, in order: (a) per colour, split the one-inclusion graph at
    that colour's edges and drop a smallest component; (b) for maximum
    classes, the union of one canonical cube per (d-1)-colour-set;
    (c) for n <= 6, exhaustive subsets in decreasing size, lexicographic,
    capped at EXHAUSTIVE_CANDIDATE_CAP candidates.  Every candidate must
    pass the extremality and colour-condition checks.
    """
    report = classify(C)
    if not report.is_extremal:
        raise ValueError("C is not extremal")
    if len(C) < 2:
        raise ValueError("C must have at least two concepts")
    n = C.n

    def accept(candidate_bits: frozenset[int]) -> Optional[ConceptClass]:
        if not candidate_bits or not candidate_bits < C.bitset:
            return None
        D = ConceptClass(n, candidate_bits)
        if not classify(D).is_extremal:
            return None
        if ccc_check(C, D) is None:
            return None
        return D

    # (a) splitting along each colour
    for colour in range(1, n + 1):
        comps = _components_without_colour(n, C.bitset, colour)
        if len(comps) < 2:
            continue
        smallest = min(
            comps, key=lambda c: (len(c), min(_mirror(b, n) for b in c))
        )
        D = accept(C.bitset - smallest)
        if D is not None:
            return D

    # (b) union of a canonical complete (d-1)-collection, for maximum classes
    d = report.vc_dimension
    if report.is_maximum and d >= 1:
        union: set[int] = set()
        complete = True
        for I in combinations(range(1, n + 1), d - 1):
            cube = _witness_cube(C, frozenset(I))
            if cube is None:
                complete = False
                break
            union.update(cube.bit_vertices())
        if complete:
            D = accept(frozenset(union))
            if D is not None:
                return D

    # (c) exhaustive fallback at toy scale
    if n <= EXHAUSTIVE_N_CAP:
        ordered = C.sorted_bits()
        tried = 0
        for size in range(len(ordered) - 1, 0, -1):
            for keep in combinations(ordered, size):
                tried += 1
                if tried > EXHAUSTIVE_CANDIDATE_CAP:
                    return None
                D = accept(frozenset(keep))
                if D is not None:
                    return D
    return None


class SchemeChainError(ValueError):
    """No chain of colour-condition subclasses was found."""

    def __init__(self, stuck: ConceptClass):
        super().__init__(
            f"no ccc chain found below a class of {len(stuck)} concepts (n={stuck.n})"
        )
        self.stuck_class = stuck


def build_scheme(C: ConceptClass) -> RepresentationMap:
    """Scheme for an extremal class via chain descent plus corner peeling.

    Descends through colour-condition subclasses until the VC dimension
    drops to 1 or below (where peeling a tree always succeeds), then
    extends the base scheme back up the chain.
    """
    if not classify(C).is_extremal:
        raise ValueError("C is not extremal")
    chain = [C]
    while classify(chain[-1]).vc_dimension > 1:
        D = find_ccc_subclass(chain[-1])
        if D is None:
            raise SchemeChainError(chain[-1])
        chain.append(D)
    scheme = corner_peel(chain[-1])
    if scheme is None:
        raise SchemeChainError(chain[-1])
    for bigger, smaller in zip(reversed(chain[:-1]), reversed(chain[1:])):
        scheme = extend_scheme(bigger, smaller, scheme)
    return scheme


@lru_cache(maxsize=4096)
def _scheme_for_projection(C: ConceptClass, J: CoordSet) -> RepresentationMap:
    from .core import project

    return build_scheme(project(C, J))


def compress_sample(
    C: ConceptClass, J: Iterable[int], labels: Optional[Vertex]
) -> CoordSet:
    """Represent a realisable labelling of the coordinates J as a subset of J.

    ``labels`` is a vertex over [|J|] in the sorted order of J, or None for
    the empty domain (whose unique labelling is represented by the empty
    set).
    """
    J = frozenset(J)
    if not J:
        return frozenset()
    coords = sorted(J)
    if max(coords) > C.n or min(coords) < 1:
        raise ValueError(f"domain {coords} not within [1, {C.n}]")
    if labels is None or labels.n != len(coords):
        raise ValueError(f"labels must be a vertex over [{len(coords)}]")
    scheme = _scheme_for_projection(C, J)
    rep_of = scheme.as_dict()
    if labels not in rep_of:
        raise ValueError(f"labelling {labels} is not realisable by the class on {coords}")
    return frozenset(coords[i - 1] for i in rep_of[labels])


def reconstruct(
    C: ConceptClass, J: Iterable[int], rep: Iterable[int]
) -> Optional[Vertex]:
    """Invert :func:`compress_sample`: recover the unique matching labelling."""
    J = frozenset(J)
    rep = frozenset(rep)
    if not rep <= J:
        raise ValueError(f"representation {sorted(rep)} not within domain {sorted(J)}")
    if not J:
        return None
    coords = sorted(J)
    if max(coords) > C.n or min(coords) < 1:
        raise ValueError(f"domain {coords} not within [1, {C.n}]")
    index = {c: i + 1 for i, c in enumerate(coords)}
    local = frozenset(index[c] for c in rep)
    scheme = _scheme_for_projection(C, J)
    for v, r in scheme.entries:
        if r == local:
            return v
    raise ValueError(f"representation {sorted(rep)} is not in the scheme's image")
