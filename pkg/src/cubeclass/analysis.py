"""Shattering enumeration, VC dimension, Sauer bound and class taxonomy.

Shattered coordinate sets and cube colour types are both downward-closed
families, so both enumerations walk subsets by increasing size and only
test candidates whose smaller subsets all passed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .core import ConceptClass, Cube, _gather, _mirror

CoordSet = frozenset[int]


def _shatters(bits: frozenset[int], positions: tuple[int, ...]) -> bool:
    """True iff the projection onto the given 0-based positions is onto."""
    want = 1 << len(positions)
    if len(bits) < want:
        return False
    seen: set[int] = set()
    for b in bits:
        seen.add(_gather(b, positions))
        if len(seen) == want:
            return True
    return False


def _has_cube_with_colours(n: int, bits: frozenset[int], positions: tuple[int, ...]) -> bool:
    """True iff some anchor's fibre contains all completions on positions."""
    want = 1 << len(positions)
    if len(bits) < want:
        return False
    cmask = 0
    for p in positions:
        cmask |= 1 << p
    dmask = ((1 << n) - 1) ^ cmask
    fibres: dict[int, int] = {}
    for b in bits:
        a = b & dmask
        c = fibres.get(a, 0) + 1
        if c == want:
            return True
        fibres[a] = c
    return False


def _witness_cube(C: ConceptClass, colours: Iterable[int]) -> Cube | None:
    """First cube of C (canonical anchor order) with exactly these colours."""
    positions = tuple(sorted(c - 1 for c in colours))
    want = 1 << len(positions)
    cmask = 0
    for p in positions:
        cmask |= 1 << p
    dmask = ((1 << C.n) - 1) ^ cmask
    fibres: dict[int, int] = {}
    for b in C.bitset:
        a = b & dmask
        fibres[a] = fibres.get(a, 0) + 1
    full = [a for a, c in fibres.items() if c == want]
    if not full:
        return None
    return Cube(C.n, frozenset(colours), min(full, key=lambda a: _mirror(a, C.n)))


def _downward_closed_family(C: ConceptClass, test) -> frozenset[CoordSet]:
    """All coordinate sets passing ``test``, assuming downward closure.

    ``test(positions)`` takes sorted 0-based positions.  The empty set is
    included iff the class is non-empty.
    """
    if not len(C):
        return frozenset()
    n = C.n
    found: set[CoordSet] = {frozenset()}
    level: list[tuple[int, ...]] = [()]  # sorted 1-based tuples
    while level:
        level_set = set(level)
        nxt: list[tuple[int, ...]] = []
        for prev in level:
            start = prev[-1] + 1 if prev else 1
            for j in range(start, n + 1):
                cand = prev + (j,)
                # downward closure: all facets one size down must have passed
                if any(cand[:k] + cand[k + 1:] not in level_set for k in range(len(prev))):
                    continue
                if test(tuple(c - 1 for c in cand)):
                    nxt.append(cand)
        found.update(frozenset(t) for t in nxt)
        level = nxt
    return frozenset(found)


def shattered_sets(C: ConceptClass) -> frozenset[CoordSet]:
    """All I with project(C, I) onto the |I|-cube (plus the empty set)."""
    bits = C.bitset
    return _downward_closed_family(C, lambda pos: _shatters(bits, pos))


def cube_colour_types(C: ConceptClass) -> frozenset[CoordSet]:
    """All colour sets realised by some cube fully contained in C."""
    n, bits = C.n, C.bitset
    return _downward_closed_family(C, lambda pos: _has_cube_with_colours(n, bits, pos))


def vc_dimension(C: ConceptClass) -> int:
    """Largest shattered-set cardinality; -1 for the empty class."""
    sh = shattered_sets(C)
    return max(map(len, sh)) if sh else -1


def sauer_bound(n: int, d: int) -> int:
    """Sum of binomial coefficients C(n, 0) + ... + C(n, d)."""
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    return sum(math.comb(n, i) for i in range(d + 1))


@dataclass(frozen=True)
class ClassReport:
    """Counting summary of one class, with maximum/extremal verdicts."""

    n: int
    cardinality: int
    vc_dimension: int
    shattered_count: int
    cube_type_count: int
    is_maximum: bool
    is_extremal: bool
    sauer_bound_value: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "cardinality": self.cardinality,
            "vc_dimension": self.vc_dimension,
            "shattered_count": self.shattered_count,
            "cube_type_count": self.cube_type_count,
            "is_maximum": self.is_maximum,
            "is_extremal": self.is_extremal,
            "sauer_bound_value": self.sauer_bound_value,
        }

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_json_dict().items():
            if isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=4096)
def classify(C: ConceptClass) -> ClassReport:
    """Full report: extremality straight from the witness-cube definition.

    A class is extremal when every shattered coordinate set is the colour
    set of some cube contained in the class.  The type count is computed by
    an independent enumeration; under ``__debug__`` the Sandwich counting
    equality is cross-checked against the verdict.
    """
    n, bits = C.n, C.bitset
    sh = shattered_sets(C)
    types = cube_colour_types(C)
    d = max(map(len, sh)) if sh else -1
    if not bits:
        report = ClassReport(n, 0, -1, 0, 0, False, True, 0)
    else:
        extremal = all(
            _has_cube_with_colours(n, bits, tuple(sorted(c - 1 for c in I))) for I in sh
        )
        bound = sauer_bound(n, d)
        report = ClassReport(
            n=n,
            cardinality=len(bits),
            vc_dimension=d,
            shattered_count=len(sh),
            cube_type_count=len(types),
            is_maximum=len(bits) == bound,
            is_extremal=extremal,
            sauer_bound_value=bound,
        )
    if __debug__ and bits:
        counting = report.cardinality == report.shattered_count == report.cube_type_count
        assert report.is_extremal == counting, f"sandwich cross-check failed on {C!r}"
    return report


def is_complete_collection(cubes: Iterable[Cube], n: int, d: int) -> bool:
    """Whether the cubes realise every d-subset of [n] exactly once."""
    cubes = list(cubes)
    for c in cubes:
        if c.n != n:
            raise ValueError(f"cube ambient dimension {c.n} != {n}")
        if c.dimension != d:
            raise ValueError(f"mixed dimensions: expected {d}, got {c.dimension}")
    seen = {c.colours for c in cubes}
    if len(seen) != len(cubes) or len(cubes) != math.comb(n, d):
        return False
    return all(frozenset(I) in seen for I in combinations(range(1, n + 1), d))
