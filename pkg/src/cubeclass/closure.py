"""Intersection closure, origin reorientation and the k-close cube test.

The closure is the least fixpoint of pairwise coordinate-wise products.
The k-close cube condition asks for a centre vertex plus a complete
collection of (n-k-1)-cubes in the complement, each within Hamming
distance one of the centre; the least such k equals the least VC
dimension of the closure over all origin choices, which
:func:`min_closure_vc_bruteforce` computes directly as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

from .analysis import vc_dimension
from .core import ConceptClass, Cube, DimensionMismatch, Vertex, _mirror

SWEEP_CAP = 16  # 2^n origin/centre sweeps beyond this are refused


def is_intersection_closed(C: ConceptClass) -> tuple[bool, Optional[tuple[Vertex, Vertex]]]:
    """Whether C is closed under pairwise products, with a witness pair."""
    bits = sorted(C.bitset)
    present = C.bitset
    for i, u in enumerate(bits):
        for v in bits[i + 1:]:
            if u & v not in present:
                return False, (Vertex(u, C.n), Vertex(v, C.n))
    return True, None


def intersection_closure(C: ConceptClass) -> ConceptClass:
    """Smallest intersection-closed superset of a non-empty class."""
    if not len(C):
        raise ValueError("the empty class has no intersection closure")
    closed = set(C.bitset)
    queue = list(closed)
    while queue:
        x = queue.pop()
        fresh = {x & y for y in closed} - closed
        closed.update(fresh)
        queue.extend(fresh)
    return ConceptClass(C.n, closed)


def reorient(C: ConceptClass, o: Vertex) -> ConceptClass:
    """Translate so that o becomes the all-zero origin (XOR by o)."""
    if o.n != C.n:
        raise DimensionMismatch(f"origin has n={o.n}, class has n={C.n}")
    return ConceptClass(C.n, {b ^ o.bits for b in C.bitset})


def min_closure_vc_bruteforce(
    C: ConceptClass, force: bool = False
) -> tuple[int, Vertex]:
    """Least VC dimension of the intersection closure over all 2^n origins.

    Returns the minimum and the first minimising origin in canonical
    order.  Exponential; refuses n > 16 unless forced.
    """
    n = C.n
    if n > SWEEP_CAP and not force:
        raise ValueError(f"origin sweep over 2^{n} origins refused (use force)")
    best_d: Optional[int] = None
    best_o = 0
    for o in sorted(range(1 << n), key=lambda b: _mirror(b, n)):
        d = vc_dimension(intersection_closure(reorient(C, Vertex(o, n))))
        if best_d is None or d < best_d:
            best_d, best_o = d, o
            if d == 0:
                break
    assert best_d is not None
    return best_d, Vertex(best_o, n)


@dataclass(frozen=True)
class KCloseCertificate:
    """Witness for the k-close cube condition.

    ``cubes`` hold one (n-k-1)-cube per colour set of that size, all
    disjoint from the class, each with its anchor differing from the
    centre in at most one coordinate.  Vacuous (empty) for k >= n.
    """

    k: int
    centre: Vertex
    cubes: tuple[Cube, ...]

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "v": str(self.centre),
            "cubes": [c.as_json_dict() for c in self.cubes],
        }

    @classmethod
    def from_json_dict(cls, n: int, d: dict) -> "KCloseCertificate":
        centre = Vertex.from_bitstring(d["v"])
        if centre.n != n:
            raise DimensionMismatch(f"centre has n={centre.n}, expected {n}")
        return cls(int(d["k"]), centre, tuple(Cube.from_json_dict(n, c) for c in d["cubes"]))


def certificate_is_valid(C: ConceptClass, cert: KCloseCertificate) -> bool:
    """Re-check a certificate against its class from scratch."""
    n, k = C.n, cert.k
    m = n - k - 1
    if m < 0:
        return not cert.cubes
    if len(cert.cubes) != comb(n, m):
        return False
    if len({c.colours for c in cert.cubes}) != len(cert.cubes):
        return False
    centre = cert.centre.bits
    for cube in cert.cubes:
        if cube.dimension != m:
            return False
        if ((cube.anchor_bits ^ centre) & cube.domain_mask).bit_count() > 1:
            return False
        if any(b in C.bitset for b in cube.bit_vertices()):
            return False
    return True


def k_close_condition(
    C: ConceptClass, k: int, force: bool = False
) -> Optional[KCloseCertificate]:
    """Search for a k-close certificate; None when no centre works.

    Deterministic: centres are swept in canonical order; per colour set the
    anchor matching the centre is preferred, then the one-flip anchors in
    coordinate order.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    n = C.n
    if n > SWEEP_CAP and not force:
        raise ValueError(f"centre sweep over 2^{n} centres refused (use force)")
    m = n - k - 1
    if m < 0:
        return KCloseCertificate(k, Vertex(0, n), ())

    all_mask = (1 << n) - 1
    colour_sets = list(combinations(range(1, n + 1), m))
    prepared = []  # (colours, domain_mask, occupied anchors)
    for I in colour_sets:
        cmask = 0
        for c in I:
            cmask |= 1 << (c - 1)
        dmask = all_mask ^ cmask
        occupied = {b & dmask for b in C.bitset}
        prepared.append((frozenset(I), dmask, occupied))

    for centre in sorted(range(1 << n), key=lambda b: _mirror(b, n)):
        cubes = []
        for colours, dmask, occupied in prepared:
            base = centre & dmask
            anchor = None
            if base not in occupied:
                anchor = base
            else:
                for p in range(n):
                    flip = 1 << p
                    if dmask & flip and (base ^ flip) not in occupied:
                        anchor = base ^ flip
                        break
            if anchor is None:
                break
            cubes.append(Cube(n, colours, anchor))
        else:
            return KCloseCertificate(k, Vertex(centre, n), tuple(cubes))
    return None


def min_k_close(C: ConceptClass, force: bool = False) -> int:
    """Least k satisfying the k-close cube condition (monotone upward scan)."""
    k = 0
    while True:
        if k_close_condition(C, k, force=force) is not None:
            return k
        k += 1
