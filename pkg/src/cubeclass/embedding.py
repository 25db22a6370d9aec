"""Shortest-path closure of intersection-closed classes.

For comparable pairs w <= v the canonical descent path clears, one at a
time, the earliest coordinate (under a fixed ordering) where the current
vertex exceeds w.  Adjoining these paths for all comparable pairs turns an
intersection-closed class into one that is also shortest-path closed,
hence extremal, with VC dimension at most 11 times the input's.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .analysis import classify, sauer_bound
from .closure import is_intersection_closed
from .core import ConceptClass, Vertex, is_shortest_path_closed, leq

VC_BLOWUP_FACTOR = 11


@dataclass(frozen=True)
class CoordinateOrdering:
    """A permutation of [n] fixing which coordinate each path step clears."""

    perm: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of [{n}]: {self.perm}")

    @classmethod
    def identity(cls, n: int) -> "CoordinateOrdering":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def shuffled(cls, n: int, seed: int) -> "CoordinateOrdering":
        perm = list(range(1, n + 1))
        random.Random(seed).shuffle(perm)
        return cls(tuple(perm))

    @property
    def n(self) -> int:
        return len(self.perm)


def lambda_path(v: Vertex, w: Vertex, ordering: CoordinateOrdering) -> list[Vertex]:
    """Canonical descent path from v to w, both endpoints included.

    Requires w <= v.  Each step clears the earliest coordinate, in the
    ordering, where the current vertex still exceeds w; the result is a
    shortest path of hamming(v, w) + 1 vertices.
    """
    if ordering.n != v.n:
        raise ValueError(f"ordering is over [{ordering.n}], vertices over [{v.n}]")
    if not leq(w, v):
        raise ValueError(f"{w!r} is not between {v!r} and the origin")
    perm0 = tuple(p - 1 for p in ordering.perm)
    return [v] + [Vertex(b, v.n) for b in _descend(v.bits, w.bits, perm0)]


def _descend(cur: int, target: int, perm0: tuple[int, ...]) -> list[int]:
    """Raw-int inner loop of :func:`lambda_path` (0-based positions)."""
    out = []
    idx = 0
    while cur != target:
        while not (cur >> perm0[idx]) & 1 or (target >> perm0[idx]) & 1:
            idx += 1
        cur ^= 1 << perm0[idx]
        out.append(cur)
    return out


class NotIntersectionClosed(ValueError):
    """Input to the closure algorithm is not intersection closed."""


def shortest_path_closure(
    C: ConceptClass, ordering: Optional[CoordinateOrdering] = None
) -> ConceptClass:
    """Adjoin the canonical paths of all comparable pairs of C.

    The input must be intersection closed; the output contains C, has at
    most n * |C|^2 vertices, and is intersection closed, shortest-path
    closed and extremal.
    """
    if ordering is None:
        ordering = CoordinateOrdering.identity(C.n)
    elif ordering.n != C.n:
        raise ValueError(f"ordering is over [{ordering.n}], class over [{C.n}]")
    closed, witness = is_intersection_closed(C)
    if not closed:
        raise NotIntersectionClosed(
            f"pair {witness[0]}, {witness[1]} has its product outside the class"
        )
    perm0 = tuple(p - 1 for p in ordering.perm)
    members = set(C.bitset)
    bits = sorted(C.bitset)
    for v in bits:
        for w in bits:
            if not w & ~v and (v ^ w).bit_count() > 1:
                members.update(_descend(v, w, perm0))
    return ConceptClass(C.n, members)


@dataclass(frozen=True)
class EmbeddingReport:
    """Outcome of checking an enlarged class against its guarantees."""

    n: int
    input_size: int
    output_size: int
    input_vc: int
    output_vc: int
    intersection_closed: bool
    shortest_path_closed: bool
    extremal: bool

    @property
    def ratio(self) -> float:
        if self.input_vc == 0:
            return 1.0 if self.output_vc == 0 else float("inf")
        return self.output_vc / self.input_vc

    @property
    def ok(self) -> bool:
        return (
            self.intersection_closed
            and self.shortest_path_closed
            and self.extremal
            and self.output_vc <= VC_BLOWUP_FACTOR * max(self.input_vc, 0)
            and self.output_size <= self.n * self.input_size**2
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "input_size": self.input_size,
            "output_size": self.output_size,
            "input_vc": self.input_vc,
            "output_vc": self.output_vc,
            "intersection_closed": self.intersection_closed,
            "shortest_path_closed": self.shortest_path_closed,
            "extremal": self.extremal,
            "ratio": self.ratio,
            "ok": self.ok,
        }

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_json_dict().items():
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = f"{value:.4f}"
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"


class EmbeddingError(ValueError):
    """A guarantee of the enlarged class failed; carries the report."""

    def __init__(self, message: str, report: EmbeddingReport):
        super().__init__(message)
        self.report = report


def verify_embedding(
    C: ConceptClass, Cstar: ConceptClass, strict: bool = True
) -> EmbeddingReport:
    """Check containment plus the four guarantees of the enlarged class.

    With ``strict`` (the default) any failed guarantee raises
    :class:`EmbeddingError` naming the first witness; the report is always
    attached.
    """
    if C.n != Cstar.n:
        raise ValueError(f"ambient dimensions differ: {C.n} vs {Cstar.n}")
    if not C.bitset <= Cstar.bitset:
        raise ValueError("the enlarged class does not contain the input class")
    ic, ic_witness = is_intersection_closed(Cstar)
    spc, spc_witness = is_shortest_path_closed(Cstar)
    extremal = classify(Cstar).is_extremal
    report = EmbeddingReport(
        n=C.n,
        input_size=len(C),
        output_size=len(Cstar),
        input_vc=classify(C).vc_dimension,
        output_vc=classify(Cstar).vc_dimension,
        intersection_closed=ic,
        shortest_path_closed=spc,
        extremal=extremal,
    )
    if strict and not report.ok:
        if not ic:
            msg = f"not intersection closed: witness {ic_witness[0]}, {ic_witness[1]}"
        elif not spc:
            msg = f"not shortest-path closed: witness {spc_witness[0]}, {spc_witness[1]}"
        elif not extremal:
            msg = "not extremal"
        elif report.output_vc > VC_BLOWUP_FACTOR * max(report.input_vc, 0):
            msg = f"VC dimension grew from {report.input_vc} to {report.output_vc}"
        else:
            msg = f"cardinality bound violated: {report.output_size} > n*|C|^2"
        raise EmbeddingError(msg, report)
    return report


def projection_cardinality_bound(d: int) -> int:
    """Worst-case projected size of the enlarged class on 11d coordinates.

    For input VC dimension d, a projection p to 11d coordinates satisfies
    |p(C)| <= sauer_bound(11d, d), and adjoining the ordered-pair paths
    multiplies by at most 11d * |p(C)| / 2.
    """
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    m = VC_BLOWUP_FACTOR * d
    return m * sauer_bound(m, d) ** 2 // 2
