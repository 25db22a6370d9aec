"""Seeded generators for the concept-class families used in testing.

Every generator is deterministic given its spec.  Families carry declared
contracts (intersection closed, extremal, ...) that the test suites check
through the analysis modules rather than trusting.
"""

from __future__ import annotations

import csv
import random
import zlib
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Optional

from .analysis import classify
from .closure import intersection_closure
from .core import ConceptClass

FAMILIES = (
    "full_cube",
    "hamming_ball",
    "downward_closed",
    "random_intersection_closed",
    "monomial_union",
    "hyperrectangle",
    "tree",
    "random_extremal_vc2",
)


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one generated class."""

    family: str
    n: int
    seed: int = 0
    d: Optional[int] = None
    density: Optional[float] = None
    size: Optional[int] = None
    count: Optional[int] = None
    points: Optional[tuple[tuple[int, ...], ...]] = None

    def to_json_dict(self) -> dict:
        out: dict = {"family": self.family, "n": self.n, "seed": self.seed}
        for key in ("d", "density", "size", "count"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.points is not None:
            out["points"] = [list(p) for p in self.points]
        return out

    @classmethod
    def from_json_dict(cls, d: dict) -> "GenSpec":
        points = d.get("points")
        if points is not None:
            points = tuple(tuple(int(x) for x in p) for p in points)
        return cls(
            family=d["family"],
            n=int(d["n"]),
            seed=int(d.get("seed", 0)),
            d=None if d.get("d") is None else int(d["d"]),
            density=None if d.get("density") is None else float(d["density"]),
            size=None if d.get("size") is None else int(d["size"]),
            count=None if d.get("count") is None else int(d["count"]),
            points=points,
        )


def read_points_csv(path) -> tuple[tuple[int, ...], ...]:
    """One integer point per row; all rows must agree on dimension."""
    points = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            row = [cell.strip() for cell in row if cell.strip()]
            if not row:
                continue
            points.append(tuple(int(cell) for cell in row))
    if not points:
        raise ValueError(f"no points found in {path}")
    if len({len(p) for p in points}) != 1:
        raise ValueError("points disagree on dimension")
    return tuple(points)


def _hamming_ball(n: int, d: int) -> ConceptClass:
    return ConceptClass(n, (b for b in range(1 << n) if b.bit_count() <= d))


def _downward_closed(n: int, d: int, density: float, seed: int) -> ConceptClass:
    rng = random.Random(seed)
    m = max(1, round(density * 12))
    bits: set[int] = {0}
    for _ in range(m):
        support = rng.sample(range(n), rng.randint(0, min(d, n)))
        for size in range(len(support) + 1):
            for sub in combinations(support, size):
                b = 0
                for p in sub:
                    b |= 1 << p
                bits.add(b)
    return ConceptClass(n, bits)


def _random_intersection_closed(
    n: int, density: float, seed: int, max_weight: Optional[int]
) -> ConceptClass:
    rng = random.Random(seed)
    m = max(2, round(density * (1 << min(n, 8))))
    bits: set[int] = set()
    for _ in range(m):
        if max_weight is None:
            bits.add(rng.randrange(1 << n))
        else:
            support = rng.sample(range(n), rng.randint(0, min(max_weight, n)))
            b = 0
            for p in support:
                b |= 1 << p
            bits.add(b)
    return intersection_closure(ConceptClass(n, bits))


def _monomial_union(n: int, d: int, count: int, seed: int) -> ConceptClass:
    rng = random.Random(seed)
    positions = list(range(n))
    rng.shuffle(positions)
    bits: set[int] = {0}
    taken = 0
    for _ in range(count):
        if taken >= n:
            break
        size = rng.randint(1, min(d, n - taken))
        group = positions[taken:taken + size]
        taken += size
        for pattern in range(1 << size):
            b = 0
            for k, p in enumerate(group):
                if (pattern >> k) & 1:
                    b |= 1 << p
            bits.add(b)
    return ConceptClass(n, bits)


_BOX_CAP = 1_000_000


def _hyperrectangle(points: tuple[tuple[int, ...], ...]) -> ConceptClass:
    """All labellings of the point set induced by axis-aligned boxes."""
    n = len(points)
    if n < 1:
        raise ValueError("need at least one point")
    dims = len(points[0])
    axis_values = [sorted({p[a] for p in points}) for a in range(dims)]
    total = 1
    for values in axis_values:
        total *= len(values) * (len(values) + 1) // 2
    if total > _BOX_CAP:
        raise ValueError(f"{total} candidate boxes exceed the cap {_BOX_CAP}")
    ranges = [
        [(lo, hi) for lo, hi in combinations(values, 2)] + [(v, v) for v in values]
        for values in axis_values
    ]
    bits = {0}  # the empty box
    for box in product(*ranges):
        b = 0
        for i, p in enumerate(points):
            if all(lo <= p[a] <= hi for a, (lo, hi) in enumerate(box)):
                b |= 1 << i
        bits.add(b)
    return ConceptClass(n, bits)


def _tree(n: int, seed: int) -> ConceptClass:
    """Connected one-inclusion tree rooted at the origin, one edge per colour."""
    rng = random.Random(seed)
    for _ in range(32):
        bits = {0}
        order = list(range(n))
        rng.shuffle(order)
        ok = True
        for p in order:
            candidates = []
            for v in sorted(bits):
                w = v ^ (1 << p)
                if w in bits:
                    continue
                degree = sum(1 for q in range(n) if (w ^ (1 << q)) in bits)
                if degree == 1:
                    candidates.append(w)
            if not candidates:
                ok = False
                break
            bits.add(rng.choice(sorted(candidates)))
        if ok and len(bits) == n + 1:
            return ConceptClass(n, bits)
    # fallback: the monotone path through prefixes
    bits, prefix = {0}, 0
    for p in range(n):
        prefix |= 1 << p
        bits.add(prefix)
    return ConceptClass(n, bits)


def _random_extremal_vc2(n: int, size: int, seed: int) -> ConceptClass:
    """Grow vertex by vertex, keeping the class extremal with VC <= 2."""
    rng = random.Random(seed)
    bits = {rng.randrange(1 << n)}
    attempts = 0
    while len(bits) < size and attempts < 80 * size:
        attempts += 1
        v = rng.choice(sorted(bits))
        w = v ^ (1 << rng.randrange(n))
        if w in bits:
            continue
        report = classify(ConceptClass(n, bits | {w}))
        if report.is_extremal and report.vc_dimension <= 2:
            bits.add(w)
    return ConceptClass(n, bits)


def generate(spec: GenSpec) -> ConceptClass:
    """Build the class a spec describes; validates family parameters."""
    family, n = spec.family, spec.n
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if family == "hyperrectangle":
        if spec.points is None:
            raise ValueError("hyperrectangle needs a point list")
        return _hyperrectangle(spec.points)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if family == "full_cube":
        return ConceptClass.full_cube(n)
    if family == "hamming_ball":
        if spec.d is None or not 0 <= spec.d <= n:
            raise ValueError(f"hamming_ball needs 0 <= d <= n, got d={spec.d}")
        return _hamming_ball(n, spec.d)
    if family == "downward_closed":
        d = spec.d if spec.d is not None else n
        density = spec.density if spec.density is not None else 0.3
        return _downward_closed(n, d, density, spec.seed)
    if family == "random_intersection_closed":
        density = spec.density if spec.density is not None else 0.2
        return _random_intersection_closed(n, density, spec.seed, spec.d)
    if family == "monomial_union":
        d = spec.d if spec.d is not None else 2
        count = spec.count if spec.count is not None else 2
        if d < 1 or count < 1:
            raise ValueError("monomial_union needs d >= 1 and count >= 1")
        return _monomial_union(n, d, count, spec.seed)
    if family == "tree":
        return _tree(n, spec.seed)
    if family == "random_extremal_vc2":
        size = spec.size if spec.size is not None else 2 * n
        if size < 1:
            raise ValueError("size must be positive")
        return _random_extremal_vc2(n, size, spec.seed)
    raise AssertionError(f"unhandled family {family}")


# Contracts the property suites may check for each family.  "vc_at_most_d"
# and "vc_equals_d" resolve against the spec's d parameter.
_CONTRACTS = {
    "full_cube": frozenset(
        {"intersection_closed", "shortest_path_closed", "extremal", "maximum"}
    ),
    "hamming_ball": frozenset(
        {
            "intersection_closed",
            "shortest_path_closed",
            "extremal",
            "maximum",
            "vc_equals_d",
        }
    ),
    "downward_closed": frozenset(
        {"intersection_closed", "shortest_path_closed", "extremal", "vc_at_most_d"}
    ),
    "random_intersection_closed": frozenset({"intersection_closed"}),
    "monomial_union": frozenset(
        {"intersection_closed", "shortest_path_closed", "extremal", "vc_at_most_d"}
    ),
    "hyperrectangle": frozenset({"intersection_closed"}),
    "tree": frozenset(
        {"intersection_closed", "shortest_path_closed", "extremal", "maximum"}
    ),
    "random_extremal_vc2": frozenset(
        {"shortest_path_closed", "extremal", "vc_at_most_d"}
    ),
}


@dataclass(frozen=True)
class GeneratedClass:
    spec: GenSpec
    cls: ConceptClass
    contracts: frozenset[str] = field(default_factory=frozenset)


def _derive_seed(seed: int, family: str, index: int) -> int:
    return (seed * 1_000_003 + zlib.crc32(family.encode()) * 1009 + index) & 0x7FFFFFFF


def generate_suite(
    seed: int,
    counts: Mapping[str, int],
    n_range: tuple[int, int] = (3, 10),
    d_max: int = 3,
) -> list[GeneratedClass]:
    """Deterministic suite: ``counts`` maps family name to how many."""
    out: list[GeneratedClass] = []
    for family in FAMILIES:
        for i in range(counts.get(family, 0)):
            item_seed = _derive_seed(seed, family, i)
            rng = random.Random(item_seed)
            n = rng.randint(*n_range)
            d = rng.randint(1, max(1, min(d_max, n)))
            contracts = _CONTRACTS[family]
            if family == "full_cube":
                spec = GenSpec(family, min(n, 4))
            elif family == "hamming_ball":
                spec = GenSpec(family, n, d=d)
            elif family == "downward_closed":
                spec = GenSpec(family, n, seed=item_seed, d=d, density=rng.uniform(0.1, 0.6))
            elif family == "random_intersection_closed":
                spec = GenSpec(
                    family, n, seed=item_seed, d=d, density=rng.uniform(0.05, 0.4)
                )
                contracts = contracts | {"vc_at_most_d"}
            elif family == "monomial_union":
                spec = GenSpec(family, n, seed=item_seed, d=d, count=rng.randint(1, 3))
            elif family == "hyperrectangle":
                k = min(n, 9)
                if rng.random() < 0.67:
                    points = tuple((x,) for x in rng.sample(range(3 * k), k))
                    contracts = contracts | {"extremal", "maximum", "shortest_path_closed"}
                else:
                    points = tuple(
                        (rng.randint(0, 4), rng.randint(0, 4)) for _ in range(k)
                    )
                spec = GenSpec(family, k, seed=item_seed, points=points)
            elif family == "tree":
                spec = GenSpec(family, n, seed=item_seed, d=1)
            elif family == "random_extremal_vc2":
                n2 = min(n, 8)
                spec = GenSpec(
                    family, n2, seed=item_seed, d=2, size=rng.randint(n2, 3 * n2)
                )
            else:
                raise AssertionError(family)
            out.append(GeneratedClass(spec, generate(spec), contracts))
    return out
