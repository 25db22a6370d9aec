"""Core data model for finite concept classes in the binary n-cube.

A vertex is a fixed-width bit vector packed into a machine word: bit ``i``
(0-based) stores coordinate ``i + 1`` of the 1-based coordinate set
``[n] = {1, ..., n}``.  String forms such as ``"1101"`` list coordinate 1
leftmost.  The canonical ordering used everywhere (file output, tie-breaks)
is lexicographic on that string form.

Everything here is immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

MAX_N = 63

# Hard cap for operations that materialise all 2^n vertices.
_ENUMERATION_CAP = 20


class DimensionMismatch(ValueError):
    """Operands live in cubes of different ambient dimension."""


class FormatError(ValueError):
    """Malformed .cls data; ``line`` is the 1-based offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _mirror(bits: int, n: int) -> int:
    """Key giving bitstring-lexicographic order (coordinate 1 leftmost)."""
    m = 0
    for i in range(n):
        m = (m << 1) | ((bits >> i) & 1)
    return m


def _gather(bits: int, positions: tuple[int, ...]) -> int:
    """Pack the bits at the given 0-based positions into a small word."""
    out = 0
    for k, p in enumerate(positions):
        out |= ((bits >> p) & 1) << k
    return out


def _scatter(packed: int, positions: tuple[int, ...]) -> int:
    """Inverse of :func:`_gather`: spread a small word onto positions."""
    out = 0
    for k, p in enumerate(positions):
        out |= ((packed >> k) & 1) << p
    return out


def _positions(n: int, coords: Iterable[int]) -> tuple[int, ...]:
    """Validate 1-based coordinates against [n], return sorted 0-based bits."""
    out = sorted(set(coords))
    if not out:
        raise ValueError("coordinate set must be non-empty")
    if out[0] < 1 or out[-1] > n:
        raise ValueError(f"coordinates {out} not within [1, {n}]")
    return tuple(c - 1 for c in out)


@dataclass(frozen=True)
class Vertex:
    """A point of {0,1}^n; ``bits`` holds coordinate i+1 in bit i."""

    bits: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"n must be in [1, {MAX_N}], got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} outside {self.n}-cube")

    @classmethod
    def from_bitstring(cls, s: str) -> "Vertex":
        if not s or any(ch not in "01" for ch in s):
            raise ValueError(f"not a bitstring: {s!r}")
        bits = 0
        for i, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << i
        return cls(bits, len(s))

    def coord(self, i: int) -> int:
        """Value of the 1-based coordinate i."""
        if not 1 <= i <= self.n:
            raise ValueError(f"coordinate {i} not within [1, {self.n}]")
        return (self.bits >> (i - 1)) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __repr__(self) -> str:
        return f"Vertex({str(self)!r})"


@dataclass(frozen=True)
class Edge:
    """One-inclusion edge: endpoints at Hamming distance 1.

    ``u`` is the endpoint with value 0 on the differing coordinate, which is
    the edge's ``colour``.
    """

    u: Vertex
    v: Vertex
    colour: int

    def __post_init__(self):
        if self.u.n != self.v.n:
            raise DimensionMismatch("edge endpoints disagree on n")
        diff = self.u.bits ^ self.v.bits
        if diff.bit_count() != 1:
            raise ValueError("edge endpoints are not at Hamming distance 1")
        if diff != 1 << (self.colour - 1):
            raise ValueError("colour does not match the differing coordinate")
        if self.u.bits & diff:
            raise ValueError("u must be the endpoint with 0 on the colour")

    @classmethod
    def between(cls, a: Vertex, b: Vertex) -> "Edge":
        diff = a.bits ^ b.bits
        if diff.bit_count() != 1:
            raise ValueError("vertices are not at Hamming distance 1")
        colour = diff.bit_length()
        return cls(a, b, colour) if not a.bits & diff else cls(b, a, colour)


@dataclass(frozen=True)
class Cube:
    """Subcube given by its varying coordinates (colours) and fixed anchor.

    ``anchor_bits`` carries the fixed values, with zero bits on all colour
    positions.  A vertex is the 0-cube with no colours.
    """

    n: int
    colours: frozenset[int]
    anchor_bits: int

    def __post_init__(self):
        if self.colours and (min(self.colours) < 1 or max(self.colours) > self.n):
            raise ValueError(f"colours {sorted(self.colours)} not within [1, {self.n}]")
        if self.anchor_bits < 0 or self.anchor_bits >> self.n:
            raise ValueError("anchor outside the n-cube")
        if self.anchor_bits & self.colour_mask:
            raise ValueError("anchor sets bits on colour coordinates")

    @classmethod
    def vertex_cube(cls, v: Vertex) -> "Cube":
        return cls(v.n, frozenset(), v.bits)

    @property
    def dimension(self) -> int:
        return len(self.colours)

    @property
    def colour_mask(self) -> int:
        m = 0
        for c in self.colours:
            m |= 1 << (c - 1)
        return m

    @property
    def domain_mask(self) -> int:
        return ((1 << self.n) - 1) ^ self.colour_mask

    def contains(self, v: Vertex) -> bool:
        if v.n != self.n:
            raise DimensionMismatch("vertex and cube disagree on n")
        return (v.bits & self.domain_mask) == self.anchor_bits

    def bit_vertices(self) -> Iterator[int]:
        positions = tuple(c - 1 for c in sorted(self.colours))
        for pattern in range(1 << len(positions)):
            yield self.anchor_bits | _scatter(pattern, positions)

    def vertices(self) -> Iterator[Vertex]:
        for b in self.bit_vertices():
            yield Vertex(b, self.n)

    def anchor_items(self) -> tuple[tuple[int, int], ...]:
        dm = self.domain_mask
        return tuple(
            (i + 1, (self.anchor_bits >> i) & 1)
            for i in range(self.n)
            if (dm >> i) & 1
        )

    def as_json_dict(self) -> dict:
        return {
            "colours": sorted(self.colours),
            "anchor": {str(c): b for c, b in self.anchor_items()},
        }

    @classmethod
    def from_json_dict(cls, n: int, d: dict) -> "Cube":
        colours = frozenset(int(c) for c in d["colours"])
        anchor = 0
        for c, b in d["anchor"].items():
            if int(b) not in (0, 1):
                raise ValueError("anchor bits must be 0 or 1")
            anchor |= int(b) << (int(c) - 1)
        return cls(n, colours, anchor)

    def sort_key(self):
        return (self.dimension, tuple(sorted(self.colours)), _mirror(self.anchor_bits, self.n))

    def __repr__(self) -> str:
        fixed = ",".join(f"{c}={b}" for c, b in self.anchor_items())
        return f"Cube(colours={sorted(self.colours)}, anchor=[{fixed}])"


class ConceptClass:
    """Finite, deduplicated set of vertices of {0,1}^n.

    Immutable by convention; ``bitset`` is the raw frozenset of packed words
    and is the representation all algorithms in this package work on.
    """

    __slots__ = ("n", "bitset")

    def __init__(self, n: int, members: Iterable[Union[Vertex, int]] = ()):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must be in [1, {MAX_N}], got {n}")
        bits = set()
        for m in members:
            if isinstance(m, Vertex):
                if m.n != n:
                    raise DimensionMismatch(f"vertex has n={m.n}, class has n={n}")
                bits.add(m.bits)
            else:
                b = int(m)
                if b < 0 or b >> n:
                    raise ValueError(f"member {b:#x} outside the {n}-cube")
                bits.add(b)
        self.n = n
        self.bitset = frozenset(bits)

    @classmethod
    def from_bitstrings(cls, strings: Iterable[str], n: Optional[int] = None) -> "ConceptClass":
        vs = [Vertex.from_bitstring(s) for s in strings]
        if n is None:
            if not vs:
                raise ValueError("cannot infer n from an empty sequence")
            n = vs[0].n
        return cls(n, vs)

    @classmethod
    def full_cube(cls, n: int) -> "ConceptClass":
        if n > _ENUMERATION_CAP:
            raise ValueError(f"refusing to materialise 2^{n} vertices")
        return cls(n, range(1 << n))

    def sorted_bits(self) -> list[int]:
        n = self.n
        return sorted(self.bitset, key=lambda b: _mirror(b, n))

    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(Vertex(b, self.n) for b in self.sorted_bits())

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.vertices())

    def __len__(self) -> int:
        return len(self.bitset)

    def __contains__(self, v: Vertex) -> bool:
        if v.n != self.n:
            raise DimensionMismatch(f"vertex has n={v.n}, class has n={self.n}")
        return v.bits in self.bitset

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConceptClass):
            return NotImplemented
        return self.n == other.n and self.bitset == other.bitset

    def __hash__(self) -> int:
        return hash((self.n, self.bitset))

    def __repr__(self) -> str:
        shown = [str(v) for v in list(self)[:6]]
        if len(self) > 6:
            shown.append("...")
        return f"ConceptClass(n={self.n}, {{{', '.join(shown)}}})"


def hamming(u: Vertex, v: Vertex) -> int:
    """Number of coordinates where u and v differ."""
    if u.n != v.n:
        raise DimensionMismatch(f"n={u.n} vs n={v.n}")
    return (u.bits ^ v.bits).bit_count()


def intersect(u: Vertex, v: Vertex) -> Vertex:
    """Coordinate-wise minimum (bitwise Boolean multiplication)."""
    if u.n != v.n:
        raise DimensionMismatch(f"n={u.n} vs n={v.n}")
    return Vertex(u.bits & v.bits, u.n)


def leq(u: Vertex, v: Vertex) -> bool:
    """True iff u lies between v and the all-zero origin."""
    if u.n != v.n:
        raise DimensionMismatch(f"n={u.n} vs n={v.n}")
    return not (u.bits & ~v.bits)


def project(C: ConceptClass, J: Iterable[int]) -> ConceptClass:
    """Coordinate projection onto J, renumbered to [|J|] in sorted order."""
    positions = _positions(C.n, J)
    return ConceptClass(len(positions), {_gather(b, positions) for b in C.bitset})


def complement(C: ConceptClass) -> ConceptClass:
    """All vertices of the n-cube not in C (materialised; small n only)."""
    if C.n > _ENUMERATION_CAP:
        raise ValueError(f"refusing to materialise 2^{C.n} vertices")
    return ConceptClass(C.n, set(range(1 << C.n)) - C.bitset)


def one_inclusion_edges(C: ConceptClass) -> frozenset[Edge]:
    """All Hamming-distance-1 pairs inside C, with their colours."""
    n, bits = C.n, C.bitset
    out = []
    for b in bits:
        for p in range(n):
            m = 1 << p
            if not b & m and (b | m) in bits:
                out.append(Edge(Vertex(b, n), Vertex(b | m, n), p + 1))
    return frozenset(out)


def _cube_table(n: int, bits: frozenset[int]) -> dict[int, set[int]]:
    """All cubes fully contained in the class, as colour_mask -> anchors.

    Built level by level: a (k+1)-cube exists iff its two faces along its
    largest colour exist, so each cube is generated exactly once by
    extending with positions above the current maximum.
    """
    table: dict[int, set[int]] = {0: set(bits)}
    current = {0: table[0]}
    while current:
        nxt: dict[int, set[int]] = {}
        for cmask, anchors in current.items():
            for p in range(cmask.bit_length(), n):
                m = 1 << p
                merged = {a for a in anchors if not a & m and (a | m) in anchors}
                if merged:
                    nxt[cmask | m] = merged
        table.update(nxt)
        current = nxt
    return table


def _is_maximal(table: dict[int, set[int]], n: int, cmask: int, anchor: int) -> bool:
    anchors = table[cmask]
    for p in range(n):
        m = 1 << p
        if not cmask & m and (anchor ^ m) in anchors:
            return False
    return True


def enumerate_cubes(C: ConceptClass, maximal_only: bool = False) -> frozenset[Cube]:
    """Every subcube of the n-cube whose vertices all lie in C.

    Vertices count as 0-cubes.  With ``maximal_only``, keep only cubes not
    properly contained in a larger cube of C.
    """
    n = C.n
    table = _cube_table(n, C.bitset)
    out = []
    for cmask, anchors in table.items():
        colours = frozenset(p + 1 for p in range(n) if (cmask >> p) & 1)
        for a in anchors:
            if maximal_only and not _is_maximal(table, n, cmask, a):
                continue
            out.append(Cube(n, colours, a))
    return frozenset(out)


def is_shortest_path_closed(C: ConceptClass) -> tuple[bool, Optional[tuple[Vertex, Vertex]]]:
    """Whether every pair of C is joined by a Hamming-geodesic inside C.

    Checks that every pair has a first step: a neighbour of one endpoint,
    inside C, strictly closer to the other.  Induction on distance makes
    this equivalent to geodesic existence.  Returns a witness pair when it
    fails.
    """
    n, bits = C.n, C.bitset
    vs = sorted(bits)
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            diff = u ^ v
            if diff.bit_count() <= 1:
                continue
            d, found = diff, False
            while d:
                m = d & -d
                if (u ^ m) in bits:
                    found = True
                    break
                d ^= m
            if not found:
                return False, (Vertex(u, n), Vertex(v, n))
    return True, None


def reduction_tail(C: ConceptClass, J: Iterable[int]) -> tuple[ConceptClass, ConceptClass]:
    """Split project(C, J) by fibre size: non-unique pre-images vs unique."""
    positions = _positions(C.n, J)
    counts: dict[int, int] = {}
    for b in C.bitset:
        key = _gather(b, positions)
        counts[key] = counts.get(key, 0) + 1
    k = len(positions)
    red = ConceptClass(k, {key for key, c in counts.items() if c > 1})
    tail = ConceptClass(k, {key for key, c in counts.items() if c == 1})
    return red, tail


# --- .cls text format -----------------------------------------------------
#
# line 1:  n=<int>
# then one length-n bitstring per line, leftmost character = coordinate 1;
# '#' starts a comment, blank lines are ignored.


def dumps_cls(C: ConceptClass) -> str:
    lines = [f"n={C.n}"]
    lines.extend(str(v) for v in C)
    return "\n".join(lines) + "\n"


def loads_cls(text: str) -> ConceptClass:
    n: Optional[int] = None
    members: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            if not line.startswith("n="):
                raise FormatError("expected header 'n=<int>'", lineno)
            try:
                n = int(line[2:])
            except ValueError:
                raise FormatError(f"bad dimension {line[2:]!r}", lineno) from None
            if not 1 <= n <= MAX_N:
                raise FormatError(f"n={n} outside [1, {MAX_N}]", lineno)
            continue
        if len(line) != n or any(ch not in "01" for ch in line):
            raise FormatError(f"expected a length-{n} bitstring, got {line!r}", lineno)
        members.append(Vertex.from_bitstring(line).bits)
    if n is None:
        raise FormatError("missing 'n=<int>' header")
    return ConceptClass(n, members)


def read_cls(path) -> ConceptClass:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_cls(fh.read())


def write_cls(C: ConceptClass, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_cls(C))
