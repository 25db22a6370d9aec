import random

import pytest

from cubeclass import ConceptClass, Vertex, hamming, leq
from cubeclass.analysis import classify
from cubeclass.closure import intersection_closure, is_intersection_closed
from cubeclass.core import is_shortest_path_closed
from cubeclass.embedding import (
    CoordinateOrdering,
    EmbeddingError,
    NotIntersectionClosed,
    lambda_path,
    projection_cardinality_bound,
    shortest_path_closure,
    verify_embedding,
)
from cubeclass.gen import GenSpec, generate

import oracles

V = Vertex.from_bitstring


def test_ordering_validation():
    CoordinateOrdering((2, 1, 3))
    with pytest.raises(ValueError):
        CoordinateOrdering((1, 1, 2))
    assert CoordinateOrdering.identity(4).perm == (1, 2, 3, 4)
    assert sorted(CoordinateOrdering.shuffled(6, 3).perm) == list(range(1, 7))


def test_lambda_path_examples():
    ident = CoordinateOrdering.identity(4)
    path = lambda_path(V("1101"), V("0100"), ident)
    assert [str(v) for v in path] == ["1101", "0101", "0100"]
    v = V("0110")
    assert lambda_path(v, v, CoordinateOrdering.identity(4)) == [v]
    path = lambda_path(V("111"), V("000"), CoordinateOrdering((3, 1, 2)))
    assert [str(v) for v in path] == ["111", "110", "010", "000"]


def test_lambda_path_precondition():
    with pytest.raises(ValueError):
        lambda_path(V("100"), V("010"), CoordinateOrdering.identity(3))
    with pytest.raises(ValueError):
        lambda_path(V("110"), V("100"), CoordinateOrdering.identity(4))


def test_lambda_path_is_a_monotone_geodesic():
    rng = random.Random(30)
    for _ in range(150):
        n = rng.randint(1, 10)
        v = oracles.random_vertex(rng, n)
        w = Vertex(v.bits & rng.randrange(1 << n), n)
        ordering = CoordinateOrdering.shuffled(n, rng.randrange(999))
        path = lambda_path(v, w, ordering)
        assert path[0] == v and path[-1] == w
        assert len(path) == hamming(v, w) + 1
        for a, b in zip(path, path[1:]):
            assert hamming(a, b) == 1
            assert leq(b, a)


def test_shortest_path_closure_examples():
    full = ConceptClass.full_cube(3)
    assert shortest_path_closure(full) == full

    grown = intersection_closure(ConceptClass.from_bitstrings(["110", "011"]))
    assert grown == ConceptClass.from_bitstrings(["110", "011", "010"])
    assert shortest_path_closure(grown) == grown

    C = ConceptClass.from_bitstrings(["1100", "0011", "0000"])
    got = shortest_path_closure(C)
    assert got == ConceptClass.from_bitstrings(
        ["1100", "0100", "0011", "0001", "0000"]
    )


def test_shortest_path_closure_rejects_non_closed_input():
    with pytest.raises(NotIntersectionClosed):
        shortest_path_closure(ConceptClass.from_bitstrings(["110", "011"]))


def test_verify_embedding_examples():
    full = ConceptClass.full_cube(2)
    rep = verify_embedding(full, full)
    assert rep.ok and rep.ratio == 1.0

    C = ConceptClass.from_bitstrings(["1100", "0011", "0000"])
    star = shortest_path_closure(C)
    rep = verify_embedding(C, star)
    assert rep.ok
    assert rep.input_vc == 1 and rep.output_vc == 1
    assert rep.intersection_closed and rep.shortest_path_closed and rep.extremal

    with pytest.raises(ValueError):
        verify_embedding(full, ConceptClass.from_bitstrings(["00"]))


def test_verify_embedding_strict_failure():
    C = ConceptClass.from_bitstrings(["00"])
    bad = ConceptClass.from_bitstrings(["00", "11"])
    with pytest.raises(EmbeddingError) as err:
        verify_embedding(C, bad)
    assert not err.value.report.ok
    rep = verify_embedding(C, bad, strict=False)
    assert not rep.shortest_path_closed


def test_guarantees_hold_for_every_ordering():
    rng = random.Random(31)
    families = ("downward_closed", "random_intersection_closed", "monomial_union")
    for i in range(40):
        n = rng.randint(2, 8)
        spec = GenSpec(
            families[i % 3],
            n,
            seed=100 + i,
            d=rng.randint(1, min(3, n)),
            density=rng.uniform(0.1, 0.4),
            count=2,
        )
        C = generate(spec)
        for ordering in (
            CoordinateOrdering.identity(n),
            CoordinateOrdering.shuffled(n, i),
            CoordinateOrdering.shuffled(n, i + 1000),
        ):
            star = shortest_path_closure(C, ordering)
            assert C.bitset <= star.bitset
            assert len(star) <= n * len(C) ** 2
            assert is_intersection_closed(star)[0]
            assert is_shortest_path_closed(star)[0]
            rep = classify(star)
            assert rep.is_extremal
            assert rep.vc_dimension <= 11 * max(classify(C).vc_dimension, 0)


def test_intersection_closed_plus_spc_implies_extremal():
    # the two hypotheses of the extremality theorem, checked independently
    rng = random.Random(32)
    hits = 0
    for _ in range(200):
        n = rng.randint(1, 5)
        C = intersection_closure(oracles.random_class(rng, n))
        if not is_shortest_path_closed(C)[0]:
            continue
        hits += 1
        assert classify(C).is_extremal
    assert hits >= 50


def test_projection_cardinality_bound_values():
    assert projection_cardinality_bound(1) == 792
    assert projection_cardinality_bound(2) == 709676
    assert projection_cardinality_bound(3) == 597569346
    assert projection_cardinality_bound(1) < 2 ** 11
    assert projection_cardinality_bound(2) < 2 ** 22
    assert projection_cardinality_bound(3) < 2 ** 33
    with pytest.raises(ValueError):
        projection_cardinality_bound(0)


def test_report_serialisation():
    C = ConceptClass.from_bitstrings(["1100", "0011", "0000"])
    rep = verify_embedding(C, shortest_path_closure(C))
    d = rep.to_json_dict()
    assert d["ok"] is True and d["ratio"] == 1.0
    assert "ratio=1.0000" in rep.to_text()
