import random

import pytest

from cubeclass import ConceptClass, Vertex, is_shortest_path_closed, project
from cubeclass.analysis import vc_dimension
from cubeclass.closure import (
    KCloseCertificate,
    certificate_is_valid,
    intersection_closure,
    is_intersection_closed,
    k_close_condition,
    min_closure_vc_bruteforce,
    min_k_close,
    reorient,
)
from cubeclass.gen import GenSpec, generate

import oracles

V = Vertex.from_bitstring


def test_closure_examples():
    C = ConceptClass.from_bitstrings(["110", "101", "011"])
    got = intersection_closure(C)
    assert got == ConceptClass.from_bitstrings(
        ["110", "101", "011", "100", "010", "001", "000"]
    )
    assert intersection_closure(got) == got  # fixpoint
    single = ConceptClass.from_bitstrings(["1011"])
    assert intersection_closure(single) == single
    with pytest.raises(ValueError):
        intersection_closure(ConceptClass(3))


def test_closure_contains_product_of_all_members():
    rng = random.Random(20)
    for _ in range(60):
        n = rng.randint(1, 8)
        C = oracles.random_class(rng, n)
        closed = intersection_closure(C)
        meet = 0xFFFFFFFF
        for b in C.bitset:
            meet &= b
        assert meet in closed.bitset
        assert C.bitset <= closed.bitset
        assert is_intersection_closed(closed)[0]


def test_closure_matches_oracle():
    rng = random.Random(21)
    for _ in range(60):
        n = rng.randint(1, 7)
        C = oracles.random_class(rng, n)
        assert intersection_closure(C) == oracles.brute_closure(C)


def test_closure_minimality_against_grown_supersets():
    rng = random.Random(22)
    for _ in range(40):
        n = rng.randint(2, 7)
        C = oracles.random_class(rng, n, size=rng.randint(1, 6))
        closed = intersection_closure(C)
        # grow a random intersection-closed superset of C
        extra = set(C.bitset) | {rng.randrange(1 << n) for _ in range(3)}
        D = intersection_closure(ConceptClass(n, extra))
        assert closed.bitset <= D.bitset


def test_closure_commutes_with_projection():
    rng = random.Random(23)
    for _ in range(80):
        n = rng.randint(2, 8)
        C = oracles.random_class(rng, n, size=rng.randint(1, 20))
        J = rng.sample(range(1, n + 1), rng.randint(1, n))
        left = intersection_closure(project(C, J))
        right = project(intersection_closure(C), J)
        assert left == right


def test_closure_preserves_shortest_path_closedness():
    # generated shortest-path-closed classes stay so after closure
    rng = random.Random(24)
    checked = 0
    for i in range(60):
        family = ("tree", "downward_closed", "monomial_union", "hamming_ball")[i % 4]
        n = rng.randint(2, 7)
        spec = GenSpec(
            family,
            n,
            seed=i,
            d=rng.randint(1, min(3, n)),
            density=0.4,
            count=2,
        )
        C = generate(spec)
        assert is_shortest_path_closed(C)[0]
        closed = intersection_closure(C)
        assert is_shortest_path_closed(closed)[0]
        checked += 1
    assert checked == 60


def test_reorient_examples_and_invariants():
    rng = random.Random(25)
    C = ConceptClass.from_bitstrings(["1101", "0011"])
    assert reorient(C, V("0000")) == C
    assert reorient(ConceptClass.from_bitstrings(["11"]), V("11")) == (
        ConceptClass.from_bitstrings(["00"])
    )
    for _ in range(40):
        n = rng.randint(1, 6)
        C = oracles.random_class(rng, n)
        o = oracles.random_vertex(rng, n)
        R = reorient(C, o)
        assert reorient(R, o) == C  # involution
        assert vc_dimension(R) == vc_dimension(C)
        assert len(R) == len(C)


def test_min_closure_vc_examples():
    tri = ConceptClass.from_bitstrings(["00", "01", "10"])
    d, origin = min_closure_vc_bruteforce(tri)
    assert d == 1 and str(origin) == "00"
    full = ConceptClass.full_cube(3)
    assert min_closure_vc_bruteforce(full)[0] == 3
    single = ConceptClass.from_bitstrings(["10110"])
    assert min_closure_vc_bruteforce(single)[0] == 0


def test_k_close_examples():
    tri = ConceptClass.from_bitstrings(["00", "01", "10"])
    cert = k_close_condition(tri, 1)
    assert cert is not None and certificate_is_valid(tri, cert)
    # pinned search order: centres lexicographic, exact anchor then one-flips
    assert cert.to_json_dict() == {
        "k": 1,
        "v": "01",
        "cubes": [{"colours": [], "anchor": {"1": 1, "2": 1}}],
    }
    assert k_close_condition(tri, 0) is None
    assert min_k_close(tri) == 1

    full = ConceptClass.full_cube(3)
    assert k_close_condition(full, 2) is None
    vac = k_close_condition(full, 3)
    assert vac is not None and vac.cubes == () and certificate_is_valid(full, vac)
    assert min_k_close(full) == 3


def test_k_close_hamming_ball_example():
    for n, d in [(4, 1), (4, 2), (5, 2), (5, 3)]:
        ball = generate(GenSpec("hamming_ball", n, d=d))
        assert min_k_close(ball) == d
        assert min_closure_vc_bruteforce(ball)[0] == d


def test_k_close_monotone_in_k():
    rng = random.Random(26)
    for _ in range(30):
        n = rng.randint(1, 4)
        C = oracles.random_class(rng, n)
        k = min_k_close(C)
        for k2 in range(k, n + 1):
            assert k_close_condition(C, k2) is not None
        for k2 in range(0, k):
            assert k_close_condition(C, k2) is None


def test_theorem_equivalence_small_random():
    rng = random.Random(27)
    for _ in range(150):
        n = rng.randint(1, 4)
        C = oracles.random_class(rng, n)
        assert min_k_close(C) == min_closure_vc_bruteforce(C)[0]


def test_certificate_json_round_trip():
    tri = ConceptClass.from_bitstrings(["00", "01", "10"])
    cert = k_close_condition(tri, 1)
    back = KCloseCertificate.from_json_dict(2, cert.to_json_dict())
    assert back == cert and certificate_is_valid(tri, back)


def test_certificate_validator_rejects_wrong_certificates():
    tri = ConceptClass.from_bitstrings(["00", "01", "10"])
    cert = k_close_condition(tri, 1)
    # a cube that meets the class is not a certificate
    from cubeclass import Cube

    bad = KCloseCertificate(1, cert.centre, (Cube(2, frozenset(), 0b00),))
    assert not certificate_is_valid(tri, bad)
    # wrong cube count
    assert not certificate_is_valid(tri, KCloseCertificate(1, cert.centre, ()))


def test_sweep_guards():
    C = ConceptClass(17, [0])
    with pytest.raises(ValueError):
        min_closure_vc_bruteforce(C)
    with pytest.raises(ValueError):
        k_close_condition(C, 1)
    with pytest.raises(ValueError):
        min_k_close(C)
    assert min_k_close(C, force=True) == 0
