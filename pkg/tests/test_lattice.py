"""Intersection-lattice tests: explicit computations against hand counts,
transform invariance, and isomorphism search."""

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from linemoduli.branch import BranchCtx
from linemoduli.errors import InvalidArrangement, InvalidIncidenceSpec
from linemoduli.lattice import (
    IntersectionLattice,
    compute_lattice,
    cover_number,
    expected_lattice,
    lattice_branches,
    lattice_isomorphic,
    make_arrangement,
)
from linemoduli.projective import ProjLine, ProjTransform
from linemoduli.ratpoly import UniPoly

Q = BranchCtx.trivial()


def lat(k, multiples):
    return expected_lattice(k, multiples)


def test_validation_rejects_small_and_proportional():
    with pytest.raises(InvalidArrangement):
        make_arrangement(Q, [(1, 0, 0), (0, 1, 0)])
    with pytest.raises(InvalidArrangement):
        make_arrangement(Q, [(1, 0, 0), (0, 1, 0), (2, 0, 0)])


def test_triangle_and_pencil_counts():
    triangle = compute_lattice(make_arrangement(Q, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    assert triangle.multiples == frozenset()
    assert triangle.n2 == 3
    concurrent = compute_lattice(
        make_arrangement(Q, [(1, 0, 0), (0, 1, 0), (1, -1, 0), (0, 0, 1)])
    )
    assert concurrent.multiples == frozenset({frozenset({1, 2, 3})})
    assert concurrent.n2 == 3
    assert concurrent.profile() == {2: 3, 3: 1}


def test_generic_quadrilateral():
    lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    L = compute_lattice(make_arrangement(Q, lines))
    assert L.profile() == {2: 6}
    assert not L.is_nonreductive


def test_near_pencil_profile():
    # k lines through one point plus a transversal
    k = 5
    lines = [(1, 0, -i) for i in range(k - 1)] + [(0, 1, 0)]
    L = compute_lattice(make_arrangement(Q, lines))
    assert L.profile() == {2: k - 1, k - 1: 1}


def test_expected_lattice_validation():
    with pytest.raises(InvalidIncidenceSpec):
        expected_lattice(5, [[1, 2]])
    with pytest.raises(InvalidIncidenceSpec):
        expected_lattice(5, [[1, 2, 3], [1, 2, 4]])
    with pytest.raises(InvalidIncidenceSpec):
        expected_lattice(3, [[1, 2, 4]])
    L = expected_lattice(5, [[1, 2, 3]])
    assert L.n2 == 10 - 3


def test_counting_identity_on_random_rational_arrangements():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(3, 8)
        lines = set()
        while len(lines) < n:
            triple = (
                Fraction(rng.randint(-4, 4)),
                Fraction(rng.randint(-4, 4)),
                Fraction(rng.randint(-4, 4)),
            )
            if any(triple):
                lines.add(ProjLine.make(Q, triple))
        arr = make_arrangement(Q, [l.coeffs for l in lines])
        L = compute_lattice(arr)
        covered = sum(
            len(m) * (len(m) - 1) // 2 for m in L.multiples
        ) + L.n2
        assert covered == n * (n - 1) // 2


def test_lattice_invariant_under_projective_transforms():
    rng = random.Random(11)
    lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, -1, 0), (1, 2, 3)]
    base = compute_lattice(make_arrangement(Q, lines))
    arr = make_arrangement(Q, lines)
    for _ in range(25):
        while True:
            rows = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
            try:
                T = ProjTransform.make(Q, rows)
                break
            except Exception:
                continue
        moved = make_arrangement(Q, [T.apply_line(l).coeffs for l in arr.lines])
        assert compute_lattice(moved) == base


def test_lattice_branches_skips_degenerate_branch():
    ctx = BranchCtx.of("t", UniPoly.from_roots([1, 2]))
    triples = [
        (UniPoly((1,)), UniPoly(()), UniPoly((1, -1))),  # X + (1-t)... X - (t-1)Z
        (UniPoly((1,)), UniPoly(()), UniPoly(())),  # X
        (UniPoly(()), UniPoly((1,)), UniPoly(())),  # Y
        (UniPoly(()), UniPoly(()), UniPoly((1,))),  # Z
    ]
    results = lattice_branches(ctx, triples)
    outcomes = {c.modulus(0): (None if L is None else L.profile()) for c, L in results}
    assert outcomes[Fraction(-1)] is None  # t = 1: first two lines coincide
    # t = 2: X-Z, X, Z stay concurrent at [0:1:0], Y crosses them
    assert outcomes[Fraction(-2)] == {2: 3, 3: 1}


def test_isomorphism_finds_relabeling():
    a = lat(6, [[1, 2, 3], [3, 4, 5], [1, 5, 6]])
    perm = {1: 4, 2: 6, 3: 2, 4: 5, 5: 1, 6: 3}
    b = lat(6, [[perm[i] for i in m] for m in ([1, 2, 3], [3, 4, 5], [1, 5, 6])])
    res = lattice_isomorphic(a, b)
    assert res.found
    image = frozenset(
        frozenset(res.perm[i] for i in m) for m in a.multiples
    )
    assert image == b.multiples


def test_isomorphism_distinguishes_hexagon_from_two_triangles():
    # same profile and same per-line signatures, different co-occurrence
    hexagon = lat(
        12,
        [[1, 2, 7], [2, 3, 8], [3, 4, 9], [4, 5, 10], [5, 6, 11], [6, 1, 12]],
    )
    two_triangles = lat(
        12,
        [[1, 2, 7], [2, 3, 8], [3, 1, 9], [4, 5, 10], [5, 6, 11], [6, 4, 12]],
    )
    res = lattice_isomorphic(hexagon, two_triangles)
    assert not res.found
    assert res.reason is not None


def test_isomorphism_rejects_different_profiles():
    a = lat(5, [[1, 2, 3]])
    b = lat(5, [[1, 2, 3, 4]])
    res = lattice_isomorphic(a, b)
    assert not res.found and "profiles" in res.reason


@given(st.randoms(use_true_random=False))
@settings(max_examples=20, deadline=None)
def test_isomorphism_recovers_random_relabelings(rng):
    multiples = [[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 5, 6], [1, 6, 7]]
    a = lat(8, multiples)
    labels = list(range(1, 9))
    rng.shuffle(labels)
    perm = {i + 1: labels[i] for i in range(8)}
    b = lat(8, [[perm[i] for i in m] for m in multiples])
    res = lattice_isomorphic(a, b)
    assert res.found
    image = frozenset(frozenset(res.perm[i] for i in m) for m in a.multiples)
    assert image == b.multiples


def test_cover_number():
    pencil3 = lat(9, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    size, cover = cover_number(pencil3)
    assert size == 3
    spread = lat(9, [[1, 2, 3], [4, 5, 6]])
    assert cover_number(spread) is None
    one = lat(4, [[1, 2, 3, 4]])
    assert cover_number(one)[0] == 1
