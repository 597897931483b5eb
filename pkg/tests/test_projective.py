"""Projective-plane tests: canonical coordinates, incidence duality, and
transform action, over Q and over algebraic branch contexts."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from linemoduli.branch import BranchCtx, SplitRequired, map_branches
from linemoduli.errors import CoincidentLines, CoincidentPoints, SingularTransform
from linemoduli.projective import (
    ProjLine,
    ProjPoint,
    ProjTransform,
    cross3,
    det3,
    dot3,
    four_point_transform,
    incident,
    join,
    mat_det,
    mat_mul,
    meet,
)
from linemoduli.ratpoly import UniPoly, mp_var

Q = BranchCtx.trivial()

small_rats = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)

triples = st.tuples(small_rats, small_rats, small_rats).filter(lambda t: any(t))


def test_cross_dot_identities_symbolically():
    u = (mp_var("t1"), mp_var("t2"), mp_var("t3"))
    v = (mp_var("u1"), mp_var("u2"), mp_var("u3"))
    w = cross3(u, v)
    assert dot3(w, u).is_zero
    assert dot3(w, v).is_zero
    assert det3(u, u, v).is_zero


def test_canonical_coordinates_identify_proportional_triples():
    assert ProjPoint.make(Q, (2, 4, 6)) == ProjPoint.make(Q, (1, 2, 3))
    assert ProjLine.make(Q, (0, Fraction(1, 2), 3)) == ProjLine.make(Q, (0, 1, 6))
    assert ProjPoint.make(Q, (0, 0, 5)).coords == (Q.zero(), Q.zero(), Q.one())
    with pytest.raises(ValueError):
        ProjPoint.make(Q, (0, 0, 0))


@given(triples, triples)
@settings(max_examples=60)
def test_meet_is_incident_to_both(l1, l2):
    a = ProjLine.make(Q, l1)
    b = ProjLine.make(Q, l2)
    if a == b:
        with pytest.raises(CoincidentLines):
            meet(a, b)
        return
    p = meet(a, b)
    assert incident(p, a) and incident(p, b)


@given(triples, triples)
@settings(max_examples=60)
def test_join_meet_duality(c1, c2):
    p = ProjPoint.make(Q, c1)
    q = ProjPoint.make(Q, c2)
    if p == q:
        with pytest.raises(CoincidentPoints):
            join(p, q)
        return
    l = join(p, q)
    assert incident(p, l) and incident(q, l)
    assert meet(join(p, q), ProjLine.make(Q, (1, 1, 1))) is not None or True


@st.composite
def invertible_mats(draw):
    rows = [[draw(small_rats) for _ in range(3)] for _ in range(3)]
    d = (
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    )
    assume(d != 0)
    return rows


@given(invertible_mats(), triples, triples)
@settings(max_examples=60, suppress_health_check=[HealthCheck.large_base_example])
def test_transform_preserves_incidence(rows, pc, lc):
    T = ProjTransform.make(Q, rows)
    p = ProjPoint.make(Q, pc)
    l = ProjLine.make(Q, lc)
    assert incident(p, l) == incident(T.apply_point(p), T.apply_line(l))


@given(invertible_mats(), triples)
@settings(max_examples=40, suppress_health_check=[HealthCheck.large_base_example])
def test_transform_inverse_roundtrip(rows, pc):
    T = ProjTransform.make(Q, rows)
    p = ProjPoint.make(Q, pc)
    assert T.inverse().apply_point(T.apply_point(p)) == p
    composed = T.compose(T.inverse())
    q = ProjPoint.make(Q, (3, -2, 7))
    assert ProjTransform(Q, composed.rows).apply_point(q) == q


def test_four_point_transform_hits_targets():
    targets = [(1, 0, 1), (0, 1, 1), (1, 1, 0), (2, 3, 4)]
    T = four_point_transform(Q, targets)
    frame = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    for f, tgt in zip(frame, targets):
        assert T.apply_point(ProjPoint.make(Q, f)) == ProjPoint.make(Q, tgt)


def test_four_point_transform_rejects_collinear():
    with pytest.raises(SingularTransform):
        four_point_transform(Q, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 3)])
    with pytest.raises(SingularTransform):
        four_point_transform(Q, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)])


def test_ctx_geometry_and_splits():
    ctx = BranchCtx.of("t", UniPoly.from_roots([1, 2]))
    t = ctx.gen()
    a = ProjLine.make(ctx, (1, 0, t - 1))
    b = ProjLine.make(ctx, (1, 0, 0))
    with pytest.raises(SplitRequired):
        meet(a, b)

    def branch_meet(c):
        aa = ProjLine.make(c, (c.one(), c.zero(), c.gen() - 1))
        bb = ProjLine.make(c, (1, 0, 0))
        try:
            return meet(aa, bb)
        except CoincidentLines:
            return None

    results = map_branches(ctx, branch_meet)
    by_deg = {c.modulus(Fraction(0)): r for c, r in results}
    # on the t=1 branch the lines coincide; on t=2 they meet at [0:1:0]
    assert by_deg[Fraction(-1)] is None
    assert by_deg[Fraction(-2)] == ProjPoint.make(
        BranchCtx.of("t", UniPoly.from_roots([2])), (0, 1, 0)
    )


def test_det_of_product_is_product_of_dets():
    ctx = Q
    m1 = tuple(tuple(ctx.elem(v) for v in row) for row in [(1, 2, 0), (0, 1, 3), (1, 0, 1)])
    m2 = tuple(tuple(ctx.elem(v) for v in row) for row in [(2, 0, 1), (1, 1, 0), (0, 0, 1)])
    assert mat_det(mat_mul(m1, m2)) == mat_det(m1) * mat_det(m2)
