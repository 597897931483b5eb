"""Projective plane over a branch context.

The raw vector helpers (dot3, cross3, det3) are generic over any
commutative ring elements supporting +, -, *; the solver uses them with
MultiPoly entries, the lattice layer with CtxElem entries.

Points and lines carry canonical homogeneous coordinates: the first
coordinate certified nonzero is scaled to 1, so proportional triples
compare equal. All zero tests funnel through branch verdicts, so working
over a reducible modulus raises SplitRequired for the driver to fork.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .branch import BranchCtx, CtxElem, invert, is_nonzero_or_split
from .errors import CoincidentLines, CoincidentPoints, SingularTransform
from .ratpoly import UniPoly

# ---------------------------------------------------------------------------
# Generic vector algebra
# ---------------------------------------------------------------------------


def dot3(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross3(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det3(r0, r1, r2):
    return dot3(r0, cross3(r1, r2))


# ---------------------------------------------------------------------------
# Canonical points and lines over a context
# ---------------------------------------------------------------------------

Triple = tuple[CtxElem, CtxElem, CtxElem]


def _coerce_triple(ctx: BranchCtx, triple: Sequence) -> Triple:
    if len(triple) != 3:
        raise ValueError("homogeneous coordinates need exactly 3 entries")
    return tuple(ctx.elem(x) for x in triple)


def _canonicalize(triple: Triple) -> Triple:
    for i, c in enumerate(triple):
        if is_nonzero_or_split(c):
            if i == 0 and c == c.ctx.one():
                return triple
            inv = invert(c)
            return tuple(x * inv for x in triple)
    raise ValueError("zero homogeneous triple")


@dataclass(frozen=True)
class ProjPoint:
    ctx: BranchCtx
    coords: Triple

    @staticmethod
    def make(ctx: BranchCtx, triple: Sequence) -> "ProjPoint":
        return ProjPoint(ctx, _canonicalize(_coerce_triple(ctx, triple)))

    def __repr__(self) -> str:
        return f"ProjPoint{self.coords}"


@dataclass(frozen=True)
class ProjLine:
    ctx: BranchCtx
    coeffs: Triple

    @staticmethod
    def make(ctx: BranchCtx, triple: Sequence) -> "ProjLine":
        return ProjLine(ctx, _canonicalize(_coerce_triple(ctx, triple)))

    def __repr__(self) -> str:
        return f"ProjLine{self.coeffs}"


def meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    raw = cross3(l1.coeffs, l2.coeffs)
    try:
        return ProjPoint(l1.ctx, _canonicalize(raw))
    except ValueError:
        raise CoincidentLines(f"{l1} and {l2} are proportional") from None


def join(p1: ProjPoint, p2: ProjPoint) -> ProjLine:
    raw = cross3(p1.coords, p2.coords)
    try:
        return ProjLine(p1.ctx, _canonicalize(raw))
    except ValueError:
        raise CoincidentPoints(f"{p1} and {p2} are proportional") from None


def incident(p: ProjPoint, l: ProjLine) -> bool:
    return not is_nonzero_or_split(dot3(p.coords, l.coeffs))


# ---------------------------------------------------------------------------
# Projective transforms
# ---------------------------------------------------------------------------

Mat3 = tuple[Triple, Triple, Triple]


def _mat_coerce(ctx: BranchCtx, rows: Sequence[Sequence]) -> Mat3:
    return tuple(_coerce_triple(ctx, row) for row in rows)


def mat_mul(a: Mat3, b: Mat3) -> Mat3:
    cols = tuple(zip(*b))
    return tuple(tuple(dot3(row, col) for col in cols) for row in a)


def mat_vec(a: Mat3, v) -> tuple:
    return tuple(dot3(row, v) for row in a)


def mat_transpose(a: Mat3) -> Mat3:
    return tuple(zip(*a))


def mat_det(a: Mat3):
    return det3(a[0], a[1], a[2])


def mat_adjugate(a: Mat3) -> Mat3:
    """Transpose of the cofactor matrix; a * adj(a) == det(a) * I."""
    c = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [a[(i + 1) % 3], a[(i + 2) % 3]]
            cols = [(j + 1) % 3, (j + 2) % 3]
            c[i][j] = r[0][cols[0]] * r[1][cols[1]] - r[0][cols[1]] * r[1][cols[0]]
    # cofactor expansion with the cyclic index trick already encodes signs
    return tuple(tuple(c[j][i] for j in range(3)) for i in range(3))


@dataclass(frozen=True)
class ProjTransform:
    ctx: BranchCtx
    rows: Mat3

    @staticmethod
    def make(ctx: BranchCtx, rows: Sequence[Sequence]) -> "ProjTransform":
        m = _mat_coerce(ctx, rows)
        if not is_nonzero_or_split(mat_det(m)):
            raise SingularTransform("transform matrix has zero determinant")
        return ProjTransform(ctx, m)

    def apply_point(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(self.ctx, _canonicalize(mat_vec(self.rows, p.coords)))

    def apply_line(self, l: ProjLine) -> ProjLine:
        contragredient = mat_transpose(mat_adjugate(self.rows))
        return ProjLine(self.ctx, _canonicalize(mat_vec(contragredient, l.coeffs)))

    def compose(self, other: "ProjTransform") -> "ProjTransform":
        return ProjTransform(self.ctx, mat_mul(self.rows, other.rows))

    def inverse(self) -> "ProjTransform":
        return ProjTransform(self.ctx, mat_adjugate(self.rows))


def four_point_transform(
    ctx: BranchCtx, targets: Sequence[Sequence]
) -> ProjTransform:
    """Transform sending the standard frame e1, e2, e3, (1,1,1) to the four
    given points, which must be in general position."""
    if len(targets) != 4:
        raise ValueError("need exactly four target points")
    p = [_coerce_triple(ctx, t) for t in targets]
    d0 = det3(p[0], p[1], p[2])
    if not is_nonzero_or_split(d0):
        raise SingularTransform("first three target points are collinear")
    scales = (
        det3(p[3], p[1], p[2]),
        det3(p[0], p[3], p[2]),
        det3(p[0], p[1], p[3]),
    )
    for s in scales:
        if not is_nonzero_or_split(s):
            raise SingularTransform("target points contain a collinear triple")
    cols = [tuple(s * x for x in pt) for s, pt in zip(scales, p[:3])]
    rows = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
    return ProjTransform(ctx, rows)
