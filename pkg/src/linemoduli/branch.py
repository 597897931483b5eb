"""Algebraic branch contexts Q[x]/(f) with lazy splitting.

A BranchCtx is either the trivial context (plain Q) or Q[var]/(modulus)
with a monic squarefree modulus. The modulus is not assumed irreducible:
zero tests on elements return a three-way verdict (Zero, Nonzero, or Split
into two comaximal sub-contexts), and computations that need a definite
answer raise SplitRequired, which drivers catch to fork the computation
per factor. This keeps all arithmetic exact without ever factoring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar

from .ratpoly import (
    MultiPoly,
    UniPoly,
    count_real_roots,
    poly_extended_gcd,
    poly_gcd,
    squarefree_part,
)

T = TypeVar("T")


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Nonzero:
    pass


@dataclass(frozen=True)
class Split:
    """The tested element vanishes exactly on the factor branch.

    factor * cofactor == modulus (up to normalization); the element is zero
    in Q[x]/(factor) and invertible in Q[x]/(cofactor).
    """

    factor: UniPoly
    cofactor: UniPoly


ZERO = Zero()
NONZERO = Nonzero()


class SplitRequired(Exception):
    """Raised when a computation needs a definite zero test but the branch
    context must be split first."""

    def __init__(self, ctx: "BranchCtx", factor: UniPoly, cofactor: UniPoly):
        super().__init__(f"split required: {ctx} by factor of degree {factor.degree}")
        self.ctx = ctx
        self.factor = factor
        self.cofactor = cofactor


# ---------------------------------------------------------------------------
# Contexts and elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchCtx:
    """Trivial context (var is None) or Q[var]/(modulus)."""

    var: str | None
    modulus: UniPoly | None

    @staticmethod
    def trivial() -> "BranchCtx":
        return BranchCtx(None, None)

    @staticmethod
    def of(var: str, modulus: UniPoly) -> "BranchCtx":
        m = modulus.monic()
        if m.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if poly_gcd(m, m.derivative()).degree != 0:
            raise ValueError("modulus must be squarefree")
        return BranchCtx(var, m)

    @property
    def is_trivial(self) -> bool:
        return self.var is None

    @property
    def degree(self) -> int:
        return 1 if self.is_trivial else self.modulus.degree

    def elem(self, value: "UniPoly | Fraction | int | CtxElem") -> "CtxElem":
        if isinstance(value, CtxElem):
            if value.ctx == self:
                return value
            if value.ctx.is_trivial:
                value = value.rep
            else:
                raise ValueError("cannot move an element between unrelated contexts")
        if isinstance(value, (Fraction, int)):
            value = UniPoly((Fraction(value),))
        if self.is_trivial:
            if value.degree > 0:
                raise ValueError("trivial context holds constants only")
            return CtxElem(self, value)
        return CtxElem(self, value % self.modulus)

    def zero(self) -> "CtxElem":
        return self.elem(0)

    def one(self) -> "CtxElem":
        return self.elem(1)

    def gen(self) -> "CtxElem":
        if self.is_trivial:
            raise ValueError("trivial context has no generator")
        return self.elem(UniPoly.x())

    def root_counts(self) -> tuple[int, int]:
        """(real, nonreal) embeddings of this context into C."""
        if self.is_trivial:
            return 1, 0
        real = count_real_roots(self.modulus)
        return real, self.modulus.degree - real

    def __str__(self) -> str:
        if self.is_trivial:
            return "Q"
        from .parse import unipoly_str

        return f"Q[{self.var}]/({unipoly_str(self.modulus, self.var)})"


@dataclass(frozen=True)
class CtxElem:
    """Element of a branch context, stored as its reduced representative."""

    ctx: BranchCtx
    rep: UniPoly

    def _coerce(self, other) -> "CtxElem":
        if isinstance(other, CtxElem):
            if other.ctx != self.ctx:
                raise ValueError("mixed branch contexts")
            return other
        return self.ctx.elem(other)

    def __add__(self, other) -> "CtxElem":
        o = self._coerce(other)
        return self.ctx.elem(self.rep + o.rep)

    __radd__ = __add__

    def __neg__(self) -> "CtxElem":
        return self.ctx.elem(-self.rep)

    def __sub__(self, other) -> "CtxElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CtxElem":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "CtxElem":
        o = self._coerce(other)
        return self.ctx.elem(self.rep * o.rep)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CtxElem":
        if n < 0:
            return invert(self) ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other) -> "CtxElem":
        return self * invert(self._coerce(other))

    def __rtruediv__(self, other) -> "CtxElem":
        return self._coerce(other) * invert(self)

    @property
    def is_syntactic_zero(self) -> bool:
        return self.rep.is_zero

    def __repr__(self) -> str:
        from .parse import unipoly_str

        return f"CtxElem({unipoly_str(self.rep, self.ctx.var or 't')} in {self.ctx})"


def zero_verdict(e: CtxElem) -> Zero | Nonzero | Split:
    """Exact three-way zero test; Split carries comaximal factors."""
    if e.rep.is_zero:
        return ZERO
    if e.ctx.is_trivial:
        return NONZERO
    g = poly_gcd(e.rep, e.ctx.modulus)
    if g.degree == 0:
        return NONZERO
    h = (e.ctx.modulus // g).monic()
    return Split(g, h)


def is_nonzero_or_split(e: CtxElem) -> bool:
    """True if nonzero, False if zero; raises SplitRequired otherwise."""
    v = zero_verdict(e)
    if isinstance(v, Nonzero):
        return True
    if isinstance(v, Zero):
        return False
    raise SplitRequired(e.ctx, v.factor, v.cofactor)


def invert(e: CtxElem) -> CtxElem:
    if e.ctx.is_trivial:
        c = e.rep.coeff(0)
        if c == 0:
            raise ZeroDivisionError("inverting zero")
        return e.ctx.elem(Fraction(1) / c)
    if e.rep.is_zero:
        raise ZeroDivisionError("inverting zero")
    d, s, _ = poly_extended_gcd(e.rep, e.ctx.modulus)
    if d.degree == 0:
        return e.ctx.elem(s)
    h = (e.ctx.modulus // d).monic()
    raise SplitRequired(e.ctx, d, h)


def fork(ctx: BranchCtx, factor: UniPoly, cofactor: UniPoly) -> tuple[BranchCtx, BranchCtx]:
    return BranchCtx.of(ctx.var, factor), BranchCtx.of(ctx.var, cofactor)


def map_branches(ctx: BranchCtx, fn: Callable[[BranchCtx], T]) -> list[tuple[BranchCtx, T]]:
    """Run fn per branch, splitting lazily.

    fn must be a pure function of the context: on SplitRequired the context
    is forked and fn is re-run from scratch on each factor context.
    """
    out: list[tuple[BranchCtx, T]] = []
    stack = [ctx]
    while stack:
        c = stack.pop()
        try:
            out.append((c, fn(c)))
        except SplitRequired as s:
            if s.ctx != c:
                raise
            a, b = fork(c, s.factor, s.cofactor)
            stack.append(b)
            stack.append(a)
    return out


# ---------------------------------------------------------------------------
# Univariate polynomials with CtxElem coefficients
# ---------------------------------------------------------------------------
#
# Used during back-substitution: a triangular equation reduces to a
# polynomial in one remaining variable whose coefficients live in the
# branch context built so far. These are plain coefficient lists
# (ascending); all normalization goes through zero verdicts so splits
# surface to the driver.


def cpoly_trim(coeffs: Sequence[CtxElem]) -> list[CtxElem]:
    """Drop leading coefficients that are certified zero.

    Raises SplitRequired when a leading coefficient is a zero divisor.
    """
    out = list(coeffs)
    while out and not is_nonzero_or_split(out[-1]):
        out.pop()
    return out


def cpoly_from_multipoly(
    p: MultiPoly, var: str, assign: dict[str, CtxElem], ctx: BranchCtx
) -> list[CtxElem]:
    """View p as a polynomial in var, evaluating the other variables."""
    from .ratpoly import coeffs_in

    out = []
    for coeff in coeffs_in(p, var):
        out.append(coeff.evaluate(assign, zero=ctx.zero()) if not coeff.is_zero else ctx.zero())
    return cpoly_trim(out)


def cpoly_divmod(
    a: Sequence[CtxElem], b: Sequence[CtxElem], ctx: BranchCtx
) -> tuple[list[CtxElem], list[CtxElem]]:
    b = cpoly_trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    inv_lead = invert(b[-1])
    r = list(a)
    q = [ctx.zero()] * max(len(a) - len(b) + 1, 0)
    while len(r) >= len(b):
        r = cpoly_trim(r)
        if len(r) < len(b):
            break
        shift = len(r) - len(b)
        factor = r[-1] * inv_lead
        q[shift] = factor
        for i, c in enumerate(b):
            r[shift + i] = r[shift + i] - factor * c
        r.pop()
    return q, cpoly_trim(r)


def cpoly_gcd(a: Sequence[CtxElem], b: Sequence[CtxElem], ctx: BranchCtx) -> list[CtxElem]:
    """Monic gcd by the Euclidean algorithm; splits surface via verdicts."""
    a = cpoly_trim(a)
    b = cpoly_trim(b)
    while b:
        _, r = cpoly_divmod(a, b, ctx)
        a, b = b, r
    if not a:
        return []
    inv_lead = invert(a[-1])
    return [c * inv_lead for c in a]


def cpoly_eval(coeffs: Sequence[CtxElem], x: CtxElem, ctx: BranchCtx) -> CtxElem:
    acc = ctx.zero()
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc
