"""Realizability and moduli of line arrangements given abstract incidences.

The pipeline turns an :class:`IncidenceSpec` (which lines must meet at
which multiple points, and nowhere else) into an exact verdict about its
realizations over the complex projective plane:

1. ``normalize`` picks two multiple points whose pencils pin a projective
   frame, fixing coordinates for as many lines as the frame allows.
2. ``propagate`` runs straightedge closure: two known lines determine a
   point, two known points determine a line. Incidences left over become
   polynomial equations; distinctness of lines and absence of unwanted
   concurrences become inequations.
3. ``eliminate`` reduces the equations by successive resultants to
   univariate moduli candidates, splitting disjointly whenever a resultant
   degenerates, then back-substitutes through branch contexts, extending
   the base field by a primitive element when a step is not linear.
4. ``filter_degenerate`` discards candidates that violate an inequation or
   whose realized intersection lattice is not isomorphic to the requested
   one, and counts the survivors.

The final verdict is Empty (with a human-readable certificate), Finite
(with per-branch minimal polynomials, real/nonreal embedding counts, and
the count of solutions up to complex conjugation), or Parametric (free
parameters remain).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

from .branch import (
    BranchCtx,
    CtxElem,
    Nonzero,
    SplitRequired,
    Zero,
    cpoly_divmod,
    cpoly_from_multipoly,
    cpoly_gcd,
    fork,
    invert,
    zero_verdict,
)
from .errors import (
    GuardExceeded,
    InvalidIncidenceSpec,
    NoPencilPair,
    OddNonrealCount,
    UnclassifiedFamily,
)
from .lattice import IntersectionLattice, expected_lattice, lattice_branches, lattice_isomorphic
from .projective import cross3, det3, dot3
from .ratpoly import (
    MultiPoly,
    UniPoly,
    exact_div,
    mgcd,
    mp_const,
    mp_to_unipoly,
    mp_var,
    mresultant,
    poly_gcd,
    squarefree_part,
    unipoly_to_mp,
    var_sort_key,
)

Triple = tuple[MultiPoly, MultiPoly, MultiPoly]

_ZERO = MultiPoly((), {})
_ONE = mp_const(1)


# ---------------------------------------------------------------------------
# Incidence specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IncidenceSpec:
    """Abstract incidence data for an arrangement of labeled lines.

    ``points`` lists the multiple points as frozensets of 1-based line
    labels (size at least 3 each); every pair of lines not covered by a
    listed point is required to meet at an ordinary double point.
    """

    n_lines: int
    points: tuple[frozenset[int], ...]

    @staticmethod
    def make(n_lines: int, points: Iterable[Iterable[int]]) -> "IncidenceSpec":
        """Validate and canonicalize; duplicate point sets collapse."""
        uniq: list[frozenset[int]] = []
        seen: set[frozenset[int]] = set()
        for p in points:
            f = frozenset(p)
            if f not in seen:
                seen.add(f)
                uniq.append(f)
        ordered = tuple(sorted(uniq, key=lambda m: (-len(m), tuple(sorted(m)))))
        expected_lattice(n_lines, ordered)
        return IncidenceSpec(n_lines, ordered)

    def expected(self) -> IntersectionLattice:
        return expected_lattice(self.n_lines, self.points)

    def profile(self) -> dict[int, int]:
        return self.expected().profile()

    def to_dict(self) -> dict:
        return {
            "n_lines": self.n_lines,
            "points": [sorted(m) for m in self.points],
        }

    @staticmethod
    def from_dict(data: Mapping) -> "IncidenceSpec":
        if not isinstance(data, Mapping):
            raise InvalidIncidenceSpec("incidence data must be a mapping")
        n = data.get("n_lines")
        pts = data.get("points")
        if not isinstance(n, int) or isinstance(n, bool):
            raise InvalidIncidenceSpec("n_lines must be an integer")
        if not isinstance(pts, (list, tuple)):
            raise InvalidIncidenceSpec("points must be a list of line-label lists")
        clean = []
        for p in pts:
            if not isinstance(p, (list, tuple)) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in p
            ):
                raise InvalidIncidenceSpec(f"point {p!r} is not a list of integers")
            clean.append(p)
        return IncidenceSpec.make(n, clean)


# ---------------------------------------------------------------------------
# Frame normalization
# ---------------------------------------------------------------------------


@dataclass
class NormalizationFrame:
    """Coordinates pinned by a pair of pencils.

    The lines through ``p_anchor`` form the pencil X = t Z, those through
    ``r_anchor`` the pencil Y = s Z; a line in both (if any) is Z = 0.
    ``line_exprs`` maps each pinned line to its coefficient triple, with
    fresh variables recorded in ``pencil_vars`` in assignment order.
    """

    spec: IncidenceSpec
    p_anchor: tuple[int, ...]
    r_anchor: tuple[int, ...]
    shared_line: int | None
    line_exprs: dict[int, Triple]
    pencil_vars: tuple[tuple[str, int], ...]
    notes: tuple[str, ...]


def _anchor_candidates(
    spec: IncidenceSpec,
) -> list[tuple[frozenset[int], frozenset[int]]]:
    pts = list(spec.points)
    if len(pts) < 2:
        raise NoPencilPair(
            f"frame normalization needs two multiple points, found {len(pts)}"
        )
    pairs = [(a, b) for a in pts for b in pts if a != b]
    pairs.sort(
        key=lambda ab: (
            -len(ab[0]),
            -len(ab[1]),
            0 if not (ab[0] & ab[1]) else 1,
            tuple(sorted(ab[0])),
            tuple(sorted(ab[1])),
        )
    )
    return pairs


def _build_frame(
    spec: IncidenceSpec, p_anchor: frozenset[int], r_anchor: frozenset[int]
) -> NormalizationFrame:
    shared = p_anchor & r_anchor
    shared_line = min(shared) if shared else None
    exprs: dict[int, Triple] = {}
    notes = [
        f"pencil anchors: {tuple(sorted(p_anchor))} -> [0:1:0], "
        f"{tuple(sorted(r_anchor))} -> [1:0:0]"
    ]
    zero, one = _ZERO, _ONE
    if shared_line is not None:
        exprs[shared_line] = (zero, zero, one)
        notes.append(f"shared line {shared_line} -> Z = 0")
    p_list = sorted(l for l in p_anchor if l != shared_line)
    r_list = sorted(l for l in r_anchor if l != shared_line)
    exprs[p_list[0]] = (one, zero, zero)
    exprs[p_list[1]] = (one, zero, -one)
    exprs[r_list[0]] = (zero, one, zero)
    exprs[r_list[1]] = (zero, one, -one)
    notes.append(
        f"lines {p_list[0]}, {p_list[1]} -> X = 0, X = Z; "
        f"lines {r_list[0]}, {r_list[1]} -> Y = 0, Y = Z"
    )
    pencil_vars: list[tuple[str, int]] = []
    p_extra = set(p_list[2:])
    for i, line in enumerate(sorted(p_list[2:] + r_list[2:]), start=1):
        v = f"t{i}"
        pencil_vars.append((v, line))
        if line in p_extra:
            exprs[line] = (one, zero, -mp_var(v))
        else:
            exprs[line] = (zero, one, -mp_var(v))
    if pencil_vars:
        notes.append(
            "pencil parameters: "
            + ", ".join(f"{v} for line {line}" for v, line in pencil_vars)
        )
    return NormalizationFrame(
        spec,
        tuple(sorted(p_anchor)),
        tuple(sorted(r_anchor)),
        shared_line,
        exprs,
        tuple(pencil_vars),
        tuple(notes),
    )


def normalize(spec: IncidenceSpec) -> NormalizationFrame:
    """Pin a projective frame on the preferred pencil pair.

    The first anchor is the largest multiple point (ties lexicographic);
    the second is the largest among the rest, preferring one disjoint from
    the first. Raises NoPencilPair when fewer than two multiple points
    exist.
    """
    p_anchor, r_anchor = _anchor_candidates(spec)[0]
    return _build_frame(spec, p_anchor, r_anchor)


# ---------------------------------------------------------------------------
# Straightedge propagation
# ---------------------------------------------------------------------------


@dataclass
class ConstraintSystem:
    """Polynomial model of an incidence specification in a pinned frame.

    ``equations`` must all vanish; each entry of ``inequations`` is a tuple
    of polynomials of which at least one must be nonzero. ``line_exprs``
    covers every line, ``point_exprs`` every specified multiple point.
    """

    spec: IncidenceSpec
    frame: NormalizationFrame
    variables: tuple[str, ...]
    equations: tuple[MultiPoly, ...]
    inequations: tuple[tuple[MultiPoly, ...], ...]
    line_exprs: dict[int, Triple]
    point_exprs: dict[frozenset[int], Triple]
    derived_lines: tuple[int, ...]
    free_lines: tuple[int, ...]
    forced_coincidence: str | None
    notes: tuple[str, ...]


def _poly_key(p: MultiPoly) -> tuple:
    from .parse import poly_str

    return (p.total_degree(), len(p.terms), poly_str(p))


def _primitive(p: MultiPoly) -> MultiPoly:
    """Integer-primitive, sign-normalized scalar multiple of p."""
    if p.is_zero:
        return p
    coeffs = list(p.terms.values())
    denom = lcm(*(c.denominator for c in coeffs)) if len(coeffs) > 1 else coeffs[0].denominator
    numer = gcd(*(abs((c * denom).numerator) for c in coeffs)) if len(coeffs) > 1 else abs(
        (coeffs[0] * denom).numerator
    )
    q = p * Fraction(denom, numer)
    if q.leading_term()[1] < 0:
        q = -q
    return q


def _mp_derivative(p: MultiPoly, var: str) -> MultiPoly:
    if var not in p.vars:
        return _ZERO
    i = p.vars.index(var)
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in p.terms.items():
        if e[i] == 0:
            continue
        ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
        out[ne] = out.get(ne, Fraction(0)) + c * e[i]
    return MultiPoly.make(p.vars, out)


def _radical(p: MultiPoly) -> MultiPoly:
    """Product of the distinct irreducible factors of p (same zero set)."""
    if p.is_constant:
        return p
    g = p
    for v in p.vars:
        g = mgcd(g, _mp_derivative(p, v))
        if g.is_constant:
            return _primitive(p)
    q = exact_div(p, g)
    return _primitive(q) if q is not None else _primitive(p)


def _saturate(p: MultiPoly, guards: Iterable[MultiPoly]) -> MultiPoly:
    """Divide out factors that the guards already force to be nonzero."""
    changed = True
    while changed and not p.is_constant:
        changed = False
        for g in guards:
            if g.is_constant:
                continue
            q = exact_div(p, g)
            while q is not None:
                p, changed = q, True
                q = exact_div(p, g)
    return p


def propagate(
    frame: NormalizationFrame, spec: IncidenceSpec, *, max_free_lines: int = 4
) -> ConstraintSystem:
    """Straightedge closure plus constraint emission.

    Lines without a construction after closure get an affine chart
    (u, 1, u'); a free line through the first pencil's anchor point would
    contradict the exact lattice, so the chart loses nothing. Raises
    GuardExceeded when more than ``max_free_lines`` such charts would be
    needed.
    """
    exprs: dict[int, Triple] = dict(frame.line_exprs)
    flavor: dict[int, int] = {
        l: (1 if any(not c.is_constant for c in t) else 0) for l, t in exprs.items()
    }
    point_list = sorted(spec.points, key=lambda m: tuple(sorted(m)))
    point_exprs: dict[frozenset[int], Triple] = {}
    defined_by_point: dict[frozenset[int], tuple[int, int]] = {}
    defined_by_line: dict[int, tuple[frozenset[int], frozenset[int]]] = {}
    derived: list[int] = []
    notes = list(frame.notes)

    def closure() -> None:
        changed = True
        while changed:
            changed = False
            for pt in point_list:
                if pt in point_exprs:
                    continue
                known = sorted((flavor[l], l) for l in pt if l in exprs)
                if len(known) < 2:
                    continue
                l1, l2 = known[0][1], known[1][1]
                point_exprs[pt] = cross3(exprs[l1], exprs[l2])
                defined_by_point[pt] = (l1, l2)
                changed = True
            for line in range(1, spec.n_lines + 1):
                if line in exprs:
                    continue
                have = sorted(
                    (tuple(sorted(pt)), pt)
                    for pt in point_list
                    if line in pt and pt in point_exprs
                )
                if len(have) < 2:
                    continue
                q1, q2 = have[0][1], have[1][1]
                exprs[line] = cross3(point_exprs[q1], point_exprs[q2])
                defined_by_line[line] = (q1, q2)
                flavor[line] = 2
                derived.append(line)
                changed = True

    closure()
    free = sorted(l for l in range(1, spec.n_lines + 1) if l not in exprs)
    if len(free) > max_free_lines:
        raise GuardExceeded(
            f"{len(free)} lines stay unconstructed in this frame "
            f"(limit {max_free_lines})"
        )
    u_index = 1
    for line in free:
        exprs[line] = (mp_var(f"u{u_index}"), _ONE, mp_var(f"u{u_index + 1}"))
        flavor[line] = 3
        u_index += 2
    if free:
        notes.append(f"free lines {free} got affine charts (u, 1, u')")
    if derived:
        notes.append(f"derived lines in order: {derived}")
    closure()

    variables = sorted(
        {v for t in exprs.values() for c in t for v in c.vars}, key=var_sort_key
    )

    equations: list[MultiPoly] = []
    eq_seen: set[MultiPoly] = set()
    forced: str | None = None
    for pt in point_list:
        l1, l2 = defined_by_point[pt]
        for m in sorted(pt):
            if m in (l1, l2):
                continue
            if m in defined_by_line and pt in defined_by_line[m]:
                continue
            e = _primitive(dot3(exprs[m], point_exprs[pt]))
            if e.is_zero:
                continue
            if e.is_constant:
                forced = (
                    f"line {m} can never pass through point {tuple(sorted(pt))}"
                )
                continue
            if e not in eq_seen:
                eq_seen.add(e)
                equations.append(e)

    inequations: list[tuple[MultiPoly, ...]] = []
    ineq_seen: set[frozenset[MultiPoly]] = set()
    for a, b in combinations(range(1, spec.n_lines + 1), 2):
        comps = [_primitive(c) for c in cross3(exprs[a], exprs[b])]
        comps = [c for c in comps if not c.is_zero]
        if not comps:
            forced = forced or f"lines {a} and {b} are forced to coincide"
            continue
        if any(c.is_constant for c in comps):
            continue
        key = frozenset(comps)
        if key not in ineq_seen:
            ineq_seen.add(key)
            inequations.append(tuple(sorted(comps, key=_poly_key)))

    allowed = {
        frozenset(tri)
        for pt in spec.points
        for tri in combinations(sorted(pt), 3)
    }
    for tri in combinations(range(1, spec.n_lines + 1), 3):
        if frozenset(tri) in allowed:
            continue
        d = _primitive(det3(exprs[tri[0]], exprs[tri[1]], exprs[tri[2]]))
        if d.is_zero:
            forced = forced or f"lines {tri} are concurrent in every realization"
            continue
        if d.is_constant:
            continue
        key = frozenset((d,))
        if key not in ineq_seen:
            ineq_seen.add(key)
            inequations.append((d,))

    return ConstraintSystem(
        spec=spec,
        frame=frame,
        variables=tuple(variables),
        equations=tuple(equations),
        inequations=tuple(inequations),
        line_exprs=exprs,
        point_exprs=point_exprs,
        derived_lines=tuple(derived),
        free_lines=tuple(free),
        forced_coincidence=forced,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# Elimination
# ---------------------------------------------------------------------------


@dataclass
class BranchCandidate:
    """One solved branch: a context plus a value for every variable."""

    ctx: BranchCtx
    assignments: dict[str, CtxElem]
    notes: tuple[str, ...]


@dataclass
class EliminationResult:
    """Output of :func:`eliminate`.

    ``candidates`` are fully determined points. ``witnesses`` are sampled
    members of branches that kept free coordinates; they certify that such
    a branch contains verified points and carry the sampled values in
    their assignments.
    """

    candidates: list[BranchCandidate]
    parametric_free: tuple[str, ...]
    certificates: tuple[str, ...]
    notes: tuple[str, ...]
    witnesses: list[BranchCandidate] = field(default_factory=list)


_SAMPLE_SEQ: tuple[Fraction, ...] = tuple(
    Fraction(n, d)
    for n, d in (
        (2, 1), (3, 1), (-2, 1), (1, 2), (5, 1), (-1, 3), (7, 1), (-5, 1),
        (3, 2), (-7, 1), (11, 1), (2, 3), (-11, 1), (13, 1), (-3, 2), (17, 1),
    )
)


def _lead_and_tail(p: MultiPoly, x: str) -> tuple[MultiPoly, MultiPoly]:
    """Split p into its leading coefficient in x and the lower-order part."""
    d = p.degree_in(x)
    i = p.vars.index(x)
    lead: dict[tuple[int, ...], Fraction] = {}
    tail: dict[tuple[int, ...], Fraction] = {}
    for e, c in p.terms.items():
        if e[i] == d:
            lead[e[:i] + e[i + 1 :]] = c
        else:
            tail[e] = c
    rest_vars = p.vars[:i] + p.vars[i + 1 :]
    return MultiPoly.make(rest_vars, lead), MultiPoly.make(p.vars, tail)


def _transport(value: CtxElem, point: CtxElem, nctx: BranchCtx) -> CtxElem:
    """Horner-evaluate value's representative at point inside nctx."""
    acc = nctx.zero()
    for c in reversed(value.rep.coeffs):
        acc = acc * point + nctx.elem(c)
    return acc


def _refit(assign: dict[str, CtxElem], nctx: BranchCtx) -> dict[str, CtxElem]:
    return {k: nctx.elem(v.rep) for k, v in assign.items()}


def eliminate(
    sys: ConstraintSystem, *, node_guard: int = 200_000, _depth: int = 0
) -> EliminationResult:
    """Resultant elimination with disjoint splitting and back-substitution.

    The variable with the fewest occurrences (ties: lowest degree, then
    name) is eliminated against the smallest pivot. Before projecting, the
    pivot's leading coefficient is case-split (vanishing vs. guarded
    nonzero) so the resultant locus is the true projection rather than a
    superset inflated by degenerate leading terms. A vanishing resultant
    splits the system into the shared-factor component and its complement,
    with the factor recorded as a guard on the latter; components stay
    disjoint, so nothing is counted twice. Back-substitution walks the
    deferred equations in reverse through branch contexts, extending by a
    primitive element whenever a step's gcd is not linear, and finally
    re-verifies every original equation and guard. A step whose deferred
    equations vanish identically at a special point is rotated behind the
    remaining steps, since those may still pin its variable; if a full
    rotation makes no progress at a rational point, the assigned values
    are substituted into the untriangularized system and the residual
    fiber is settled by a fresh elimination.

    A branch that runs out of equations while coordinates remain free is
    never taken on faith: sampled values of the free coordinates are
    back-substituted, and only a branch with at least one fully verified
    member is reported as parametric (the members are returned as
    witnesses). A free branch with no verifiable member raises
    :class:`GuardExceeded` rather than guessing.
    """
    from .parse import poly_str

    if sys.forced_coincidence:
        return EliminationResult(
            [], (), (sys.forced_coincidence,), ("propagation was contradictory",)
        )

    simple_guards = tuple(
        sorted(
            {t[0] for t in sys.inequations if len(t) == 1 and not t[0].is_constant},
            key=_poly_key,
        )
    )
    all_vars = set(sys.variables)
    candidates: list[BranchCandidate] = []
    witnesses: list[BranchCandidate] = []
    certificates: list[str] = []
    parametric: set[str] = set()
    notes: list[str] = []
    counter = {"nodes": 0}

    def normalize_eqs(
        eqs: Sequence[MultiPoly], guards: Sequence[MultiPoly]
    ) -> list[MultiPoly] | MultiPoly:
        out: list[MultiPoly] = []
        seen: set[MultiPoly] = set()
        for e in eqs:
            e = _radical(_primitive(e))
            e = _primitive(_saturate(e, list(simple_guards) + list(guards)))
            if e.is_zero:
                continue
            if e.is_constant:
                return e
            if e not in seen:
                seen.add(e)
                out.append(e)
        return out

    def solve(
        eqs: list[MultiPoly],
        guards: tuple[MultiPoly, ...],
        stack: list[tuple[str, tuple[MultiPoly, ...]]],
    ) -> None:
        counter["nodes"] += 1
        if counter["nodes"] > node_guard:
            raise GuardExceeded(f"elimination exceeded {node_guard} nodes")
        norm = normalize_eqs(eqs, guards)
        if isinstance(norm, MultiPoly):
            certificates.append(
                "a nonzero constant lies in the ideal after eliminating "
                f"[{', '.join(v for v, _ in stack)}]"
            )
            return
        eqs = norm
        stacked = {v for v, _ in stack}
        active = sorted({v for e in eqs for v in e.vars}, key=var_sort_key)

        if not eqs:
            free = sorted(all_vars - stacked, key=var_sort_key)
            if free:
                certify_free(free, None, None, stack, guards)
                return
            backsub(None, None, stack, guards)
            return

        if len(active) == 1:
            v0 = active[0]
            g = mp_to_unipoly(eqs[0], v0)
            for e in eqs[1:]:
                g = poly_gcd(g, mp_to_unipoly(e, v0))
            if g.degree == 0:
                certificates.append(f"the univariate conditions on {v0} share no root")
                return
            free = sorted(all_vars - stacked - {v0}, key=var_sort_key)
            if free:
                certify_free(free, v0, squarefree_part(g).monic(), stack, guards)
                return
            backsub(v0, squarefree_part(g).monic(), stack, guards)
            return

        for v in active:
            occs = [e for e in eqs if v in e.vars]
            if len(occs) == 1:
                solve(
                    [e for e in eqs if e is not occs[0]],
                    guards,
                    stack + [(v, (occs[0],))],
                )
                return

        x = min(
            active,
            key=lambda v: (
                sum(1 for e in eqs if v in e.vars),
                max(e.degree_in(v) for e in eqs),
                var_sort_key(v),
            ),
        )
        with_x = [e for e in eqs if x in e.vars]
        rest = [e for e in eqs if x not in e.vars]
        pivot = min(with_x, key=lambda e: (e.degree_in(x), len(e.terms), _poly_key(e)))
        lead, tail = _lead_and_tail(pivot, x)
        if not lead.is_constant:
            solve(
                [e for e in eqs if e is not pivot] + [lead, tail],
                guards,
                list(stack),
            )
            guards = guards + (lead,)
        resultants: list[MultiPoly] = []
        for q in with_x:
            if q is pivot:
                continue
            r = mresultant(pivot, q, x)
            if not r.is_zero:
                resultants.append(r)
                continue
            g = _primitive(mgcd(pivot, q))
            if g.degree_in(x) == 0:
                raise GuardExceeded(
                    "a vanishing resultant produced no shared factor in "
                    f"{x}; cannot split soundly"
                )
            p2, q2 = exact_div(pivot, g), exact_div(q, g)
            if p2 is None or q2 is None:
                raise GuardExceeded("shared factor fails to divide its parents")
            base = [e for e in eqs if e is not pivot and e is not q]
            solve(base + [g], guards, list(stack))
            solve(base + [p2, q2], guards + (g,), list(stack))
            return
        solve(rest + resultants, guards, stack + [(x, tuple(with_x))])

    def final_ok(
        ctx: BranchCtx, assign: dict[str, CtxElem], guards: tuple[MultiPoly, ...]
    ) -> bool:
        for e in sys.equations:
            v = zero_verdict(e.evaluate(assign, zero=ctx.zero()))
            if isinstance(v, Nonzero):
                return False
            if not isinstance(v, Zero):
                raise SplitRequired(ctx, v.factor, v.cofactor)
        for g in guards:
            v = zero_verdict(g.evaluate(assign, zero=ctx.zero()))
            if isinstance(v, Zero):
                return False
            if not isinstance(v, Nonzero):
                raise SplitRequired(ctx, v.factor, v.cofactor)
        return True

    def extend(
        ctx: BranchCtx,
        assign: dict[str, CtxElem],
        x: str,
        g: list[CtxElem],
        rest: tuple,
    ) -> list[tuple[BranchCtx, dict[str, CtxElem], tuple]]:
        """Replace ctx by a primitive extension containing a root of g."""
        inv = invert(g[-1])
        g = [c * inv for c in g]
        dg = [g[i] * i for i in range(1, len(g))]
        h = cpoly_gcd(g, dg, ctx)
        if len(h) > 1:
            g, _ = cpoly_divmod(g, h, ctx)
            inv = invert(g[-1])
            g = [c * inv for c in g]
        if len(g) == 2:
            a2 = dict(assign)
            a2[x] = -g[0]
            return [(ctx, a2, rest)]
        if ctx.is_trivial:
            f_new = UniPoly(tuple(c.rep.coeff(0) for c in g))
            nctx = BranchCtx.of(x, f_new)
            a2 = _refit(assign, nctx)
            a2[x] = nctx.gen()
            return [(nctx, a2, rest)]
        v, f = ctx.var, ctx.modulus
        w = "w"
        while w in all_vars or w in (v, x):
            w += "w"
        f_mp = unipoly_to_mp(f, v)
        g_mp = _ZERO
        for i, c in enumerate(g):
            g_mp = g_mp + unipoly_to_mp(c.rep, v) * mp_var(x) ** i
        deg_ext = len(g) - 1
        for mult in range(1, 33):
            shifted = g_mp.substitute(x, mp_var(w) - mp_const(mult) * mp_var(v))
            h_mp = mresultant(f_mp, shifted, v)
            try:
                h_uni = mp_to_unipoly(h_mp, w)
            except ValueError:
                continue
            if h_uni.is_zero or h_uni.degree != f.degree * deg_ext:
                continue
            if poly_gcd(h_uni, h_uni.derivative()).degree != 0:
                continue
            states: list[tuple[BranchCtx, dict[str, CtxElem], tuple]] = []
            inner: list[BranchCtx] = [BranchCtx.of(w, h_uni)]
            while inner:
                c2 = inner.pop()
                try:
                    fc = [c2.elem(co) for co in f.coeffs]
                    gc = cpoly_from_multipoly(shifted, v, {w: c2.gen()}, c2)
                    lin = cpoly_gcd(fc, gc, c2)
                    if len(lin) <= 1:
                        continue
                    if len(lin) != 2:
                        raise GuardExceeded(
                            "primitive-element pairing was not unique"
                        )
                    v_val = -lin[0]
                    a2 = {k: _transport(val, v_val, c2) for k, val in assign.items()}
                    a2[x] = c2.gen() - v_val * mult
                    states.append((c2, a2, rest))
                except SplitRequired as s:
                    if s.ctx != c2:
                        raise
                    ca, cb = fork(c2, s.factor, s.cofactor)
                    inner.extend((ca, cb))
            return states
        raise GuardExceeded("no primitive element found after 32 attempts")

    def backsub(
        v0: str | None,
        f0: UniPoly | None,
        stack: list[tuple[str, tuple[MultiPoly, ...]]],
        guards: tuple[MultiPoly, ...],
        preassign: Mapping[str, Fraction] | None = None,
        sink: list[BranchCandidate] | None = None,
        tag: tuple[str, ...] = (),
    ) -> int:
        State = tuple[
            BranchCtx, dict[str, CtxElem], tuple, int, tuple[MultiPoly, ...]
        ]

        def constraints(
            ctx: BranchCtx,
            assign: dict[str, CtxElem],
            x: str,
            pool: tuple[MultiPoly, ...],
        ) -> tuple[list[CtxElem], list[MultiPoly]]:
            """Univariate conditions on x at this point, as a gcd.

            Entries mentioning variables that are not yet assigned cannot
            be evaluated here and come back as leftovers for a later pass.
            The originals whose variables are all in scope contribute too:
            a deferred equation may vanish identically at a special point
            where an original still pins x.
            """
            g: list[CtxElem] = []
            leftover: list[MultiPoly] = []
            scope = set(assign) | {x}
            extra = tuple(
                e
                for e in sys.equations
                if x in e.vars and set(e.vars) <= scope and e not in pool
            )
            for e in pool + extra:
                if not set(e.vars) <= scope:
                    leftover.append(e)
                    continue
                cp = cpoly_from_multipoly(e, x, assign, ctx)
                if not cp:
                    continue
                g = cp if not g else cpoly_gcd(g, cp, ctx)
                if len(g) == 1:
                    return g, []
            return g, leftover

        def settle_fiber(
            ctx: BranchCtx,
            assign: dict[str, CtxElem],
            queue: tuple,
            pending: tuple[MultiPoly, ...],
            out: list[BranchCandidate],
            tag: tuple[str, ...],
        ) -> int:
            """Re-eliminate the residual system at a rational partial point.

            A full rotation of the remaining steps found no usable
            constraint, which happens when the chain was triangularized in
            an order that hides the conditions of this special fiber. All
            assigned values are rational here, so substituting them into
            the untriangularized system gives an honest subsystem for a
            fresh elimination to settle.
            """
            if _depth >= 3:
                raise GuardExceeded(
                    "nested fiber eliminations exceeded the recursion budget"
                )
            vals = {
                name: Fraction(0) if e.rep.is_zero else e.rep.coeffs[0]
                for name, e in assign.items()
            }
            pool: list[MultiPoly] = list(sys.equations) + list(pending)
            for _, eqlist in queue:
                pool.extend(eqlist)
            residual: list[MultiPoly] = []
            seen: set[MultiPoly] = set()
            for e in pool:
                r = e
                for name, qv in vals.items():
                    r = r.substitute(name, qv)
                if r.is_zero:
                    continue
                if r.is_constant:
                    return 0
                if r not in seen:
                    seen.add(r)
                    residual.append(r)
            sub = replace(
                sys,
                variables=tuple(v for v in sys.variables if v not in vals),
                equations=tuple(residual),
                inequations=(),
                forced_coincidence=None,
            )
            nested = eliminate(sub, node_guard=node_guard, _depth=_depth + 1)
            found = 0
            for cand in nested.candidates:
                full = {name: cand.ctx.elem(qv) for name, qv in vals.items()}
                full.update(cand.assignments)
                if final_ok(cand.ctx, full, guards):
                    out.append(BranchCandidate(cand.ctx, full, tag))
                    found += 1
            if nested.parametric_free:
                kept = 0
                for w in nested.witnesses:
                    full = {name: w.ctx.elem(qv) for name, qv in vals.items()}
                    full.update(w.assignments)
                    if final_ok(w.ctx, full, guards):
                        witnesses.append(
                            BranchCandidate(w.ctx, full, tag + w.tag)
                        )
                        kept += 1
                if not kept:
                    raise GuardExceeded(
                        "a residual fiber came back parametric but none of "
                        "its witnesses satisfied the outer guards"
                    )
                parametric.update(nested.parametric_free)
                notes.append(
                    "a special fiber is parametric in "
                    + ", ".join(sorted(nested.parametric_free))
                )
                found += kept
            return found

        def walk(
            items: list[State],
            out: list[BranchCandidate],
            tag: tuple[str, ...],
        ) -> int:
            done = 0
            work = list(items)
            while work:
                ctx, assign, queue, stalls, pending = work.pop()
                try:
                    if not queue:
                        dead = False
                        for e in pending:
                            v = zero_verdict(e.evaluate(assign, zero=ctx.zero()))
                            if isinstance(v, Nonzero):
                                dead = True
                                break
                            if not isinstance(v, Zero):
                                raise SplitRequired(ctx, v.factor, v.cofactor)
                        if not dead and final_ok(ctx, assign, guards):
                            out.append(BranchCandidate(ctx, dict(assign), tag))
                            done += 1
                        continue
                    x, eqlist = queue[0]
                    g, leftover = constraints(ctx, assign, x, eqlist + pending)
                    if not g:
                        if stalls < len(queue):
                            # later steps may pin x; come back to it after
                            # the others have resolved
                            work.append(
                                (ctx, assign, queue[1:] + (queue[0],), stalls + 1, pending)
                            )
                            continue
                        if ctx.degree == 1:
                            done += settle_fiber(ctx, assign, queue, pending, out, tag)
                            continue
                        # a full rotation left x unconstrained over an
                        # extension; verify sampled members and keep their
                        # completions as witnesses
                        fam = 0
                        for q in _SAMPLE_SEQ:
                            a2 = dict(assign)
                            a2[x] = ctx.elem(q)
                            fam += walk(
                                [(ctx, a2, queue[1:], 0, tuple(leftover))],
                                witnesses,
                                tag + (f"{x} sampled at {q} over {ctx}",),
                            )
                            if fam >= 4:
                                break
                        if not fam:
                            raise GuardExceeded(
                                f"{x} is unconstrained over {ctx} but no "
                                "sampled member of the family passed "
                                "verification; the branch cannot be classified"
                            )
                        done += fam
                        parametric.add(x)
                        notes.append(f"{x} is unconstrained over {ctx}")
                        continue
                    if len(g) == 1:
                        continue
                    if len(g) == 2:
                        val = -g[0] * invert(g[1])
                        a2 = dict(assign)
                        a2[x] = val
                        work.append((ctx, a2, queue[1:], 0, tuple(leftover)))
                        continue
                    work.extend(
                        (c2, a2, q2, 0, tuple(leftover))
                        for c2, a2, q2 in extend(ctx, assign, x, g, queue[1:])
                    )
                except SplitRequired as s:
                    if s.ctx != ctx:
                        raise
                    ca, cb = fork(ctx, s.factor, s.cofactor)
                    work.append((ca, _refit(assign, ca), queue, stalls, pending))
                    work.append((cb, _refit(assign, cb), queue, stalls, pending))
            return done

        out = candidates if sink is None else sink
        if f0 is None:
            ctx0 = BranchCtx.trivial()
            seed: dict[str, CtxElem] = {}
        else:
            ctx0 = BranchCtx.of(v0, f0)
            seed = {v0: ctx0.gen()}
        if preassign:
            for name, q in preassign.items():
                seed[name] = ctx0.elem(q)
        return walk([(ctx0, seed, tuple(reversed(stack)), 0, ())], out, tag)

    def certify_free(
        free: list[str],
        v0: str | None,
        f0: UniPoly | None,
        stack: list[tuple[str, tuple[MultiPoly, ...]]],
        guards: tuple[MultiPoly, ...],
    ) -> None:
        """Validate a branch whose equations left coordinates free.

        Members of the family are sampled over a fixed sequence of rational
        values; each is back-substituted and verified like any candidate.
        Verified members become witnesses and the free coordinates are
        reported as parametric. When no sampled member verifies, the
        branch's existence claim is unsupported and the whole run fails
        loudly instead of returning an unverifiable verdict.
        """
        found = 0
        for k in range(len(_SAMPLE_SEQ)):
            vals = {
                f: _SAMPLE_SEQ[(k + 3 * i) % len(_SAMPLE_SEQ)]
                for i, f in enumerate(free)
            }
            before = len(witnesses)
            label = ", ".join(f"{f} = {vals[f]}" for f in free)
            backsub(
                v0,
                f0,
                stack,
                guards,
                preassign=vals,
                sink=witnesses,
                tag=(f"sampled member at {label}",),
            )
            if len(witnesses) > before:
                found += len(witnesses) - before
                if found >= 4:
                    break
        if not found:
            raise GuardExceeded(
                "a branch leaves "
                + ", ".join(free)
                + " free, but no sampled member of the family passed "
                "verification; the branch cannot be classified"
            )
        parametric.update(free)
        notes.append(f"free parameters remain: {', '.join(free)}")

    solve(list(sys.equations), (), [])
    if parametric:
        notes.append("parametric branches suppress point counting")
    return EliminationResult(
        candidates,
        tuple(sorted(parametric, key=var_sort_key)),
        tuple(certificates),
        tuple(notes),
        witnesses,
    )


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


class VerdictKind(Enum):
    EMPTY = "empty"
    FINITE = "finite"
    PARAMETRIC = "parametric"


def conj_quotient_count(real: int, nonreal: int) -> int:
    """Solutions up to complex conjugation: real ones are fixed, nonreal
    ones pair up. An odd nonreal count is impossible over Q."""
    if real < 0 or nonreal < 0:
        raise ValueError("embedding counts cannot be negative")
    if nonreal % 2:
        raise OddNonrealCount(
            f"{nonreal} nonreal embeddings cannot pair under conjugation"
        )
    return real + nonreal // 2


@dataclass
class ModuliBranch:
    """A surviving solution branch with its arithmetic invariants."""

    var: str | None
    modulus: UniPoly | None
    real_embeddings: int
    nonreal_embeddings: int
    ctx: BranchCtx
    assignments: dict[str, CtxElem]

    @property
    def degree(self) -> int:
        return 1 if self.modulus is None else self.modulus.degree


@dataclass
class ModuliVerdict:
    """Final classification of an incidence specification.

    For a finite verdict, ``branches`` are the isolated solutions and the
    point counts are filled in. For a parametric verdict, ``branches``
    hold verified sampled members of the family (not isolated points), so
    the counts stay zero while ``parametric_free`` names the free
    coordinates. An empty verdict carries a human-readable certificate.
    """

    kind: VerdictKind
    branches: tuple[ModuliBranch, ...]
    moduli_points: int
    conj_quotient_points: int
    parametric_free: tuple[str, ...]
    certificate: str | None
    discarded: tuple[str, ...]


def filter_degenerate(
    result: EliminationResult, sys: ConstraintSystem, spec: IncidenceSpec
) -> ModuliVerdict:
    """Enforce inequations and the lattice-isomorphism check per branch.

    The realized lattice being isomorphic to the requested one is the
    final authority: any candidate failing it is discarded with a reason,
    and those reasons feed the Empty certificate. Witnesses of parametric
    branches pass through the same checks; a parametric verdict is issued
    only when at least one witness survives, with the survivors reported
    as the verdict's branches. A family whose every sampled member
    collapses the same inequation is discharged by proving that collapse
    holds identically on the solution set.
    """
    expected = spec.expected()
    order = sorted(sys.line_exprs)
    discarded: list[str] = []

    def survivors(cands: Iterable[BranchCandidate]) -> tuple[list[ModuliBranch], set[int]]:
        kept: list[ModuliBranch] = []
        failed_tuples: set[int] = set()
        for cand in cands:
            work = [(cand.ctx, cand.assignments)]
            while work:
                ctx, assign = work.pop()
                try:
                    violated = _violated_inequation(ctx, assign, sys.inequations)
                except SplitRequired as s:
                    if s.ctx != ctx:
                        raise
                    ca, cb = fork(ctx, s.factor, s.cofactor)
                    work.append((ca, _refit(assign, ca)))
                    work.append((cb, _refit(assign, cb)))
                    continue
                if violated is not None:
                    idx, why = violated
                    failed_tuples.add(idx)
                    discarded.append(f"{ctx}: {why}")
                    continue
                triples = [
                    tuple(
                        c.evaluate(assign, zero=ctx.zero()).rep
                        for c in sys.line_exprs[l]
                    )
                    for l in order
                ]
                for bctx, lat in lattice_branches(ctx, triples):
                    if lat is None:
                        discarded.append(f"{bctx}: two lines collapse")
                        continue
                    if not lattice_isomorphic(lat, expected):
                        discarded.append(
                            f"{bctx}: realized lattice differs from the specification"
                        )
                        continue
                    real, nonreal = bctx.root_counts()
                    kept.append(
                        ModuliBranch(
                            bctx.var,
                            bctx.modulus,
                            real,
                            nonreal,
                            bctx,
                            _refit(assign, bctx),
                        )
                    )
        return kept, failed_tuples

    branches, _ = survivors(result.candidates)
    if result.parametric_free:
        family, family_failures = survivors(result.witnesses)
        if family:
            return ModuliVerdict(
                VerdictKind.PARAMETRIC,
                tuple(family) + tuple(branches),
                0,
                0,
                result.parametric_free,
                None,
                tuple(discarded),
            )
        if family_failures:
            raise UnclassifiedFamily(
                "every sampled member of a parametric branch violated an "
                "inequation; the system needs a case split on its components",
                frozenset(family_failures),
            )
        raise GuardExceeded(
            "no sampled member of a parametric branch survived the "
            "degeneracy filter and the failures name no inequation; the "
            "branch cannot be classified"
        )
    if not branches:
        reasons = list(result.certificates) + discarded
        certificate = "; ".join(reasons) if reasons else "no candidate branch survived"
        return ModuliVerdict(
            VerdictKind.EMPTY, (), 0, 0, (), certificate, tuple(discarded)
        )
    moduli = sum(b.degree for b in branches)
    quotient = sum(
        conj_quotient_count(b.real_embeddings, b.nonreal_embeddings) for b in branches
    )
    return ModuliVerdict(
        VerdictKind.FINITE,
        tuple(branches),
        moduli,
        quotient,
        (),
        None,
        tuple(discarded),
    )


def _settle(
    sys: ConstraintSystem,
    spec: IncidenceSpec,
    node_guard: int,
    depth: int = 0,
) -> tuple[EliminationResult, ModuliVerdict]:
    """Eliminate and filter, splitting on inequations when required.

    When every sampled member of a parametric branch violates the same
    inequation tuple (c1, ..., cm), the solution set is partitioned by the
    first nonzero component: the j-th part adjoins c1 = ... = c(j-1) = 0
    and an auxiliary reciprocal u * cj = 1. The parts are disjoint and
    exhaust the admissible set, so their verdicts merge by addition.
    """
    elimination = eliminate(sys, node_guard=node_guard)
    try:
        return elimination, filter_degenerate(elimination, sys, spec)
    except UnclassifiedFamily as uf:
        if depth >= 3:
            raise GuardExceeded(
                "inequation case splits exceeded the recursion budget "
                "without classifying every branch"
            ) from uf
        idx = min(uf.indexes)
        tup = sys.inequations[idx]
        u = "u"
        while u in sys.variables or any(u in c.vars for c in tup):
            u += "u"
        parts: list[ModuliVerdict] = []
        prior: list[MultiPoly] = []
        for comp in tup:
            aux = replace(
                sys,
                variables=sys.variables + (u,),
                equations=sys.equations
                + tuple(prior)
                + (comp * mp_var(u) - mp_const(1),),
            )
            parts.append(_settle(aux, spec, node_guard, depth + 1)[1])
            prior.append(comp)
        return elimination, _merge_verdicts(parts, note=(
            "split on the components of inequation "
            f"[{', '.join(pp for pp in _tuple_names(tup))}]"
        ))


def _tuple_names(tup: tuple[MultiPoly, ...]) -> list[str]:
    from .parse import poly_str

    return [poly_str(c) for c in tup]


def _merge_verdicts(parts: Sequence[ModuliVerdict], note: str) -> ModuliVerdict:
    """Combine verdicts of disjoint exhaustive parts of one moduli set."""
    discarded = tuple(d for p in parts for d in p.discarded) + (note,)
    free = tuple(sorted({f for p in parts for f in p.parametric_free}))
    branches = tuple(b for p in parts for b in p.branches)
    if any(p.kind is VerdictKind.PARAMETRIC for p in parts):
        return ModuliVerdict(
            VerdictKind.PARAMETRIC, branches, 0, 0, free, None, discarded
        )
    if any(p.kind is VerdictKind.FINITE for p in parts):
        moduli = sum(p.moduli_points for p in parts)
        quotient = sum(p.conj_quotient_points for p in parts)
        return ModuliVerdict(
            VerdictKind.FINITE, branches, moduli, quotient, (), None, discarded
        )
    certificate = "; ".join(
        p.certificate for p in parts if p.certificate
    ) or "no candidate branch survived"
    return ModuliVerdict(
        VerdictKind.EMPTY, (), 0, 0, (), f"{note}: {certificate}", discarded
    )


def _violated_inequation(
    ctx: BranchCtx,
    assign: dict[str, CtxElem],
    inequations: Sequence[tuple[MultiPoly, ...]],
) -> tuple[int, str] | None:
    from .parse import poly_str

    for i, tup in enumerate(inequations):
        satisfied = False
        split: SplitRequired | None = None
        for comp in tup:
            v = zero_verdict(comp.evaluate(assign, zero=ctx.zero()))
            if isinstance(v, Nonzero):
                satisfied = True
                break
            if not isinstance(v, Zero) and split is None:
                split = SplitRequired(ctx, v.factor, v.cofactor)
        if satisfied:
            continue
        if split is not None:
            raise split
        names = ", ".join(poly_str(c) for c in tup)
        return i, f"inequation fails (every component vanishes): {names}"
    return None


# ---------------------------------------------------------------------------
# Shortcuts and reductions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerdictShortcut:
    rule: str
    detail: str


def classify_shortcuts(lat: IntersectionLattice) -> list[VerdictShortcut]:
    """Advisory structure rules that settle moduli questions by inspection.

    Each rule fires only when its hypothesis holds on the lattice; the
    solver never consumes these, they annotate reports.
    """
    from .lattice import is_simple_c3

    out: list[VerdictShortcut] = []
    if lat.multiples:
        rmax = max(len(m) for m in lat.multiples)
        if lat.k >= 9 and rmax >= lat.k - 4:
            out.append(
                VerdictShortcut(
                    "high-multiplicity-point",
                    f"a point of multiplicity {rmax} >= {lat.k} - 4 makes the "
                    "moduli space irreducible",
                )
            )
    simple, tri = is_simple_c3(lat)
    if simple:
        out.append(
            VerdictShortcut(
                "simple-c3",
                f"lines {tri} cover every multiple point and satisfy the "
                "simple-type condition; the moduli space is irreducible",
            )
        )
    thin = [
        i
        for i in range(1, lat.k + 1)
        if sum(1 for m in lat.multiples if i in m) <= 2
    ]
    if thin:
        out.append(
            VerdictShortcut(
                "reducible-line",
                f"line(s) {thin} lie on at most two multiple points; "
                "realizability reduces to the smaller arrangement",
            )
        )
    return out


def reduce_arrangement(spec: IncidenceSpec) -> tuple[IncidenceSpec, tuple[int, ...]]:
    """Strip lines on at most two multiple points, one at a time.

    Such a line imposes no moduli constraint beyond the subarrangement.
    Stops before dropping below three lines or losing the last multiple
    point; returns the compactly relabeled spec plus the removed original
    labels in removal order.
    """
    labels = list(range(1, spec.n_lines + 1))
    points = [set(m) for m in spec.points]
    removed: list[int] = []
    while True:
        pick = None
        new_points: list[set[int]] = []
        for line in labels:
            if sum(1 for m in points if line in m) > 2:
                continue
            if len(labels) - 1 < 3:
                continue
            shrunk = [m - {line} for m in points]
            shrunk = [m for m in shrunk if len(m) >= 3]
            if not shrunk:
                continue
            pick, new_points = line, shrunk
            break
        if pick is None:
            break
        labels.remove(pick)
        points = new_points
        removed.append(pick)
    relabel = {old: i + 1 for i, old in enumerate(labels)}
    reduced = IncidenceSpec.make(
        len(labels), [frozenset(relabel[x] for x in m) for m in points]
    )
    return reduced, tuple(removed)


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


@dataclass
class RealizabilityReport:
    spec: IncidenceSpec
    frame: NormalizationFrame
    system: ConstraintSystem
    elimination: EliminationResult
    verdict: ModuliVerdict
    shortcuts: list[VerdictShortcut]


def realize(spec: IncidenceSpec, *, node_guard: int = 200_000) -> RealizabilityReport:
    """Full pipeline: normalize, propagate, eliminate, filter, classify.

    Falls back to later anchor pairs when the preferred frame leaves too
    many lines unconstructed.
    """
    last: GuardExceeded | None = None
    system = None
    frame = None
    for p_anchor, r_anchor in _anchor_candidates(spec):
        frame = _build_frame(spec, p_anchor, r_anchor)
        try:
            system = propagate(frame, spec)
            break
        except GuardExceeded as exc:
            last = exc
    if system is None or frame is None:
        raise last if last is not None else NoPencilPair("no usable pencil pair")
    elimination, verdict = _settle(system, spec, node_guard)
    shortcuts = classify_shortcuts(spec.expected())
    return RealizabilityReport(spec, frame, system, elimination, verdict, shortcuts)
