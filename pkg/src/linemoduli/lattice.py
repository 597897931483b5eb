"""Intersection lattices of explicit line arrangements.

An arrangement is a tuple of pairwise distinct projective lines over one
branch context. Its intersection lattice records, with lines labeled
1..k, the multiple points (sets of >= 3 concurrent lines) and the count of
ordinary double points. Computing over a reducible modulus forks branches
via the driver in lattice_branches.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .branch import BranchCtx, map_branches
from .errors import CoincidentLines, GuardExceeded, InvalidArrangement, InvalidIncidenceSpec
from .projective import ProjLine, ProjPoint, meet

# ---------------------------------------------------------------------------
# Arrangements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arrangement:
    ctx: BranchCtx
    lines: tuple[ProjLine, ...]

    @property
    def k(self) -> int:
        return len(self.lines)


def make_arrangement(ctx: BranchCtx, triples: Sequence[Sequence]) -> Arrangement:
    """Validate and build: at least 3 lines, pairwise non-proportional."""
    lines = tuple(ProjLine.make(ctx, t) for t in triples)
    if len(lines) < 3:
        raise InvalidArrangement(f"need at least 3 lines, got {len(lines)}")
    seen: dict[ProjLine, int] = {}
    for idx, line in enumerate(lines):
        if line in seen:
            raise InvalidArrangement(
                f"lines {seen[line] + 1} and {idx + 1} are proportional"
            )
        seen[line] = idx
    return Arrangement(ctx, lines)


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntersectionLattice:
    """Multiple points as frozensets of 1-based line labels, plus the
    number of ordinary double points."""

    k: int
    multiples: frozenset[frozenset[int]]
    n2: int

    def profile(self) -> dict[int, int]:
        """Multiplicity profile {r: n_r} including r = 2; zero counts omitted."""
        out: dict[int, int] = {}
        if self.n2:
            out[2] = self.n2
        for m in self.multiples:
            out[len(m)] = out.get(len(m), 0) + 1
        return dict(sorted(out.items()))

    def points_on_line(self, label: int) -> list[frozenset[int]]:
        return sorted((m for m in self.multiples if label in m), key=sorted)

    @property
    def is_nonreductive(self) -> bool:
        """Every line passes through at least 3 multiple points."""
        return all(
            sum(1 for m in self.multiples if i in m) >= 3 for i in range(1, self.k + 1)
        )

    def sorted_multiples(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(m)) for m in self.multiples)


def compute_lattice(arr: Arrangement) -> IntersectionLattice:
    points: dict[ProjPoint, set[int]] = {}
    for i, j in combinations(range(arr.k), 2):
        p = meet(arr.lines[i], arr.lines[j])
        points.setdefault(p, set()).update((i + 1, j + 1))
    multiples = frozenset(frozenset(s) for s in points.values() if len(s) >= 3)
    n2 = sum(1 for s in points.values() if len(s) == 2)
    return IntersectionLattice(arr.k, multiples, n2)


def lattice_branches(
    ctx: BranchCtx, triples: Sequence[Sequence]
) -> list[tuple[BranchCtx, IntersectionLattice | None]]:
    """Compute the lattice per branch; None marks branches where the lines
    degenerate (two become proportional)."""

    def fn(c: BranchCtx) -> IntersectionLattice | None:
        try:
            return compute_lattice(make_arrangement(c, triples))
        except (InvalidArrangement, CoincidentLines):
            return None

    return map_branches(ctx, fn)


def expected_lattice(k: int, multiples: Iterable[Iterable[int]]) -> IntersectionLattice:
    """Lattice an abstract incidence specification would realize: the given
    multiple points plus doubles for every uncovered pair."""
    ms = frozenset(frozenset(m) for m in multiples)
    for m in ms:
        if len(m) < 3:
            raise InvalidIncidenceSpec(f"multiple point with {len(m)} lines: {sorted(m)}")
        if not all(1 <= i <= k for i in m):
            raise InvalidIncidenceSpec(f"line label out of range in {sorted(m)}")
    for a, b in combinations(ms, 2):
        if len(a & b) > 1:
            raise InvalidIncidenceSpec(
                f"points {sorted(a)} and {sorted(b)} share two lines"
            )
    covered = sum(comb(len(m), 2) for m in ms)
    n2 = comb(k, 2) - covered
    if n2 < 0:
        raise InvalidIncidenceSpec("multiple points cover more pairs than exist")
    return IntersectionLattice(k, ms, n2)


# ---------------------------------------------------------------------------
# Isomorphism
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsoResult:
    found: bool
    perm: dict[int, int] | None
    reason: str | None

    def __bool__(self) -> bool:
        return self.found


def _line_signature(lat: IntersectionLattice, label: int) -> tuple[int, ...]:
    return tuple(sorted(len(m) for m in lat.multiples if label in m))


def lattice_isomorphic(a: IntersectionLattice, b: IntersectionLattice) -> IsoResult:
    """Search for a line relabeling carrying a's multiples onto b's.

    Doubles are determined by the multiples and the line count, so matching
    multiples plus equal k is full lattice isomorphism.
    """
    if a.k != b.k:
        return IsoResult(False, None, f"line counts differ: {a.k} vs {b.k}")
    if a.profile() != b.profile():
        return IsoResult(False, None, f"profiles differ: {a.profile()} vs {b.profile()}")
    sig_a = {i: _line_signature(a, i) for i in range(1, a.k + 1)}
    sig_b = {i: _line_signature(b, i) for i in range(1, b.k + 1)}
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return IsoResult(False, None, "per-line multiplicity signatures differ")

    # pairwise co-occurrence: size of the unique multiple containing both
    def co_map(lat: IntersectionLattice) -> dict[tuple[int, int], int]:
        out = {}
        for m in lat.multiples:
            for i, j in combinations(sorted(m), 2):
                out[(i, j)] = len(m)
        return out

    co_a, co_b = co_map(a), co_map(b)

    def co(co_m, i, j):
        return co_m.get((i, j) if i < j else (j, i))

    order = sorted(range(1, a.k + 1), key=lambda i: (sig_a[i], i))
    # rarest signatures first shrink the branching factor
    freq: dict[tuple[int, ...], int] = {}
    for s in sig_b.values():
        freq[s] = freq.get(s, 0) + 1
    order.sort(key=lambda i: (freq[sig_a[i]], sig_a[i], i))

    assigned: dict[int, int] = {}
    used: set[int] = set()
    b_multiples = b.multiples
    mult_by_line: dict[int, list[frozenset[int]]] = {
        i: [m for m in a.multiples if i in m] for i in range(1, a.k + 1)
    }

    def backtrack(pos: int) -> bool:
        if pos == len(order):
            image = frozenset(frozenset(assigned[i] for i in m) for m in a.multiples)
            return image == b_multiples
        i = order[pos]
        for j in range(1, b.k + 1):
            if j in used or sig_b[j] != sig_a[i]:
                continue
            if not all(co(co_a, i, i2) == co(co_b, j, j2) for i2, j2 in assigned.items()):
                continue
            assigned[i] = j
            used.add(j)
            complete = all(
                frozenset(assigned[x] for x in m) in b_multiples
                for m in mult_by_line[i]
                if all(x in assigned for x in m)
            )
            if complete and backtrack(pos + 1):
                return True
            del assigned[i]
            used.discard(j)
        return False

    if not backtrack(0):
        return IsoResult(False, None, "no relabeling carries the multiples onto each other")
    return IsoResult(True, dict(assigned), None)


# ---------------------------------------------------------------------------
# Pencil covers
# ---------------------------------------------------------------------------


def cover_number(lat: IntersectionLattice, max_size: int = 4) -> tuple[int, list[frozenset[int]]] | None:
    """Smallest set of multiple points covering every line, searched up to
    max_size points; None when no cover that small exists."""
    multiples = sorted(lat.multiples, key=lambda m: (-len(m), sorted(m)))
    all_lines = set(range(1, lat.k + 1))
    if len(multiples) > 64:
        raise GuardExceeded("too many multiple points for exhaustive cover search")
    for size in range(1, max_size + 1):
        for combo in combinations(multiples, size):
            covered = set()
            for m in combo:
                covered |= m
            if covered == all_lines:
                return size, list(combo)
    return None


def is_simple_c3(lat: IntersectionLattice) -> tuple[bool, tuple[int, int, int] | None]:
    """Test for a simple three-line cover of the multiple points.

    A witness is a triple of lines such that every multiple point contains
    at least one of them, and additionally either (a) the three lines are
    concurrent, or (b) one of them carries exactly one multiple point that
    avoids the other two. Returns (True, triple) on the first witness in
    lexicographic order, else (False, None).
    """
    if not lat.multiples:
        return False, None
    for tri in combinations(range(1, lat.k + 1), 3):
        s = set(tri)
        if not all(m & s for m in lat.multiples):
            continue
        if any(s <= m for m in lat.multiples):
            return True, tri
        for line in tri:
            rest = s - {line}
            private = [m for m in lat.multiples if line in m and not (m & rest)]
            if len(private) == 1:
                return True, tri
    return False, None
