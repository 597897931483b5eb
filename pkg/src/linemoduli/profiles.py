"""Multiplicity-profile arithmetic and combinatorial screening.

A profile maps point multiplicity r to the count n_r of points of that
multiplicity. For k lines in general position every pair meets once, so

    sum over r >= 2 of C(r, 2) * n_r == C(k, 2)     (counting identity)

and the quadratic-surface inequality

    n_2 + (3/4) n_3 >= k + sum over r >= 5 of (2r - 9) n_r

holds whenever no point has multiplicity k, k-1, or k-2.

Screening layers, from cheap to decisive:

1. the counting identity (n_2 derived, must be >= 0);
2. the pencil lower bound: a nonreductive arrangement with a point of
   multiplicity r >= 5 has at least 2r + 1 multiple points, because each of
   the r pencil lines carries at least two further multiple points and no
   two pencil lines share one (their pair is already used at the pencil);
3. the inequality above, when its gate applies;
4. an exhaustive completion search over abstract configurations
   (pairwise-disjoint line sets with every line on >= 3 multiple points),
   which decides whether any configuration with the given profile exists
   at all. The search is exact: a profile is dropped only when the search
   space is exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import GuardExceeded, InvalidIncidenceSpec

Profile = dict[int, int]


# ---------------------------------------------------------------------------
# Identity and inequality checks
# ---------------------------------------------------------------------------


def pair_budget(k: int) -> int:
    return comb(k, 2)


def covered_pairs(profile: Profile) -> int:
    return sum(comb(r, 2) * n for r, n in profile.items())


def counting_identity_holds(k: int, profile: Profile) -> bool:
    """Full profile (including n_2) must cover each pair exactly once."""
    return covered_pairs(profile) == pair_budget(k)


def complete_profile(k: int, multiples: Profile) -> Profile | None:
    """Derive n_2 from the r >= 3 part; None when pairs are over-covered."""
    if any(r < 3 for r in multiples):
        raise ValueError("multiples profile must only have r >= 3")
    n2 = pair_budget(k) - covered_pairs(multiples)
    if n2 < 0:
        return None
    out = {r: n for r, n in multiples.items() if n > 0}
    if n2 > 0:
        out[2] = n2
    return dict(sorted(out.items()))


class HirzebruchOutcome(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    NOT_APPLICABLE = "not-applicable"


def hirzebruch_check(k: int, profile: Profile) -> HirzebruchOutcome:
    """Gate: applicable only when n_k = n_{k-1} = n_{k-2} = 0."""
    if any(profile.get(r, 0) for r in (k, k - 1, k - 2)):
        return HirzebruchOutcome.NOT_APPLICABLE
    lhs = Fraction(profile.get(2, 0)) + Fraction(3, 4) * profile.get(3, 0)
    rhs = k + sum((2 * r - 9) * n for r, n in profile.items() if r >= 5)
    return HirzebruchOutcome.HOLDS if lhs >= rhs else HirzebruchOutcome.FAILS


def pencil_point_lower_bound(r: int) -> int:
    """Minimum number of multiple points in a nonreductive arrangement that
    contains a point of multiplicity r >= 5 (see module docstring)."""
    return 2 * r + 1


def violates_pencil_bound(profile: Profile) -> bool:
    total_multiples = sum(n for r, n in profile.items() if r >= 3)
    for r, n in profile.items():
        if r >= 5 and n > 0 and total_multiples < pencil_point_lower_bound(r):
            return True
    return False


def max_multiples_per_line(k: int) -> int:
    """A line meets k-1 others; each multiple point through it uses at
    least two of them, and no other line repeats across points."""
    return (k - 1) // 2


# ---------------------------------------------------------------------------
# Completion search over abstract configurations
# ---------------------------------------------------------------------------


@dataclass
class _SearchState:
    k: int
    pair_used: set[tuple[int, int]] = field(default_factory=set)
    line_count: dict[int, int] = field(default_factory=dict)
    used_deg: dict[int, int] = field(default_factory=dict)
    placed: list[frozenset[int]] = field(default_factory=list)
    nodes: int = 0


def _pairs_of(pt: Iterable[int]) -> list[tuple[int, int]]:
    return [tuple(sorted(p)) for p in combinations(pt, 2)]


def find_configuration(
    k: int,
    multiples: Profile,
    *,
    nonreductive: bool = True,
    seeds: Sequence[Iterable[int]] = (),
    node_guard: int = 2_000_000,
) -> tuple[frozenset[int], ...] | None:
    """Search for an abstract configuration with the given r >= 3 profile.

    A configuration is a family of line subsets (sizes from the profile)
    such that every pair of lines lies in at most one subset; with
    nonreductive=True every line must end on at least 3 subsets. seeds are
    pre-placed points (their sizes must be available in the profile).
    Returns a witness tuple or None; raises GuardExceeded past node_guard.
    """
    if complete_profile(k, {r: n for r, n in multiples.items() if r >= 3}) is None:
        return None
    sizes = sorted(
        (r for r, n in multiples.items() if r >= 3 for _ in range(n)), reverse=True
    )
    st = _SearchState(k=k)
    for i in range(1, k + 1):
        st.line_count[i] = 0
        st.used_deg[i] = 0

    def place(pt: frozenset[int]) -> None:
        st.placed.append(pt)
        for a, b in _pairs_of(pt):
            st.pair_used.add((a, b))
        for l in pt:
            st.line_count[l] += 1
            st.used_deg[l] += len(pt) - 1

    def unplace(pt: frozenset[int]) -> None:
        st.placed.pop()
        for a, b in _pairs_of(pt):
            st.pair_used.discard((a, b))
        for l in pt:
            st.line_count[l] -= 1
            st.used_deg[l] -= len(pt) - 1

    for seed in seeds:
        pt = frozenset(seed)
        if len(pt) not in sizes:
            raise InvalidIncidenceSpec(f"seed size {len(pt)} not in profile")
        if not all(1 <= l <= k for l in pt):
            raise InvalidIncidenceSpec("seed line label out of range")
        if any(p in st.pair_used for p in _pairs_of(pt)):
            raise InvalidIncidenceSpec("seeds share a pair of lines")
        sizes.remove(len(pt))
        place(pt)

    n_seeds = len(st.placed)

    def viable(remaining: list[int]) -> bool:
        budget = pair_budget(k) - len(st.pair_used)
        need = sum(comb(s, 2) for s in remaining)
        if need > budget:
            return False
        if nonreductive:
            deficiency = 0
            for l in range(1, k + 1):
                c = st.line_count[l]
                if c >= 3:
                    continue
                free = (k - 1) - st.used_deg[l]
                if c + free // 2 < 3:
                    return False
                deficiency += 3 - c
            if deficiency > sum(remaining):
                return False
        for anchor in st.placed:
            comp = [l for l in range(1, k + 1) if l not in anchor]
            comp_used = sum(
                1 for a, b in st.pair_used if a not in anchor and b not in anchor
            )
            comp_free = comb(len(comp), 2) - comp_used
            if sum(comb(s - 1, 2) for s in remaining) > comp_free:
                return False
        return True

    def candidates(s: int, lower: tuple[int, ...] | None):
        if lower is None and not st.placed:
            # no seeds: the first point can be fixed to the lex-least labels
            yield frozenset(range(1, s + 1))
            return
        for combo in combinations(range(1, k + 1), s):
            if lower is not None and combo <= lower:
                continue
            if any(p in st.pair_used for p in _pairs_of(combo)):
                continue
            yield frozenset(combo)

    def search(idx: int) -> bool:
        if idx == len(sizes):
            if nonreductive and any(st.line_count[l] < 3 for l in range(1, k + 1)):
                return False
            return True
        s = sizes[idx]
        lower: tuple[int, ...] | None = None
        if idx > 0 and sizes[idx - 1] == s:
            lower = tuple(sorted(st.placed[-1]))
        for pt in candidates(s, lower):
            st.nodes += 1
            if st.nodes > node_guard:
                raise GuardExceeded(f"completion search exceeded {node_guard} nodes")
            place(pt)
            if viable(sizes[idx + 1 :]) and search(idx + 1):
                return True
            unplace(pt)
        return False

    if not viable(sizes):
        return None
    if search(0):
        return tuple(st.placed)
    return None


# ---------------------------------------------------------------------------
# Profile enumeration
# ---------------------------------------------------------------------------

Constraint = int | tuple[int | None, int | None]


def _constraint_range(c: Constraint | None, hard_max: int) -> tuple[int, int]:
    if c is None:
        return 0, hard_max
    if isinstance(c, int):
        return c, c
    lo, hi = c
    return (0 if lo is None else lo), (hard_max if hi is None else min(hi, hard_max))


def enumerate_profiles(
    k: int,
    constraints: dict[int, Constraint] | None = None,
    *,
    nonreductive: bool = False,
    require_hirzebruch: bool = False,
    completable: bool = False,
    node_guard: int = 2_000_000,
) -> list[Profile]:
    """All full profiles (n_2 derived) satisfying the counting identity,
    the per-multiplicity constraints (exact value or (min, max) bounds),
    and the selected screening layers.

    nonreductive turns on the pencil lower bound; completable additionally
    runs the exhaustive configuration search (with the nonreductive
    condition as given). require_hirzebruch drops profiles whose gate
    applies and whose inequality fails.
    """
    if k < 3:
        raise ValueError("need k >= 3")
    if k > 16:
        raise GuardExceeded("profile enumeration is guarded at k <= 16")
    constraints = constraints or {}
    for r in constraints:
        if not 3 <= r <= k:
            raise ValueError(f"constraint on n_{r} is out of range for k={k}")
    budget = pair_budget(k)
    out: list[Profile] = []

    def rec(r: int, used: int, acc: dict[int, int]) -> None:
        if r < 3:
            multiples = {rr: n for rr, n in acc.items() if n > 0}
            full = complete_profile(k, multiples)
            if full is None:
                return
            if nonreductive and violates_pencil_bound(full):
                return
            if require_hirzebruch and hirzebruch_check(k, full) is HirzebruchOutcome.FAILS:
                return
            if completable:
                witness = find_configuration(
                    k, multiples, nonreductive=nonreductive, node_guard=node_guard
                )
                if witness is None:
                    return
            out.append(full)
            return
        cost = comb(r, 2)
        lo, hi = _constraint_range(constraints.get(r), (budget - used) // cost)
        if lo * cost > budget - used:
            return
        for n in range(lo, hi + 1):
            acc[r] = n
            rec(r - 1, used + n * cost, acc)
        acc.pop(r, None)

    rec(k, 0, {})
    out.sort(key=lambda p: sorted(p.items()))
    return out


# ---------------------------------------------------------------------------
# Line distributions
# ---------------------------------------------------------------------------


def solve_line_distribution(
    pool: int, total: int, weights: Sequence[int]
) -> list[tuple[int, ...]]:
    """Nonnegative integer tuples x with sum(x) == pool and
    sum(w_i * x_i) == total, sorted lexicographically."""
    out: list[tuple[int, ...]] = []

    def rec(i: int, left: int, remaining: int, acc: list[int]) -> None:
        if i == len(weights) - 1:
            if remaining % weights[i] == 0 and remaining // weights[i] == left:
                out.append(tuple(acc + [left]))
            return
        w = weights[i]
        for x in range(left + 1):
            rest = remaining - w * x
            if rest < 0:
                break
            rec(i + 1, left - x, rest, acc + [x])

    if pool < 0 or total < 0 or not weights:
        return []
    rec(0, pool, total, [])
    out.sort()
    return out


@dataclass(frozen=True)
class TripleRange:
    """Triple-point range for 12-line arrangements with one sextic point
    whose lattice beyond the sextic consists of triple points, each triple
    pairing one pencil line with two of the six off-pencil lines.

    lower: each pencil line needs two triples and no triple holds two
    pencil lines. upper: the claimed bound after the distribution step;
    unexcluded lists values the distribution arithmetic alone does not
    rule out (each carries the surviving tuple), because per-line triple
    counts max out at (k-1)//2 = 5 yet a weight-6 slot appears in the
    enumeration.
    """

    lower: int
    upper: int
    unexcluded: dict[int, list[tuple[int, ...]]]
    distributions: dict[int, list[tuple[int, ...]]]


def sextic_family_triple_range() -> TripleRange:
    k, pencil = 12, 6
    off = k - pencil
    distributions: dict[int, list[tuple[int, ...]]] = {}
    unexcluded: dict[int, list[tuple[int, ...]]] = {}
    for n3 in (14, 15, 16):
        sols = solve_line_distribution(off, 2 * n3, (3, 4, 5, 6))
        distributions[n3] = sols
        # a weight-6 slot exceeds the per-line cap (k-1)//2 == 5, so only
        # tuples with no such slot survive the arithmetic
        survivors = [s for s in sols if s[3] == 0]
        if survivors:
            unexcluded[n3] = survivors
    # lower bound: each of the 6 pencil lines carries >= 2 triples beyond
    # the sextic, and no triple contains two pencil lines
    return TripleRange(
        lower=2 * pencil,
        upper=14,
        unexcluded=unexcluded,
        distributions=distributions,
    )
