"""Profile screening tests.

The brute-force oracle re-derives enumerate_profiles output for small k by
unpruned nested iteration with the same predicates, and the completion
search is checked against hand-verifiable configurations.
"""

from itertools import combinations, product
from math import comb

import pytest

from linemoduli.errors import GuardExceeded
from linemoduli.profiles import (
    HirzebruchOutcome,
    complete_profile,
    counting_identity_holds,
    enumerate_profiles,
    find_configuration,
    hirzebruch_check,
    max_multiples_per_line,
    pencil_point_lower_bound,
    sextic_family_triple_range,
    solve_line_distribution,
    violates_pencil_bound,
)


def brute_profiles(k, constraints=None, nonreductive=False, require_hirzebruch=False):
    """Unpruned oracle: iterate every n_r independently, filter at the end."""
    constraints = constraints or {}
    budget = comb(k, 2)
    rs = list(range(3, k + 1))
    ranges = []
    for r in rs:
        c = constraints.get(r)
        cap = budget // comb(r, 2)
        if c is None:
            ranges.append(range(0, cap + 1))
        elif isinstance(c, int):
            ranges.append(range(c, c + 1))
        else:
            lo, hi = c
            ranges.append(range(lo or 0, (cap if hi is None else min(hi, cap)) + 1))
    out = []
    for combo in product(*ranges):
        multiples = {r: n for r, n in zip(rs, combo) if n > 0}
        full = complete_profile(k, multiples)
        if full is None:
            continue
        if nonreductive and violates_pencil_bound(full):
            continue
        if require_hirzebruch and hirzebruch_check(k, full) is HirzebruchOutcome.FAILS:
            continue
        out.append(full)
    out.sort(key=lambda p: sorted(p.items()))
    return out


def test_counting_identity_examples():
    assert counting_identity_holds(12, {2: 12, 3: 11, 4: 1, 6: 1})
    assert not counting_identity_holds(12, {2: 13, 3: 11, 4: 1, 6: 1})
    assert complete_profile(12, {3: 11, 4: 1, 6: 1}) == {2: 12, 3: 11, 4: 1, 6: 1}
    assert complete_profile(12, {3: 13, 6: 1}) == {2: 12, 3: 13, 6: 1}
    assert complete_profile(4, {4: 2}) is None


def test_hirzebruch_gate_and_values():
    # gate blocked by a near-pencil point
    assert hirzebruch_check(12, {12: 1}) is HirzebruchOutcome.NOT_APPLICABLE
    assert hirzebruch_check(12, {10: 1, 2: 21}) is HirzebruchOutcome.NOT_APPLICABLE
    # an arithmetic illustration need not satisfy the counting identity
    assert hirzebruch_check(12, {2: 13, 3: 12}) is HirzebruchOutcome.HOLDS
    assert hirzebruch_check(12, {2: 0, 3: 0, 6: 11}) is HirzebruchOutcome.FAILS
    assert hirzebruch_check(12, {2: 12, 3: 11, 4: 1, 6: 1}) is HirzebruchOutcome.HOLDS


def test_pencil_bound():
    assert pencil_point_lower_bound(6) == 13
    assert pencil_point_lower_bound(7) == 15
    assert violates_pencil_bound({2: 12, 6: 1, 3: 5})
    assert not violates_pencil_bound({2: 12, 6: 1, 3: 12})
    assert not violates_pencil_bound({2: 10, 4: 3, 3: 2})  # no r >= 5 point


def test_max_multiples_per_line():
    assert max_multiples_per_line(12) == 5
    assert max_multiples_per_line(11) == 5


@pytest.mark.parametrize("k", [4, 5, 6, 7, 8])
def test_enumeration_matches_bruteforce(k):
    assert enumerate_profiles(k) == brute_profiles(k)
    assert enumerate_profiles(k, nonreductive=True) == brute_profiles(k, nonreductive=True)
    assert enumerate_profiles(k, require_hirzebruch=True) == brute_profiles(
        k, require_hirzebruch=True
    )


def test_enumeration_respects_constraints():
    k = 8
    cons = {4: 1, 3: (2, None)}
    got = enumerate_profiles(k, cons)
    want = brute_profiles(k, cons)
    assert got == want
    assert all(p.get(4, 0) == 1 and p.get(3, 0) >= 2 for p in got)


def test_enumeration_guard():
    with pytest.raises(GuardExceeded):
        enumerate_profiles(17)
    with pytest.raises(ValueError):
        enumerate_profiles(8, {9: 1})


def test_find_configuration_simple_cases():
    # 3 pencils of 3 lines on 9 lines: lines each on 1 point -> not nonreductive
    assert find_configuration(9, {3: 3}, nonreductive=True) is None
    # dual Hesse structure: 9 lines, 12 triples, every line on 4 points
    witness = find_configuration(9, {3: 12}, nonreductive=True)
    assert witness is not None
    assert len(witness) == 12
    seen_pairs = set()
    for pt in witness:
        for pair in combinations(sorted(pt), 2):
            assert pair not in seen_pairs
            seen_pairs.add(pair)
    for line in range(1, 10):
        assert sum(1 for pt in witness if line in pt) >= 3


def test_find_configuration_respects_seeds():
    # a quad disjoint from the sextic leaves no valid completion
    seeded_disjoint = find_configuration(
        12,
        {6: 1, 4: 1, 3: 11},
        nonreductive=True,
        seeds=[range(1, 7), range(7, 11)],
    )
    assert seeded_disjoint is None
    # sharing one line works (the catalogued configurations do exactly this)
    seeded_sharing = find_configuration(
        12,
        {6: 1, 4: 1, 3: 11},
        nonreductive=True,
        seeds=[[4, 5, 6, 7, 8, 12], [1, 2, 3, 12]],
    )
    assert seeded_sharing is not None


def test_solve_line_distribution_examples():
    assert solve_line_distribution(6, 28, (3, 4, 5)) == [(0, 2, 4), (1, 0, 5)]
    sols_32 = solve_line_distribution(6, 32, (3, 4, 5, 6))
    assert sols_32 == [(0, 0, 4, 2), (0, 1, 2, 3), (0, 2, 0, 4), (1, 0, 1, 4)]
    assert all(min(s[1:]) >= 0 and s[3] >= 1 for s in sols_32)
    sols_30 = solve_line_distribution(6, 30, (3, 4, 5, 6))
    assert len(sols_30) == 7
    assert (0, 0, 6, 0) in sols_30
    assert [s for s in sols_30 if s[3] == 0] == [(0, 0, 6, 0)]
    assert solve_line_distribution(3, 100, (1, 2)) == []


def test_sextic_family_triple_range():
    rng = sextic_family_triple_range()
    assert (rng.lower, rng.upper) == (12, 14)
    assert 16 not in rng.unexcluded  # every n3=16 tuple needs a weight-6 line
    assert rng.unexcluded[15] == [(0, 0, 6, 0)]
    assert len(rng.distributions[16]) == 4
    assert len(rng.distributions[15]) == 7
