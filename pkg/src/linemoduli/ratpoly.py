"""Exact polynomial arithmetic over Q.

Two layers:

- UniPoly: dense univariate polynomials as ascending coefficient tuples.
  The zero polynomial is the empty tuple; the last entry of a nonzero tuple
  is nonzero. Used for branch moduli, Sturm chains, and final eliminants.
- MultiPoly: sparse multivariate polynomials as maps from exponent tuples
  to nonzero rational coefficients over an explicit, canonically ordered
  variable tuple. Used by the incidence solver.

Algorithm choices:

- univariate gcds run on integer-primitive representatives with a
  fraction-free subresultant remainder sequence, so coefficient growth stays
  polynomial instead of exponential;
- resultants are Sylvester determinants; the multivariate determinant uses
  Bareiss elimination, whose interior divisions are exact over the
  coefficient ring;
- multivariate gcds use the primitive Euclidean algorithm on a recursive
  (main-variable) view;
- real-root counting uses Sturm chains on the squarefree part, interval
  counts are over open intervals, and a Cauchy bound stands in for infinity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Rat = Fraction

# Variable universe, in canonical order. Names outside the table sort after
# all known names, alphabetically; "w" is reserved for primitive-element
# flattening inside the solver.
KNOWN_VARS = (
    "t", "t1", "t2", "t3", "t4", "t5",
    "u1", "u2", "u3", "u4", "u5", "u6", "u7", "u8", "u9",
    "w", "X", "Y", "Z",
)
_VAR_RANK = {name: i for i, name in enumerate(KNOWN_VARS)}


def var_sort_key(name: str) -> tuple[int, int, str]:
    if name in _VAR_RANK:
        return (0, _VAR_RANK[name], "")
    return (1, 0, name)


def _rat(x: Fraction | int | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _sign(x: Fraction) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


# ---------------------------------------------------------------------------
# Univariate layer
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over Q, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int | str] = ()):
        cs = [_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly(())

    @staticmethod
    def one() -> "UniPoly":
        return UniPoly((1,))

    @staticmethod
    def constant(c: Fraction | int | str) -> "UniPoly":
        return UniPoly((_rat(c),))

    @staticmethod
    def x() -> "UniPoly":
        return UniPoly((0, 1))

    @staticmethod
    def from_roots(roots: Sequence[Fraction | int | str]) -> "UniPoly":
        p = UniPoly.one()
        for r in roots:
            p = p * UniPoly((-_rat(r), 1))
        return p

    # -- basic queries

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    # -- ring operations

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly | Fraction | int") -> "UniPoly":
        if isinstance(other, (Fraction, int)):
            return UniPoly(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return UniPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def __rmul__(self, other: Fraction | int) -> "UniPoly":
        return self * other

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 0)
        r = list(self.coeffs)
        dlead = other.leading
        dn = other.degree
        while len(r) - 1 >= dn and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < dn:
                break
            shift = len(r) - 1 - dn
            factor = r[-1] / dlead
            q[shift] = factor
            for i, c in enumerate(other.coeffs):
                r[shift + i] -= factor * c
            r.pop()
        return UniPoly(q), UniPoly(r)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    # -- calculus and evaluation

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly.constant(c)
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        lead = self.leading
        if lead == 1:
            return self
        return UniPoly(tuple(c / lead for c in self.coeffs))

    # -- dunder plumbing

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("UniPoly", self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)!r})"


# -- integer-primitive representatives


def _int_primitive(f: UniPoly) -> list[int]:
    """Scale f by a positive rational so coefficients are coprime integers."""
    if f.is_zero:
        return []
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in f.coeffs))
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo remainder lc(b)^(deg a - deg b + 1) * a mod b over Z.

    The multiplier is exactly lc(b)^(deg a - deg b + 1) so the subresultant
    divisions stay exact even when intermediate leading terms cancel.
    """
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    need = (len(a) - 1) - db + 1
    steps = 0
    while len(r) - 1 >= db:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        shift = len(r) - 1 - db
        lead = r[-1]
        r = [c * lb for c in r]
        steps += 1
        for i, c in enumerate(b):
            r[shift + i] -= lead * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    if steps < need and r:
        scale = lb ** (need - steps)
        r = [c * scale for c in r]
    return r


def _int_content_free(c: list[int]) -> list[int]:
    from math import gcd

    g = 0
    for x in c:
        g = gcd(g, x)
    if g == 0:
        return []
    out = [x // g for x in c]
    if out[-1] < 0:
        out = [-x for x in out]
    return out


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd over Q via the fraction-free subresultant sequence."""
    if f.is_zero:
        return g.monic()
    if g.is_zero:
        return f.monic()
    a = _int_primitive(f)
    b = _int_primitive(g)
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        return UniPoly.one()
    gg, hh = 1, 1
    while True:
        d = (len(a) - 1) - (len(b) - 1)
        r = _int_pseudo_rem(a, b)
        if not r:
            return UniPoly(_int_content_free(b)).monic()
        if len(r) == 1:
            return UniPoly.one()
        divisor = gg * hh**d
        a, b = b, [c // divisor for c in r]
        gg = a[-1]
        hh = (gg**d) // (hh ** (d - 1)) if d >= 1 else hh


def poly_extended_gcd(f: UniPoly, g: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return (d, s, t) with s*f + t*g = d and d the monic gcd (or zero)."""
    r0, r1 = f, g
    s0, s1 = UniPoly.one(), UniPoly.zero()
    t0, t1 = UniPoly.zero(), UniPoly.one()
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    lead = r0.leading
    inv = Fraction(1) / lead
    return r0 * inv, s0 * inv, t0 * inv


def squarefree_part(f: UniPoly) -> UniPoly:
    """Monic product of the distinct irreducible factors of f."""
    if f.degree <= 0:
        return f.monic() if not f.is_zero else f
    d = poly_gcd(f, f.derivative())
    return (f // d).monic()


def resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """Sylvester resultant. Convention: the matrix stacks deg(g) rows of f
    coefficients above deg(f) rows of g coefficients, so
    resultant(x - a, x - b) == a - b."""
    m, n = f.degree, g.degree
    if f.is_zero or g.is_zero:
        return Fraction(0)
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    rows: list[list[Fraction]] = []
    for i in range(n):
        rows.append([Fraction(0)] * i + fd + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gd + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        pivot = None
        for r in range(col, size):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col]
        det *= pv
        for r in range(col + 1, size):
            if rows[r][col] == 0:
                continue
            factor = rows[r][col] / pv
            for c in range(col, size):
                rows[r][c] -= factor * rows[col][c]
    return det


def discriminant(f: UniPoly) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.leading


# -- Sturm machinery


def sturm_chain(f: UniPoly) -> list[UniPoly]:
    """Canonical Sturm chain of the squarefree part of f."""
    p = squarefree_part(f)
    if p.degree <= 0:
        return [p]
    chain = [p, p.derivative()]
    while True:
        r = chain[-2] % chain[-1]
        if r.is_zero:
            break
        chain.append(-r)
    return chain


def _sign_variations(signs: Iterable[int]) -> int:
    seq = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(seq, seq[1:]) if a * b < 0)


def _variations_at(chain: Sequence[UniPoly], x: Fraction) -> int:
    return _sign_variations(_sign(p(x)) for p in chain)


def _variations_at_inf(chain: Sequence[UniPoly], positive: bool) -> int:
    signs = []
    for p in chain:
        if p.is_zero:
            signs.append(0)
        elif positive:
            signs.append(_sign(p.leading))
        else:
            signs.append(_sign(p.leading) * (-1 if p.degree % 2 else 1))
    return _sign_variations(signs)


def cauchy_bound(f: UniPoly) -> Fraction:
    """Strict bound: every real root r of f satisfies |r| < bound."""
    if f.degree < 1:
        raise ValueError("bound needs degree >= 1")
    lead = abs(f.leading)
    return 1 + max(abs(c) for c in f.coeffs[:-1]) / lead


def count_real_roots(
    f: UniPoly,
    lo: Fraction | int | None = None,
    hi: Fraction | int | None = None,
) -> int:
    """Distinct real roots of f in the open interval (lo, hi).

    None endpoints mean -infinity / +infinity.
    """
    if f.is_zero:
        raise ValueError("zero polynomial has every point as a root")
    if f.degree == 0:
        return 0
    chain = sturm_chain(f)
    sf = chain[0]
    if lo is not None and hi is not None and _rat(lo) >= _rat(hi):
        return 0
    v_lo = _variations_at_inf(chain, positive=False) if lo is None else _variations_at(chain, _rat(lo))
    v_hi = _variations_at_inf(chain, positive=True) if hi is None else _variations_at(chain, _rat(hi))
    count = v_lo - v_hi
    if hi is not None and sf(_rat(hi)) == 0:
        count -= 1
    return count


def isolate_real_roots(f: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, one distinct real root each, sorted.

    Each entry (lo, hi) satisfies either lo == hi (the root is exactly lo)
    or lo < root < hi with f(lo) != 0 != f(hi).
    """
    p = squarefree_part(f)
    if p.degree < 1:
        return []
    chain = sturm_chain(p)
    bound = cauchy_bound(p)

    def var_at(x: Fraction) -> int:
        return _variations_at(chain, x)

    out: list[tuple[Fraction, Fraction]] = []
    work = [(-bound, bound, var_at(-bound), var_at(bound))]
    while work:
        lo, hi, vlo, vhi = work.pop()
        n = vlo - vhi
        if p(hi) == 0:
            n -= 1
        if n <= 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if p(mid) == 0:
            out.append((mid, mid))
        vmid = var_at(mid)
        work.append((lo, mid, vlo, vmid))
        work.append((mid, hi, vmid, vhi))
    out.sort(key=lambda iv: iv[0])
    return out


def refine_root(
    f: UniPoly, lo: Fraction, hi: Fraction, eps: Fraction = Fraction(1, 10**7)
) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval below eps by bisection."""
    if lo == hi:
        return lo, hi
    p = squarefree_part(f)
    flo = p(lo)
    while hi - lo >= eps:
        mid = (lo + hi) / 2
        fm = p(mid)
        if fm == 0:
            return mid, mid
        if _sign(flo) * _sign(fm) < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return lo, hi


# ---------------------------------------------------------------------------
# Multivariate layer
# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse multivariate polynomial over Q.

    Invariants: vars is sorted by var_sort_key and every variable occurs in
    some term with positive exponent; terms maps exponent tuples to nonzero
    coefficients. Instances are immutable by convention.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: dict[tuple[int, ...], Fraction]):
        self.vars = vars
        self.terms = terms

    # -- normalized construction

    @staticmethod
    def make(vars: Sequence[str], terms: dict[tuple[int, ...], Fraction | int]) -> "MultiPoly":
        clean = {e: _rat(c) for e, c in terms.items() if c != 0}
        if not clean:
            return MultiPoly((), {})
        used = [i for i in range(len(vars)) if any(e[i] for e in clean)]
        order = sorted(used, key=lambda i: var_sort_key(vars[i]))
        new_vars = tuple(vars[i] for i in order)
        new_terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in clean.items():
            ne = tuple(e[i] for i in order)
            new_terms[ne] = new_terms.get(ne, Fraction(0)) + c
        new_terms = {e: c for e, c in new_terms.items() if c != 0}
        if not new_terms:
            return MultiPoly((), {})
        return MultiPoly(new_vars, new_terms)

    # -- queries

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.vars

    def const_value(self) -> Fraction:
        if self.vars:
            raise ValueError(f"not a constant: {self!r}")
        if not self.terms:
            return Fraction(0)
        return self.terms[()]

    def degree_in(self, var: str) -> int:
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        """Graded-lex leading term (exponent tuple relative to self.vars)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=lambda e: (sum(e), e))
        return e, self.terms[e]

    # -- alignment

    @staticmethod
    def _align(p: "MultiPoly", q: "MultiPoly") -> tuple[tuple[str, ...], dict, dict]:
        if p.vars == q.vars:
            return p.vars, p.terms, q.terms
        union = sorted(set(p.vars) | set(q.vars), key=var_sort_key)
        index = {v: i for i, v in enumerate(union)}
        n = len(union)

        def remap(poly: "MultiPoly") -> dict:
            pos = [index[v] for v in poly.vars]
            out = {}
            for e, c in poly.terms.items():
                ne = [0] * n
                for i, exp in zip(pos, e):
                    ne[i] = exp
                out[tuple(ne)] = c
            return out

        return tuple(union), remap(p), remap(q)

    # -- arithmetic

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        vars_, a, b = MultiPoly._align(self, other)
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly.make(vars_, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly | Fraction | int") -> "MultiPoly":
        if isinstance(other, (Fraction, int)):
            if other == 0:
                return MultiPoly((), {})
            return MultiPoly(self.vars, {e: c * other for e, c in self.terms.items()})
        vars_, a, b = MultiPoly._align(self, other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly.make(vars_, out)

    def __rmul__(self, other: Fraction | int) -> "MultiPoly":
        return self * other

    def __truediv__(self, other: "Fraction | int | MultiPoly") -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if not other.is_constant:
                raise ZeroDivisionError("division only by nonzero constants")
            other = other.const_value()
        other = _rat(other)
        if other == 0:
            raise ZeroDivisionError("division by zero")
        return self * (Fraction(1) / other)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = mp_const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- substitution and evaluation

    def substitute(self, var: str, value: "MultiPoly | Fraction | int") -> "MultiPoly":
        if var not in self.vars:
            return self
        if isinstance(value, (Fraction, int)):
            value = mp_const(value)
        i = self.vars.index(var)
        rest_vars = self.vars[:i] + self.vars[i + 1 :]
        by_exp: dict[int, dict[tuple[int, ...], Fraction]] = {}
        for e, c in self.terms.items():
            k = e[i]
            re = e[:i] + e[i + 1 :]
            by_exp.setdefault(k, {})[re] = c
        acc = MultiPoly((), {})
        power_cache: dict[int, MultiPoly] = {0: mp_const(1)}

        def power(k: int) -> MultiPoly:
            if k not in power_cache:
                power_cache[k] = power(k - 1) * value
            return power_cache[k]

        for k, terms in by_exp.items():
            chunk = MultiPoly.make(rest_vars, terms)
            acc = acc + chunk * power(k)
        return acc

    def evaluate(self, assign: dict, zero=Fraction(0)):
        """Evaluate with a full assignment into any commutative ring.

        Values need +, * with each other and with Fraction, and integer
        powers. zero is the ring's additive identity.
        """
        acc = zero
        for e, c in self.terms.items():
            term = None
            for v, k in zip(self.vars, e):
                if k == 0:
                    continue
                val = assign[v] ** k
                term = val if term is None else term * val
            contrib = c if term is None else c * term
            acc = acc + contrib
        return acc

    # -- plumbing

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash(("MultiPoly", self.vars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from .parse import poly_str

        return f"MultiPoly[{poly_str(self)}]"


def mp_const(c: Fraction | int | str) -> MultiPoly:
    c = _rat(c)
    if c == 0:
        return MultiPoly((), {})
    return MultiPoly((), {(): c})


def mp_var(name: str) -> MultiPoly:
    return MultiPoly((name,), {(1,): Fraction(1)})


def mp_to_unipoly(p: MultiPoly, var: str) -> UniPoly:
    """Convert a polynomial in at most one variable to UniPoly."""
    if p.is_constant:
        return UniPoly((p.const_value(),)) if not p.is_zero else UniPoly.zero()
    if p.vars != (var,):
        raise ValueError(f"not univariate in {var}: vars {p.vars}")
    out = [Fraction(0)] * (p.degree_in(var) + 1)
    for e, c in p.terms.items():
        out[e[0]] = c
    return UniPoly(out)


def unipoly_to_mp(f: UniPoly, var: str) -> MultiPoly:
    return MultiPoly.make((var,), {(i,): c for i, c in enumerate(f.coeffs)})


def exact_div(p: MultiPoly, q: MultiPoly) -> MultiPoly | None:
    """Exact quotient p / q, or None when q does not divide p."""
    if q.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero:
        return MultiPoly((), {})
    if q.is_constant:
        return p / q.const_value()
    vars_, a, b = MultiPoly._align(p, q)
    r = dict(a)
    qe = max(b, key=lambda e: (sum(e), e))
    qc = b[qe]
    quotient: dict[tuple[int, ...], Fraction] = {}
    while r:
        re = max(r, key=lambda e: (sum(e), e))
        rc = r[re]
        me = tuple(x - y for x, y in zip(re, qe))
        if any(x < 0 for x in me):
            return None
        mc = rc / qc
        quotient[me] = quotient.get(me, Fraction(0)) + mc
        for e, c in b.items():
            ne = tuple(x + y for x, y in zip(me, e))
            nv = r.get(ne, Fraction(0)) - mc * c
            if nv == 0:
                r.pop(ne, None)
            else:
                r[ne] = nv
    return MultiPoly.make(vars_, quotient)


# -- recursive (main-variable) view


def coeffs_in(p: MultiPoly, var: str) -> list[MultiPoly]:
    """Ascending coefficients of p viewed as a polynomial in var."""
    if var not in p.vars:
        return [p]
    i = p.vars.index(var)
    rest = p.vars[:i] + p.vars[i + 1 :]
    buckets: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for e, c in p.terms.items():
        buckets.setdefault(e[i], {})[e[:i] + e[i + 1 :]] = c
    top = max(buckets)
    return [
        MultiPoly.make(rest, buckets[k]) if k in buckets else MultiPoly((), {})
        for k in range(top + 1)
    ]


def from_coeffs(coeffs: Sequence[MultiPoly], var: str) -> MultiPoly:
    x = mp_var(var)
    acc = MultiPoly((), {})
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _prem(a: list[MultiPoly], b: list[MultiPoly]) -> list[MultiPoly]:
    """Pseudo remainder of coefficient lists (ascending) in the main var."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db:
        while r and r[-1].is_zero:
            r.pop()
        if len(r) - 1 < db:
            break
        shift = len(r) - 1 - db
        lead = r[-1]
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[shift + i] = r[shift + i] - lead * c
        r.pop()
        while r and r[-1].is_zero:
            r.pop()
    return r


def _normalize_gcd(p: MultiPoly) -> MultiPoly:
    if p.is_zero:
        return p
    _, lead = p.leading_term()
    return p / lead


def _content_primitive(p: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    cs = [c for c in coeffs_in(p, var) if not c.is_zero]
    content = cs[0]
    for c in cs[1:]:
        content = mgcd(content, c)
        if content.is_constant:
            content = mp_const(1)
            break
    prim = exact_div(p, content)
    assert prim is not None
    return content, prim


def _primitive_in(p: MultiPoly, var: str) -> MultiPoly:
    return _content_primitive(p, var)[1]


def mgcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Multivariate gcd over Q, normalized to leading coefficient 1."""
    if p.is_zero:
        return _normalize_gcd(q)
    if q.is_zero:
        return _normalize_gcd(p)
    if p.is_constant or q.is_constant:
        return mp_const(1)
    common = set(p.vars) & set(q.vars)
    if not common:
        return mp_const(1)
    if p.vars == q.vars and len(p.vars) == 1:
        var = p.vars[0]
        g = poly_gcd(mp_to_unipoly(p, var), mp_to_unipoly(q, var))
        return unipoly_to_mp(g, var)
    x = max(common, key=var_sort_key)
    cp, pp = _content_primitive(p, x)
    cq, pq = _content_primitive(q, x)
    c = mgcd(cp, cq)
    a, b = coeffs_in(pp, x), coeffs_in(pq, x)
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _prem(a, b)
        if not r:
            g = from_coeffs(b, x)
            break
        if len(r) == 1:
            return _normalize_gcd(c)
        rp = _primitive_in(from_coeffs(r, x), x)
        a, b = b, coeffs_in(rp, x)
    return _normalize_gcd(c * _primitive_in(g, x))


def bareiss_det(matrix: list[list[MultiPoly]]) -> MultiPoly:
    """Determinant of a square MultiPoly matrix by Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        return mp_const(1)
    m = [row[:] for row in matrix]
    sign = 1
    prev = mp_const(1)
    for k in range(n - 1):
        if m[k][k].is_zero:
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
            if swap is None:
                return MultiPoly((), {})
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                q = exact_div(num, prev)
                assert q is not None, "Bareiss division must be exact"
                m[i][j] = q
            m[i][k] = MultiPoly((), {})
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def mresultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Resultant of p and q with respect to var, eliminating it.

    Same row convention as the univariate resultant: deg_var(q) rows of p
    coefficients above deg_var(p) rows of q coefficients.
    """
    if p.is_zero or q.is_zero:
        return MultiPoly((), {})
    a = coeffs_in(p, var)
    b = coeffs_in(q, var)
    m, n = len(a) - 1, len(b) - 1
    if m == 0:
        return p**n if n > 0 else mp_const(1)
    if n == 0:
        return q**m
    size = m + n
    zero = MultiPoly((), {})
    ad = list(reversed(a))
    bd = list(reversed(b))
    rows: list[list[MultiPoly]] = []
    for i in range(n):
        rows.append([zero] * i + ad + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + bd + [zero] * (size - n - 1 - i))
    return bareiss_det(rows)
