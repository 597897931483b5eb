"""Expression parsing and canonical printing for polynomial data.

Grammar (explicit multiplication only, no juxtaposition):

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := ('+' | '-') factor | atom (('^' | '**') NUMBER)?
    atom     := NUMBER | IDENT | '(' expr ')'

NUMBER is a nonnegative integer literal; rationals are written with '/'.
Division is kept in the AST so expressions can be evaluated over rings with
inverses (branch contexts); converting to a polynomial requires every
divisor to evaluate to a nonzero constant.

The printer emits graded-lex descending terms with '^' powers and explicit
'*', and round-trips through parse_poly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .errors import ParseError
from .ratpoly import MultiPoly, UniPoly, mp_const, mp_to_unipoly, mp_var

# AST nodes are plain tuples:
#   ("num", Fraction)            ("var", name)
#   ("add", l, r)  ("sub", l, r) ("mul", l, r)  ("div", l, r)
#   ("neg", x)     ("pow", base, int_exponent)
Ast = tuple


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TWO_CHAR = ("**",)
_ONE_CHAR = "+-*/^()"


def _tokenize(text: str) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("**", i):
            out.append(("op", "^"))
            i += 2
            continue
        if ch in _ONE_CHAR:
            out.append(("op", ch))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("num", text[i:j]))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("ident", text[i:j]))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r} at position {i} in {text!r}")
    return out


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], source: str):
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input in {self.source!r}")
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok} in {self.source!r}")

    def parse_expr(self) -> Ast:
        node = self.parse_term()
        while True:
            tok = self.peek()
            if tok == ("op", "+"):
                self.take()
                node = ("add", node, self.parse_term())
            elif tok == ("op", "-"):
                self.take()
                node = ("sub", node, self.parse_term())
            else:
                return node

    def parse_term(self) -> Ast:
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                node = ("mul", node, self.parse_factor())
            elif tok == ("op", "/"):
                self.take()
                node = ("div", node, self.parse_factor())
            else:
                return node

    def parse_factor(self) -> Ast:
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return ("neg", self.parse_factor())
        if tok == ("op", "+"):
            self.take()
            return self.parse_factor()
        node = self.parse_atom()
        tok = self.peek()
        if tok == ("op", "^"):
            self.take()
            kind, text = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a literal integer in {self.source!r}")
            return ("pow", node, int(text))
        return node

    def parse_atom(self) -> Ast:
        kind, text = self.take()
        if kind == "num":
            return ("num", Fraction(int(text)))
        if kind == "ident":
            return ("var", text)
        if (kind, text) == ("op", "("):
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {text!r} in {self.source!r}")


def parse_expr(text: str) -> Ast:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    parser = _Parser(tokens, text)
    node = parser.parse_expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input after expression in {text!r}")
    return node


# ---------------------------------------------------------------------------
# Generic evaluation
# ---------------------------------------------------------------------------


def eval_ast(node: Ast, env: dict, const: Callable):
    """Evaluate an AST over any field-like ring.

    env maps identifiers to ring elements; const embeds a Fraction. The ring
    must support +, -, *, /, unary -, and ** with int exponents.
    """
    op = node[0]
    if op == "num":
        return const(node[1])
    if op == "var":
        name = node[1]
        if name not in env:
            raise ParseError(f"unbound identifier {name!r}")
        return env[name]
    if op == "add":
        return eval_ast(node[1], env, const) + eval_ast(node[2], env, const)
    if op == "sub":
        return eval_ast(node[1], env, const) - eval_ast(node[2], env, const)
    if op == "mul":
        return eval_ast(node[1], env, const) * eval_ast(node[2], env, const)
    if op == "div":
        return eval_ast(node[1], env, const) / eval_ast(node[2], env, const)
    if op == "neg":
        return -eval_ast(node[1], env, const)
    if op == "pow":
        return eval_ast(node[1], env, const) ** node[2]
    raise ParseError(f"unknown AST node {op!r}")


def ast_identifiers(node: Ast) -> set[str]:
    op = node[0]
    if op == "num":
        return set()
    if op == "var":
        return {node[1]}
    if op == "pow":
        return ast_identifiers(node[1])
    if op == "neg":
        return ast_identifiers(node[1])
    return ast_identifiers(node[1]) | ast_identifiers(node[2])


# ---------------------------------------------------------------------------
# Polynomial conversion
# ---------------------------------------------------------------------------


def parse_poly(text: str) -> MultiPoly:
    """Parse a polynomial expression; division must be by nonzero constants."""
    node = parse_expr(text)
    env = {name: mp_var(name) for name in ast_identifiers(node)}
    try:
        return eval_ast(node, env, mp_const)
    except ZeroDivisionError as exc:
        raise ParseError(f"non-constant or zero divisor in {text!r}: {exc}") from exc


def parse_unipoly(text: str, var: str) -> UniPoly:
    """Parse a univariate polynomial in the named variable."""
    p = parse_poly(text)
    extra = set(p.vars) - {var}
    if extra:
        raise ParseError(f"expected a polynomial in {var!r} only, found {sorted(extra)}")
    return mp_to_unipoly(p, var)


def parse_line_form(text: str) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Parse a*X + b*Y + c*Z into its coefficient triple (a, b, c).

    The expression must be homogeneous linear in X, Y, Z; coefficients may
    involve parameter variables.
    """
    p = parse_poly(text)
    coords = ("X", "Y", "Z")
    triple = []
    for axis in coords:
        part: MultiPoly = mp_const(0)
        if axis in p.vars:
            i = p.vars.index(axis)
            rest_vars = p.vars[:i] + p.vars[i + 1 :]
            picked = {}
            for e, c in p.terms.items():
                if e[i] == 1:
                    picked[e[:i] + e[i + 1 :]] = c
                elif e[i] > 1:
                    raise ParseError(f"not linear in {axis}: {text!r}")
            part = MultiPoly.make(rest_vars, picked)
        triple.append(part)
    for axis_out in triple:
        bad = set(axis_out.vars) & set(coords)
        if bad:
            raise ParseError(f"coefficients must not involve {sorted(bad)}: {text!r}")
    residual = p
    for axis, part in zip(coords, triple):
        residual = residual - part * mp_var(axis)
    if not residual.is_zero:
        raise ParseError(f"not homogeneous linear in X, Y, Z: {text!r}")
    return triple[0], triple[1], triple[2]


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------


def _coeff_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def poly_str(p: MultiPoly) -> str:
    """Graded-lex descending, explicit '*', '^' powers; parses back equal."""
    if p.is_zero:
        return "0"
    items = sorted(p.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
    pieces: list[str] = []
    for e, c in items:
        mono = "*".join(
            name if k == 1 else f"{name}^{k}"
            for name, k in zip(p.vars, e)
            if k > 0
        )
        mag = abs(c)
        if not mono:
            body = _coeff_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_coeff_str(mag)}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(pieces)


def unipoly_str(f: UniPoly, var: str = "t") -> str:
    from .ratpoly import unipoly_to_mp

    return poly_str(unipoly_to_mp(f, var))
