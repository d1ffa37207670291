"""Exact scalar expression kernel.

Everything downstream (tensors, curvature, tractor operators, spinors) is
built on top of the expression type defined here: sympy expressions with
Gaussian-rational coefficients, the elementary functions exp/log/sin/cos/
sinh/cosh/sqrt, and unevaluated derivatives of undefined functions (generic
test fields).  This module owns

 - ``PatchContext``: a coordinate patch plus declared free parameters,
 - ``parse``/``expr_to_str``: a small expression grammar and its printer,
 - ``diff``: exact partial derivatives,
 - ``normal_form``: a deterministic canonicalization pipeline,
 - ``decide_zero``/``is_zero``: a zero-decision procedure that is exact on
   the rational-trigonometric fragment and falls back to randomized
   rational evaluation (flagged "probabilistic") outside it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import sympy as sp

__all__ = [
    "PatchContext",
    "ParseError",
    "parse",
    "expr_to_str",
    "diff",
    "normal_form",
    "ZeroStatus",
    "ZeroDecision",
    "decide_zero",
    "is_zero",
    "generic_function",
]

# Elementary functions admitted by the expression grammar.
FUNCTIONS = {
    "exp": sp.exp,
    "log": sp.log,
    "sin": sp.sin,
    "cos": sp.cos,
    "sinh": sp.sinh,
    "cosh": sp.cosh,
    "sqrt": sp.sqrt,
}


class PatchContext:
    """A single coordinate patch: dimension, coordinates, signature, parameters.

    Coordinates are real sympy symbols; names listed in ``positive`` get a
    positivity assumption (used e.g. for the radial coordinate of a Poincare
    patch so that sqrt(z**-2) collapses to 1/z exactly).  ``params`` declares
    free scalar parameters (weights, curvature constants, ...) usable in
    parsed expressions.
    """

    def __init__(self, coords, signature=None, params=(), positive=()):
        names = list(coords)
        if len(set(names)) != len(names):
            raise ValueError("coordinate names must be distinct")
        if not 2 <= len(names) <= 8:
            raise ValueError("supported patch dimensions are 2..8")
        self.coord_names = tuple(names)
        self.coords = tuple(
            sp.Symbol(n, real=True, positive=(n in positive)) for n in names
        )
        self.dim = len(names)
        if signature is None:
            signature = (-1,) + (1,) * (self.dim - 1)
        signature = tuple(int(s) for s in signature)
        if len(signature) != self.dim or any(s not in (-1, 1) for s in signature):
            raise ValueError("signature must list +-1 per coordinate")
        self.signature = signature
        self.params = {}
        for p in params:
            if isinstance(p, sp.Symbol):
                self.params[p.name] = p
            else:
                self.params[str(p)] = sp.Symbol(str(p))
        self._symtab = {n: c for n, c in zip(self.coord_names, self.coords)}
        self._symtab.update(self.params)
        self._symtab.setdefault("i", sp.I)

    def symbol(self, name):
        try:
            return self._symtab[name]
        except KeyError:
            raise KeyError(f"unknown identifier {name!r} in this patch") from None

    def param(self, name):
        if name not in self.params:
            self.params[name] = sp.Symbol(name)
            self._symtab[name] = self.params[name]
        return self.params[name]

    def __repr__(self):
        sig = ",".join("+" if s > 0 else "-" for s in self.signature)
        return f"PatchContext({','.join(self.coord_names)}; {sig})"


def generic_function(name, ctx, **assumptions):
    """An undefined scalar field of the patch coordinates (a generic test field)."""
    return sp.Function(name, **assumptions)(*ctx.coords)


# ---------------------------------------------------------------------------
# Parser.  Grammar:
#   expr   := term (("+"|"-") term)*
#   term   := factor (("*"|"/") factor)*
#   factor := base ("^" exponent)?
#   base   := number | ident | ident "(" expr ")" | "(" expr ")" | "-" base
#   number := integer ("/" integer)?
#   exponent := signed integer | "(" rational ")"
# Identifiers [A-Za-z_][A-Za-z0-9_]*, whitespace insignificant.
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.index = 0

    def _location(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def _scan(self):
        text, n = self.text, len(self.text)
        i = 0
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", text[i:j], i))
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("ident", text[i:j], i))
                i = j
                continue
            if c in "+-*/^()":
                self.tokens.append((c, c, i))
                i += 1
                continue
            line, col = self._location(i)
            raise ParseError(f"unexpected character {c!r}", line, col)
        self.tokens.append(("end", "", n))

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        if tok[0] != "end":
            self.index += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        line, col = self._location(tok[2])
        raise ParseError(message, line, col)


class _Parser:
    def __init__(self, text, ctx):
        self.lex = _Lexer(text)
        self.ctx = ctx

    def parse(self):
        e = self.expr()
        tok = self.lex.peek()
        if tok[0] != "end":
            self.lex.error(f"unexpected token {tok[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.lex.peek()[0] in ("+", "-"):
            op = self.lex.next()[0]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.factor()
        while self.lex.peek()[0] in ("*", "/"):
            op = self.lex.next()[0]
            rhs = self.factor()
            e = e * rhs if op == "*" else e / rhs
        return e

    def factor(self):
        e = self.base()
        if self.lex.peek()[0] == "^":
            self.lex.next()
            return e ** self.exponent()
        return e

    def exponent(self):
        tok = self.lex.peek()
        if tok[0] == "(":
            self.lex.next()
            num = self.signed_int()
            if self.lex.peek()[0] == "/":
                self.lex.next()
                den = self.signed_int()
                e = sp.Rational(num, den)
            else:
                e = sp.Integer(num)
            close = self.lex.next()
            if close[0] != ")":
                self.lex.error("expected ')' closing exponent", close)
            return e
        return sp.Integer(self.signed_int())

    def signed_int(self):
        sign = 1
        tok = self.lex.peek()
        if tok[0] in ("+", "-"):
            self.lex.next()
            sign = -1 if tok[0] == "-" else 1
        tok = self.lex.next()
        if tok[0] != "int":
            self.lex.error("expected integer", tok)
        return sign * int(tok[1])

    def base(self):
        tok = self.lex.next()
        kind, value, pos = tok
        if kind == "-":
            return -self.base()
        if kind == "int":
            if self.lex.peek()[0] == "/":
                # lookahead: integer "/" integer is a rational literal only if
                # followed by a plain integer (otherwise it is division)
                save = self.lex.index
                self.lex.next()
                nxt = self.lex.peek()
                if nxt[0] == "int":
                    den = self.lex.next()
                    return sp.Rational(int(value), int(den[1]))
                self.lex.index = save
            return sp.Integer(int(value))
        if kind == "ident":
            if self.lex.peek()[0] == "(":
                if value not in FUNCTIONS:
                    self.lex.error(f"unknown function {value!r}", tok)
                self.lex.next()
                arg = self.expr()
                close = self.lex.next()
                if close[0] != ")":
                    self.lex.error("expected ')'", close)
                return FUNCTIONS[value](arg)
            try:
                return self.ctx.symbol(value)
            except KeyError:
                self.lex.error(f"unknown identifier {value!r}", tok)
        if kind == "(":
            e = self.expr()
            close = self.lex.next()
            if close[0] != ")":
                self.lex.error("expected ')'", close)
            return e
        self.lex.error(f"unexpected token {value!r}", tok)


def parse(text, ctx):
    """Parse ``text`` against the patch context, returning an exact expression."""
    return _Parser(text, ctx).parse()


class _GrammarPrinter(sp.printing.str.StrPrinter):
    """Prints expressions in the same grammar `parse` accepts (^ powers)."""

    def _print_Pow(self, expr, rational=False):
        base, exponent = expr.base, expr.exp
        bstr = self.parenthesize(base, sp.printing.str.PRECEDENCE["Pow"])
        if exponent.is_Integer:
            if exponent >= 0:
                return f"{bstr}^{exponent}"
            return f"{bstr}^({exponent})"
        if exponent.is_Rational:
            return f"{bstr}^({exponent.p}/{exponent.q})"
        estr = self.parenthesize(exponent, sp.printing.str.PRECEDENCE["Pow"])
        return f"{bstr}^{estr}"

    def _print_ImaginaryUnit(self, expr):
        return "i"


def expr_to_str(e):
    """Print an expression in grammar-conformant form (parse . print fixpoint)."""
    return _GrammarPrinter().doprint(sp.nsimplify(e) if e.is_Float else e)


# ---------------------------------------------------------------------------
# Differentiation and normal form.
# ---------------------------------------------------------------------------


def diff(e, coord):
    """Exact partial derivative; derivatives of undefined fields stay symbolic."""
    return sp.diff(sp.sympify(e), coord)


@lru_cache(maxsize=200000)
def _nf_cached(e):
    e = e.doit()
    e = sp.expand(e)
    if e == 0:
        return sp.Integer(0)
    num, den = sp.fraction(sp.together(e))
    if den != 1:
        e = sp.cancel(e)
    return e


def normal_form(e):
    """Deterministic normal form: flatten derivatives, expand, cancel over a
    common denominator.  Enough for unique forms on the rational fragment;
    trig/hyperbolic relations are resolved by `decide_zero`, not here."""
    e = sp.sympify(e)
    if e.is_Atom:
        return e
    return _nf_cached(e)


class ZeroStatus(Enum):
    EXACT = "exact"
    PROBABILISTIC = "probabilistic"
    NONZERO = "nonzero"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ZeroDecision:
    status: ZeroStatus
    residual: object = None

    @property
    def is_zero(self):
        return self.status in (ZeroStatus.EXACT, ZeroStatus.PROBABILISTIC)


_TRIG = (sp.sin, sp.cos, sp.sinh, sp.cosh, sp.tan, sp.tanh)


def _numerator_vanishes(e):
    """Zero test for rational expressions by cross-multiplication: combine
    over a common denominator and expand the numerator (no gcd needed)."""
    num, _ = sp.fraction(sp.together(e))
    return sp.expand(num) == 0


@lru_cache(maxsize=100000)
def _exact_zero(e):
    """Exact zero test on the rational-trigonometric fragment."""
    e = e.doit()
    if _numerator_vanishes(e):
        return True
    if e.has(*_TRIG):
        # rewrite the circular/hyperbolic functions as exponentials; on this
        # fragment the result is rational in algebraically independent kernels
        e3 = e.rewrite(sp.exp)
        if _numerator_vanishes(e3):
            return True
        if _numerator_vanishes(sp.powsimp(sp.expand(e3), deep=True)):
            return True
    return False


def _random_rational(rng, scale=7):
    p = rng.randint(-scale * 3, scale * 3)
    q = rng.randint(1, scale)
    r = sp.Rational(p, q)
    return r if r != 0 else sp.Rational(1, 2)


def _sample(e, rng, funcs, symbols):
    """Substitute random rational points / random polynomial fields and evaluate."""
    subs = {}
    for f in funcs:
        args = f.args
        poly = _random_rational(rng)
        for a in args:
            poly = poly + _random_rational(rng) * a + _random_rational(rng) * a**2
        if len(args) >= 2:
            poly = poly + _random_rational(rng) * args[0] * args[1]
        subs[f] = poly
    sampled = e.subs(subs, simultaneous=True).doit()
    point = {s: _random_rational(rng) for s in symbols}
    val = sampled.subs(point, simultaneous=True)
    val = sp.nsimplify(val) if val.is_Float else val
    if val.free_symbols:
        raise ValueError("sample did not fully evaluate")
    if val.has(sp.nan, sp.zoo, sp.oo, -sp.oo):
        raise ValueError("sample hit a singular point")
    if val.is_Rational:
        return val
    val = sp.N(val, 30)
    if val.has(sp.nan, sp.zoo) or not val.is_finite:
        raise ValueError("sample failed to evaluate finitely")
    return val


def decide_zero(e, samples=20, seed=0, retries=4):
    """Decide whether ``e`` vanishes identically.

    Exact on the rational-trigonometric fragment.  Otherwise evaluates at
    ``samples`` random rational points per free symbol (undefined fields are
    replaced by random rational-coefficient polynomials); a zero verdict from
    sampling is flagged probabilistic.  Singular sample points are resampled
    a bounded number of times before reporting "undecided".
    """
    e = sp.sympify(e)
    if e == 0:
        return ZeroDecision(ZeroStatus.EXACT)
    if _exact_zero(e):
        return ZeroDecision(ZeroStatus.EXACT)
    residual = normal_form(e)
    if residual == 0:  # pragma: no cover - _exact_zero covers this
        return ZeroDecision(ZeroStatus.EXACT)

    funcs = sorted(residual.atoms(sp.core.function.AppliedUndef), key=sp.default_sort_key)
    symbols = sorted(residual.free_symbols, key=sp.default_sort_key)
    rng = random.Random(seed)
    n_needed = max(samples, 20)
    got = 0
    failures = 0
    while got < n_needed:
        try:
            val = _sample(residual, rng, funcs, symbols)
        except (ValueError, ZeroDivisionError, TypeError):
            failures += 1
            if failures > retries * n_needed:
                return ZeroDecision(ZeroStatus.UNDECIDED, residual)
            continue
        if val.is_Rational:
            if val != 0:
                return ZeroDecision(ZeroStatus.NONZERO, residual)
        else:
            if abs(val) > sp.Float("1e-9") * (1 + abs(val)):
                return ZeroDecision(ZeroStatus.NONZERO, residual)
        got += 1
    return ZeroDecision(ZeroStatus.PROBABILISTIC, residual)


def is_zero(e, **kw):
    """True iff ``e`` is identically zero (exact, or probabilistic fallback)."""
    return decide_zero(e, **kw).is_zero
