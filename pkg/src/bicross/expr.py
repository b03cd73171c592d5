"""Expressions over coordinates: parsing and exp-polynomial normal forms.

The scalar-function layer of the engine.  Functions on the commutative sector
are *exp-polynomials*: finite sums of terms

    coeff(param) * x1^p1 ... xs^ps * exp(w1(param)*x1 + ... + ws(param)*xs)

with :class:`~bicross.paramseries.ParamSeries` coefficients and exponential
weights.  The class is closed under addition, multiplication and coordinate
differentiation, which is exactly what flows and induced representations need.

The text grammar::

    expr    := term (('+'|'-') term)*
    term    := ('+'|'-')* factor (('*'|'/') factor)*
    factor  := base ('^' integer)?
    base    := integer | symbol | '(' expr ')' | 'exp' '(' expr ')'

Symbols are coordinate names or the parameter symbol; ``exp`` is reserved.
Division is restricted to single-term, coordinate-free, exponential-free
parameter monomials.  Exponential arguments must be linear in the coordinates;
a constant part is accepted only when its parameter order is >= 1 (it is then
series-expanded into the coefficient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .multiindex import madd, mzero
from .paramseries import (
    ParamSeries,
    SeriesContext,
    ps_add,
    ps_div_monomial,
    ps_eval_exact,
    ps_exp_of,
    ps_invert_monomial,
    ps_mul,
    ps_neg,
    ps_one,
    ps_param,
    ps_pow,
    ps_rational,
    ps_scale,
    ps_str,
    ps_zero,
)


class ExprError(ValueError):
    """Syntax error, unknown symbol, or unsupported operation in an expression."""


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_OPS = set("+-*/^()@,")


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "name" | "op" | "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; raises :class:`ExprError` on stray input."""
    out: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("name", text[i:j], i))
            i = j
            continue
        if ch in _OPS:
            out.append(Token("op", ch, i))
            i += 1
            continue
        raise ExprError(f"syntax error: unexpected character {ch!r} at position {i}")
    out.append(Token("end", "", n))
    return out


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ENum:
    value: Fraction


@dataclass(frozen=True)
class ESym:
    name: str


@dataclass(frozen=True)
class EAdd:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class ESub:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class EMul:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class EDiv:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class EPow:
    base: "ExprAst"
    exponent: int


@dataclass(frozen=True)
class ENeg:
    arg: "ExprAst"


@dataclass(frozen=True)
class EExp:
    arg: "ExprAst"


ExprAst = Union[ENum, ESym, EAdd, ESub, EMul, EDiv, EPow, ENeg, EExp]


class Parser:
    """Recursive-descent parser over the token stream (reused by file loaders)."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.next()
        if tok.kind != "op" or tok.text != op:
            raise ExprError(
                f"syntax error: expected {op!r} at position {tok.pos} in {self.text!r}"
            )

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    # grammar -------------------------------------------------------------

    def parse_expr(self) -> ExprAst:
        node = self.parse_term()
        while self.at_op("+", "-"):
            op = self.next().text
            rhs = self.parse_term()
            node = EAdd(node, rhs) if op == "+" else ESub(node, rhs)
        return node

    def parse_term(self) -> ExprAst:
        negate = False
        while self.at_op("+", "-"):
            if self.next().text == "-":
                negate = not negate
        node = self.parse_factor()
        while self.at_op("*", "/"):
            op = self.next().text
            rhs = self.parse_factor()
            node = EMul(node, rhs) if op == "*" else EDiv(node, rhs)
        return ENeg(node) if negate else node

    def parse_factor(self) -> ExprAst:
        node = self.parse_base()
        if self.at_op("^"):
            self.next()
            sign = 1
            if self.at_op("-"):
                self.next()
                sign = -1
            tok = self.next()
            if tok.kind != "int":
                raise ExprError(
                    f"syntax error: integer exponent expected at position {tok.pos}"
                )
            node = EPow(node, sign * int(tok.text))
        return node

    def parse_base(self) -> ExprAst:
        tok = self.next()
        if tok.kind == "int":
            return ENum(Fraction(int(tok.text)))
        if tok.kind == "name":
            if tok.text == "exp":
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return EExp(arg)
            return ESym(tok.text)
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ExprError(
            f"syntax error: unexpected {tok.text or 'end of input'!r} "
            f"at position {tok.pos} in {self.text!r}"
        )

    def finish(self) -> None:
        tok = self.peek()
        if tok.kind != "end":
            raise ExprError(
                f"syntax error: trailing input {tok.text!r} at position {tok.pos}"
            )


def parse(text: str) -> ExprAst:
    """Parse ``text`` into an AST (no symbol resolution yet)."""
    p = Parser(text)
    node = p.parse_expr()
    p.finish()
    return node


# ---------------------------------------------------------------------------
# exp-polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExprContext:
    """Coordinate names plus the series context of their scalar field."""

    coords: tuple[str, ...]
    sctx: SeriesContext

    def coord_index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise ExprError(f"unknown symbol {name!r}") from None


@dataclass(frozen=True)
class ExpTerm:
    """One term ``coeff * prod x_j^powers_j * exp(sum expw_j * x_j)``."""

    coeff: ParamSeries
    powers: tuple[int, ...]
    expw: tuple[ParamSeries, ...]


@dataclass(frozen=True)
class ExpPoly:
    """Canonically ordered sum of :class:`ExpTerm`; closed under + * d/dx."""

    ctx: ExprContext
    terms: tuple[ExpTerm, ...]

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:  # pragma: no cover - delegated
        return ep_print(self)


def _term_key(t: ExpTerm):
    return (t.powers, tuple(w.terms for w in t.expw))


def ep_make(ctx: ExprContext, terms: Sequence[ExpTerm]) -> ExpPoly:
    """Merge, drop zeros and sort terms into canonical order."""
    acc: dict[tuple, ExpTerm] = {}
    for t in terms:
        key = (t.powers, tuple(w.terms for w in t.expw))
        if key in acc:
            prev = acc[key]
            acc[key] = ExpTerm(ps_add(prev.coeff, t.coeff), t.powers, t.expw)
        else:
            acc[key] = t
    kept = [t for t in acc.values() if not t.coeff.is_zero()]
    kept.sort(key=_term_key)
    return ExpPoly(ctx, tuple(kept))


def ep_zero(ctx: ExprContext) -> ExpPoly:
    return ExpPoly(ctx, ())


def ep_const(ctx: ExprContext, coeff: ParamSeries) -> ExpPoly:
    zero_w = tuple(ps_zero(ctx.sctx) for _ in ctx.coords)
    return ep_make(ctx, [ExpTerm(coeff, mzero(len(ctx.coords)), zero_w)])


def ep_one(ctx: ExprContext) -> ExpPoly:
    return ep_const(ctx, ps_one(ctx.sctx))


def ep_coord(ctx: ExprContext, j: int) -> ExpPoly:
    powers = tuple(1 if i == j else 0 for i in range(len(ctx.coords)))
    zero_w = tuple(ps_zero(ctx.sctx) for _ in ctx.coords)
    return ep_make(ctx, [ExpTerm(ps_one(ctx.sctx), powers, zero_w)])


def ep_add(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    if a.ctx != b.ctx:
        raise ValueError("expression contexts differ")
    return ep_make(a.ctx, a.terms + b.terms)


def ep_neg(a: ExpPoly) -> ExpPoly:
    return ExpPoly(a.ctx, tuple(ExpTerm(ps_neg(t.coeff), t.powers, t.expw) for t in a.terms))


def ep_sub(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return ep_add(a, ep_neg(b))


def ep_scale(a: ExpPoly, s: ParamSeries) -> ExpPoly:
    return ep_make(
        a.ctx, [ExpTerm(ps_mul(t.coeff, s), t.powers, t.expw) for t in a.terms]
    )


def ep_mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    if a.ctx != b.ctx:
        raise ValueError("expression contexts differ")
    out: list[ExpTerm] = []
    for ta in a.terms:
        for tb in b.terms:
            out.append(
                ExpTerm(
                    ps_mul(ta.coeff, tb.coeff),
                    madd(ta.powers, tb.powers),
                    tuple(ps_add(wa, wb) for wa, wb in zip(ta.expw, tb.expw)),
                )
            )
    return ep_make(a.ctx, out)


def ep_pow(a: ExpPoly, n: int) -> ExpPoly:
    if n < 0:
        return ep_div(ep_one(a.ctx), ep_pow(a, -n))
    out = ep_one(a.ctx)
    for _ in range(n):
        out = ep_mul(out, a)
    return out


def ep_div(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    """Division by a coordinate-free, exponential-free parameter monomial."""
    if len(b.terms) != 1:
        raise ExprError("division only by single-term expressions")
    t = b.terms[0]
    if any(t.powers) or any(not w.is_zero() for w in t.expw):
        raise ExprError("division only by coordinate- and exponential-free terms")
    if len(t.coeff.terms) != 1:
        raise ExprError("division only by single-degree parameter monomials")
    inv = ps_invert_monomial(t.coeff)
    return ep_scale(a, inv)


def ep_exp(a: ExpPoly) -> ExpPoly:
    """Exponential of a coordinate-linear argument.

    Degree-1 terms become exponential weights; a constant part must have
    parameter order >= 1 and is series-expanded into the coefficient.

    Raises:
        ExprError: nonlinear argument, nested exponential, or a constant
            part of parameter order <= 0.
    """
    nc = len(a.ctx.coords)
    weights = [ps_zero(a.ctx.sctx) for _ in range(nc)]
    const = ps_zero(a.ctx.sctx)
    for t in a.terms:
        if any(not w.is_zero() for w in t.expw):
            raise ExprError("nonlinear exp argument: nested exponential")
        deg = sum(t.powers)
        if deg == 0:
            const = ps_add(const, t.coeff)
        elif deg == 1:
            j = t.powers.index(1)
            weights[j] = ps_add(weights[j], t.coeff)
        else:
            raise ExprError("nonlinear exp argument: coordinate degree >= 2")
    lo = const.min_degree()
    if lo is not None and lo < 1:
        raise ExprError(
            "exp argument has a constant part of parameter order <= 0; "
            "only positive-order constants can be series-expanded"
        )
    coeff = ps_exp_of(const) if not const.is_zero() else ps_one(a.ctx.sctx)
    return ep_make(a.ctx, [ExpTerm(coeff, mzero(nc), tuple(weights))])


def to_exppoly(ast: ExprAst, ctx: ExprContext) -> ExpPoly:
    """Evaluate an AST into an exp-polynomial (commutative coordinates)."""
    if isinstance(ast, ENum):
        return ep_const(ctx, ps_rational(ctx.sctx, ast.value))
    if isinstance(ast, ESym):
        if ast.name == ctx.sctx.param:
            return ep_const(ctx, ps_param(ctx.sctx))
        return ep_coord(ctx, ctx.coord_index(ast.name))
    if isinstance(ast, EAdd):
        return ep_add(to_exppoly(ast.left, ctx), to_exppoly(ast.right, ctx))
    if isinstance(ast, ESub):
        return ep_sub(to_exppoly(ast.left, ctx), to_exppoly(ast.right, ctx))
    if isinstance(ast, EMul):
        return ep_mul(to_exppoly(ast.left, ctx), to_exppoly(ast.right, ctx))
    if isinstance(ast, EDiv):
        return ep_div(to_exppoly(ast.left, ctx), to_exppoly(ast.right, ctx))
    if isinstance(ast, EPow):
        return ep_pow(to_exppoly(ast.base, ctx), ast.exponent)
    if isinstance(ast, ENeg):
        return ep_neg(to_exppoly(ast.arg, ctx))
    if isinstance(ast, EExp):
        return ep_exp(to_exppoly(ast.arg, ctx))
    raise ExprError(f"unhandled AST node {ast!r}")


def ep_parse(text: str, ctx: ExprContext) -> ExpPoly:
    """Parse and convert in one step."""
    return to_exppoly(parse(text), ctx)


def ep_derive(a: ExpPoly, j: int) -> ExpPoly:
    """Exact partial derivative with respect to coordinate ``j``."""
    out: list[ExpTerm] = []
    for t in a.terms:
        if t.powers[j] > 0:
            lowered = tuple(
                p - 1 if i == j else p for i, p in enumerate(t.powers)
            )
            out.append(ExpTerm(ps_scale(t.coeff, t.powers[j]), lowered, t.expw))
        if not t.expw[j].is_zero():
            out.append(ExpTerm(ps_mul(t.coeff, t.expw[j]), t.powers, t.expw))
    return ep_make(a.ctx, out)


def ep_eval(a: ExpPoly, point: Sequence[float], param_value) -> float:
    """Numeric evaluation at a coordinate point and displayed-parameter value."""
    if len(point) != len(a.ctx.coords):
        raise ValueError("point dimension mismatch")
    total = 0.0
    for t in a.terms:
        val = float(ps_eval_exact(t.coeff, param_value))
        for x, p in zip(point, t.powers):
            val *= x**p
        arg = 0.0
        for x, w in zip(point, t.expw):
            if not w.is_zero():
                arg += float(ps_eval_exact(w, param_value)) * x
        total += val * math.exp(arg)
    return total


def ep_eval_series(a: ExpPoly, point: Sequence[Fraction]) -> ParamSeries:
    """Exact evaluation at a rational point, parameter kept symbolic.

    Exponential weights must have parameter order >= 1 so that the point
    exponentials stay inside the series window.
    """
    if len(point) != len(a.ctx.coords):
        raise ValueError("point dimension mismatch")
    total = ps_zero(a.ctx.sctx)
    for t in a.terms:
        val = t.coeff
        for x, p in zip(point, t.powers):
            if p:
                val = ps_scale(val, Fraction(x) ** p)
        arg = ps_zero(a.ctx.sctx)
        for x, w in zip(point, t.expw):
            if not w.is_zero():
                arg = ps_add(arg, ps_scale(w, Fraction(x)))
        if not arg.is_zero():
            val = ps_mul(val, ps_exp_of(arg))
        total = ps_add(total, val)
    return total


def ep_equal(a: ExpPoly, b: ExpPoly) -> bool:
    return a.ctx == b.ctx and a.terms == b.terms


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _ps_factor_str(s: ParamSeries) -> tuple[int, str | None]:
    """Render a series as a product factor; returns (sign, text or None).

    ``None`` text means the factor is exactly 1 and can be omitted.
    Multi-term series come back parenthesized with sign +1.
    """
    if len(s.terms) == 1:
        d, c = s.terms[0]
        sign = 1 if c > 0 else -1
        mono = ParamSeries(s.ctx, ((d, abs(c)),))
        text = ps_str(mono)
        return sign, None if text == "1" else text
    return 1, f"({ps_str(s)})"


def _exp_arg_str(ctx: ExprContext, expw: tuple[ParamSeries, ...]) -> str | None:
    parts: list[str] = []
    for name, w in zip(ctx.coords, expw):
        if w.is_zero():
            continue
        if len(w.terms) != 1:
            raise ExprError(
                f"cannot print a non-monomial exponential weight for {name!r}"
            )
        sign, text = _ps_factor_str(w)
        body = name if text is None else f"{text}*{name}"
        if not parts:
            parts.append(body if sign > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if sign > 0 else f"- {body}")
    if not parts:
        return None
    return " ".join(parts)


def ep_print(a: ExpPoly) -> str:
    """Canonical text form; reparses to an equal exp-polynomial."""
    if not a.terms:
        return "0"
    rendered: list[tuple[int, str]] = []
    for t in a.terms:
        sign, coeff_text = _ps_factor_str(t.coeff)
        factors: list[str] = []
        for name, p in zip(a.ctx.coords, t.powers):
            if p == 0:
                continue
            factors.append(name if p == 1 else f"{name}^{p}")
        arg = _exp_arg_str(a.ctx, t.expw)
        if arg is not None:
            factors.append(f"exp({arg})")
        if coeff_text is not None:
            factors.insert(0, coeff_text)
        if not factors:
            factors = ["1"]
        rendered.append((sign, "*".join(factors)))
    first_sign, first_text = rendered[0]
    parts = [first_text if first_sign > 0 else f"-{first_text}"]
    for sign, text in rendered[1:]:
        parts.append(f"+ {text}" if sign > 0 else f"- {text}")
    return " ".join(parts)
