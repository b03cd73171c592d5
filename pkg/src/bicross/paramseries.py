"""Truncated Laurent series in one deformation parameter, over exact rationals.

Every scalar in the engine is a :class:`ParamSeries`: a finite sum
``sum_d c_d * X^d`` with ``c_d`` rational and the internal degree ``d``
confined to a window ``-bmax <= d <= zmax`` fixed by a :class:`SeriesContext`.
Degrees above the cap are dropped (the result carries a ``truncated`` flag);
degrees below the floor raise :class:`SeriesWindowError` — the floor exists
only to let intermediate divisions by parameter monomials cancel out.

Inverted contexts (``inverted=True``) make the internal variable the
*reciprocal* of the displayed parameter: internal degree ``d`` prints and
evaluates as ``param^(-d)``.  This keeps algebras whose structure constants
are series in ``1/param`` inside a non-negative internal window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


class SeriesWindowError(ValueError):
    """A series term fell below the allowed degree floor."""


class EvalDomainError(ValueError):
    """Numeric evaluation requested outside the valid parameter domain."""


@dataclass(frozen=True)
class SeriesContext:
    """Window and display conventions for series in one parameter.

    Attributes:
        param: display symbol of the deformation parameter.
        bmax: largest allowed *negative* internal degree (window floor -bmax).
        zmax: largest retained internal degree (window cap).
        inverted: when True the internal variable is 1/param.
    """

    param: str = "z"
    bmax: int = 2
    zmax: int = 8
    inverted: bool = False

    def widened(self, extra: int) -> "SeriesContext":
        """Context with the degree cap raised by ``extra`` (load-time slack)."""
        return SeriesContext(self.param, self.bmax, self.zmax + extra, self.inverted)


@dataclass(frozen=True)
class ParamSeries:
    """Finite rational Laurent series inside a :class:`SeriesContext` window.

    ``terms`` is sorted by internal degree and contains no zero coefficients.
    ``truncated`` records that terms beyond the cap were dropped somewhere in
    the history of this value; it does not participate in equality.
    """

    ctx: SeriesContext
    terms: tuple[tuple[int, Fraction], ...]
    truncated: bool = field(default=False, compare=False)

    def coeff(self, degree: int) -> Fraction:
        """Coefficient of internal degree ``degree`` (0 if absent)."""
        for d, c in self.terms:
            if d == degree:
                return c
        return Fraction(0)

    def min_degree(self) -> int | None:
        """Smallest internal degree present, or None for the zero series."""
        return self.terms[0][0] if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:  # pragma: no cover - delegated
        return ps_str(self)


def ps_make(
    ctx: SeriesContext,
    coeffs: Mapping[int, Rational] | Iterable[tuple[int, Rational]],
    truncated: bool = False,
) -> ParamSeries:
    """Build a series from (degree, coefficient) data, enforcing the window.

    Raises:
        SeriesWindowError: if a nonzero coefficient sits below ``-bmax``.
    """
    items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    acc: dict[int, Fraction] = {}
    for d, c in items:
        c = Fraction(c)
        if c == 0:
            continue
        acc[d] = acc.get(d, Fraction(0)) + c
    out: list[tuple[int, Fraction]] = []
    for d in sorted(acc):
        c = acc[d]
        if c == 0:
            continue
        if d < -ctx.bmax:
            raise SeriesWindowError(
                f"degree {d} below the window floor -{ctx.bmax} "
                f"for parameter {ctx.param!r}"
            )
        if d > ctx.zmax:
            truncated = True
            continue
        out.append((d, c))
    return ParamSeries(ctx, tuple(out), truncated)


def ps_zero(ctx: SeriesContext) -> ParamSeries:
    return ParamSeries(ctx, ())


def ps_one(ctx: SeriesContext) -> ParamSeries:
    return ps_rational(ctx, 1)


def ps_rational(ctx: SeriesContext, value: Rational) -> ParamSeries:
    """Constant series."""
    return ps_make(ctx, {0: Fraction(value)})


def ps_monomial(ctx: SeriesContext, value: Rational, degree: int) -> ParamSeries:
    """Single term ``value * X^degree`` (internal degree)."""
    return ps_make(ctx, {degree: Fraction(value)})


def ps_param(ctx: SeriesContext, power: int = 1) -> ParamSeries:
    """The displayed parameter symbol raised to ``power``.

    In an inverted context the displayed parameter is the reciprocal of the
    internal variable, so ``param^power`` has internal degree ``-power``.
    """
    degree = -power if ctx.inverted else power
    return ps_monomial(ctx, 1, degree)


def _require_same_ctx(a: ParamSeries, b: ParamSeries) -> None:
    if a.ctx != b.ctx:
        raise ValueError(f"series contexts differ: {a.ctx} vs {b.ctx}")


def ps_add(a: ParamSeries, b: ParamSeries) -> ParamSeries:
    _require_same_ctx(a, b)
    acc = dict(a.terms)
    for d, c in b.terms:
        acc[d] = acc.get(d, Fraction(0)) + c
    return ps_make(a.ctx, acc, truncated=a.truncated or b.truncated)


def ps_neg(a: ParamSeries) -> ParamSeries:
    return ParamSeries(a.ctx, tuple((d, -c) for d, c in a.terms), a.truncated)


def ps_sub(a: ParamSeries, b: ParamSeries) -> ParamSeries:
    return ps_add(a, ps_neg(b))


def ps_scale(a: ParamSeries, value: Rational) -> ParamSeries:
    v = Fraction(value)
    if v == 0:
        return ParamSeries(a.ctx, (), a.truncated)
    return ParamSeries(a.ctx, tuple((d, c * v) for d, c in a.terms), a.truncated)


def ps_mul(a: ParamSeries, b: ParamSeries) -> ParamSeries:
    _require_same_ctx(a, b)
    acc: dict[int, Fraction] = {}
    for da, ca in a.terms:
        for db, cb in b.terms:
            d = da + db
            acc[d] = acc.get(d, Fraction(0)) + ca * cb
    return ps_make(a.ctx, acc, truncated=a.truncated or b.truncated)


def ps_pow(a: ParamSeries, n: int) -> ParamSeries:
    """Integer power; negative exponents only for single-term series."""
    if n < 0:
        return ps_pow(ps_invert_monomial(a), -n)
    out = ps_one(a.ctx)
    for _ in range(n):
        out = ps_mul(out, a)
    return out


def ps_invert_monomial(a: ParamSeries) -> ParamSeries:
    """Inverse of a single-term series ``c * X^d`` (i.e. ``(1/c) * X^-d``)."""
    if len(a.terms) != 1:
        raise ValueError("only single-term series are invertible here")
    d, c = a.terms[0]
    return ps_make(a.ctx, {-d: Fraction(1) / c})


def ps_div_monomial(a: ParamSeries, b: ParamSeries) -> ParamSeries:
    """Divide by a single-term series; may raise :class:`SeriesWindowError`."""
    return ps_mul(a, ps_invert_monomial(b))


def ps_exp_series(s: ParamSeries, n: int) -> ParamSeries:
    """The ``n``-th exponential-series term ``s^n / n!``."""
    return ps_scale(ps_pow(s, n), Fraction(1, math.factorial(n)))


def ps_exp_of(s: ParamSeries) -> ParamSeries:
    """Exponential ``sum_n s^n / n!`` of a series with positive valuation.

    Requires every degree of ``s`` to be >= 1 so the sum terminates inside
    the window; the inevitable tail beyond the cap sets the truncated flag.
    """
    lo = s.min_degree()
    if lo is None:
        return ps_one(s.ctx)
    if lo < 1:
        raise ValueError(
            "exp of a series requires strictly positive parameter degrees; "
            f"got minimum degree {lo}"
        )
    out = ps_one(s.ctx)
    power = ps_one(s.ctx)
    n = 0
    while (n + 1) * lo <= s.ctx.zmax:
        n += 1
        power = ps_mul(power, s)
        out = ps_add(out, ps_scale(power, Fraction(1, math.factorial(n))))
    return ParamSeries(out.ctx, out.terms, True)


def ps_restrict(a: ParamSeries, zcap: int) -> ParamSeries:
    """Drop all terms of internal degree > ``zcap`` (comparison windows)."""
    return ParamSeries(
        a.ctx, tuple((d, c) for d, c in a.terms if d <= zcap), a.truncated
    )


def ps_equal(a: ParamSeries, b: ParamSeries, zcap: int | None = None) -> bool:
    """Exact equality, optionally restricted to degrees <= ``zcap``."""
    _require_same_ctx(a, b)
    if zcap is None:
        return a.terms == b.terms
    return ps_restrict(a, zcap).terms == ps_restrict(b, zcap).terms


def _internal_value(ctx: SeriesContext, param_value: float | Rational) -> Fraction | float:
    if ctx.inverted:
        if param_value == 0:
            raise EvalDomainError(
                f"parameter {ctx.param!r} = 0 is outside the domain of an "
                "inverse-parameter series"
            )
        if isinstance(param_value, (int, Fraction)):
            return Fraction(1) / Fraction(param_value)
        return 1.0 / param_value
    if isinstance(param_value, (int, Fraction)):
        return Fraction(param_value)
    return param_value


def _horner(coeffs: list[Fraction], x):  # ascending degrees 0..n
    out = coeffs[-1] if coeffs else 0
    for c in reversed(coeffs[:-1]):
        out = out * x + c
    return out


def ps_eval(a: ParamSeries, param_value: float | Rational) -> float:
    """Evaluate at a displayed-parameter value (Horner on both tails).

    Raises:
        EvalDomainError: for param 0 with negative internal degrees, or for
            param 0 in an inverted context.
    """
    return float(ps_eval_exact(a, param_value))


def ps_eval_exact(a: ParamSeries, param_value: float | Rational):
    """Evaluate exactly (Fraction in, Fraction out; float in, float out)."""
    x = _internal_value(a.ctx, param_value)
    neg = [(d, c) for d, c in a.terms if d < 0]
    if neg and x == 0:
        raise EvalDomainError(
            f"parameter value 0 with negative powers of the series variable "
            f"({a.ctx.param!r})"
        )
    maxd = max((d for d, _ in a.terms if d >= 0), default=0)
    poly = [Fraction(0)] * (maxd + 1)
    for d, c in a.terms:
        if d >= 0:
            poly[d] = c
    out = _horner(poly, x)
    if neg:
        mind = min(d for d, _ in neg)
        inv = [Fraction(0)] * (-mind + 1)
        for d, c in neg:
            inv[-d] = c
        y = Fraction(1) / x if isinstance(x, Fraction) else 1.0 / x
        out = out + _horner(inv, y)
    return out


def _fmt_coeff(c: Fraction) -> str:
    return str(c)


def ps_str(a: ParamSeries) -> str:
    """Canonical text form: terms in ascending degree, ``p/q*param^d``.

    The printed exponent is the *displayed* one (negated in inverted
    contexts); exponent 1 omits the caret, exponent 0 omits the symbol.
    """
    if not a.terms:
        return "0"
    parts: list[str] = []
    for d, c in a.terms:
        shown = -d if a.ctx.inverted else d
        if shown == 0:
            body = _fmt_coeff(abs(c))
        else:
            sym = a.ctx.param if shown == 1 else f"{a.ctx.param}^{shown}"
            body = sym if abs(c) == 1 else f"{_fmt_coeff(abs(c))}*{sym}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
