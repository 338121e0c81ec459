"""The localized Weyl algebra in one chart coordinate.

Operators are kept in normal form ``sum_i p_i * d^i`` with Laurent
coefficients written to the left of all derivatives.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Mapping

from .exact import (
    Chart,
    ChartMismatch,
    IndexPoly,
    Laurent,
    Scalar,
    as_scalar,
    laurent_invert_coordinate,
    render_rational,
)
from .parsing import ParseError, Ring, parse_with, tokenize

__all__ = [
    "WeylOp",
    "weyl_mul",
    "weyl_commutator",
    "weyl_transpose",
    "chart_rewrite",
    "twist_psi",
    "conjugate_by_power",
    "parse_weyl",
    "render_weyl",
]


class WeylOp:
    """Differential operator ``sum_i coeffs[i] * d^i`` on one chart."""

    __slots__ = ("chart", "_coeffs")

    def __init__(self, chart: Chart, coeffs: Mapping[int, Laurent] | None = None):
        clean: Dict[int, Laurent] = {}
        for order, p in (coeffs or {}).items():
            if order < 0:
                raise ValueError("derivative order must be >= 0")
            if not isinstance(p, Laurent):
                p = Laurent.const(chart, p)
            if p.chart is not chart:
                raise ChartMismatch("coefficient chart differs from operator chart")
            if p:
                clean[int(order)] = p
        self.chart = chart
        self._coeffs = dict(sorted(clean.items(), reverse=True))

    # constructors
    @classmethod
    def const(cls, chart: Chart, c) -> "WeylOp":
        return cls(chart, {0: Laurent.const(chart, c)})

    @classmethod
    def coordinate(cls, chart: Chart, power: int = 1) -> "WeylOp":
        return cls(chart, {0: Laurent.monomial(chart, power)})

    @classmethod
    def d(cls, chart: Chart, order: int = 1) -> "WeylOp":
        return cls(chart, {order: Laurent.const(chart, 1)})

    @classmethod
    def function(cls, f: Laurent) -> "WeylOp":
        return cls(f.chart, {0: f})

    @classmethod
    def parse(cls, text: str, chart: Chart | None = None) -> "WeylOp":
        return parse_weyl(text, chart)

    @property
    def coeffs(self) -> Dict[int, Laurent]:
        return dict(self._coeffs)

    def order(self) -> int:
        return max(self._coeffs) if self._coeffs else -1

    def terms(self):
        """Yield ``(order, exponent, scalar)`` in rendering order."""
        for order, p in self._coeffs.items():
            for e, c in p.items():
                yield order, e, c

    def __bool__(self):
        return bool(self._coeffs)

    def _check(self, other: "WeylOp"):
        if self.chart is not other.chart:
            raise ChartMismatch(f"cannot combine {self.chart.name} and {other.chart.name} operators")

    def __add__(self, other):
        if not isinstance(other, WeylOp):
            other = WeylOp.const(self.chart, other)
        self._check(other)
        out = dict(self._coeffs)
        for i, p in other._coeffs.items():
            out[i] = out[i] + p if i in out else p
        return WeylOp(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp(self.chart, {i: -p for i, p in self._coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylOp):
            other = WeylOp.const(self.chart, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, WeylOp):
            return weyl_mul(self, other)
        c = as_scalar(other)
        return WeylOp(self.chart, {i: p * c for i, p in self._coeffs.items()})

    def __rmul__(self, other):
        c = as_scalar(other)
        return WeylOp(self.chart, {i: p * c for i, p in self._coeffs.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative operator power")
        out = WeylOp.const(self.chart, 1)
        for _ in range(n):
            out = weyl_mul(out, self)
        return out

    def __eq__(self, other):
        if isinstance(other, WeylOp):
            return self.chart is other.chart and self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, frozenset(self._coeffs.items())))

    def scalar_value(self) -> Scalar | None:
        """The constant if this operator is a scalar, else None."""
        if not self._coeffs:
            return Fraction(0)
        if set(self._coeffs) == {0} and set(self._coeffs[0].terms) == {0}:
            return self._coeffs[0].coeff(0)
        return None

    def subs(self, t=None, eta=None) -> "WeylOp":
        """Substitute values for symbolic parameters in the coefficients."""
        out = {}
        for i, p in self._coeffs.items():
            out[i] = Laurent(
                self.chart,
                {e: (c.subs(None, t, eta) if isinstance(c, IndexPoly) else c) for e, c in p.items()},
            )
        return WeylOp(self.chart, out)

    def apply(self, f: Laurent) -> Laurent:
        """Act on a Laurent polynomial as a genuine differential operator."""
        if f.chart is not self.chart:
            raise ChartMismatch("function and operator live on different charts")
        out = Laurent(self.chart)
        for i, p in self._coeffs.items():
            g = f
            for _ in range(i):
                g = g.derivative()
            out = out + p * g
        return out

    def __str__(self):
        return render_weyl(self)

    def __repr__(self):
        return f"WeylOp({self.chart.name}, {str(self)!r})"


def weyl_mul(a: WeylOp, b: WeylOp) -> WeylOp:
    """Normal-ordered product using ``d * p = p * d + p'`` repeatedly."""
    a._check(b)
    out: Dict[int, Laurent] = {}
    for i, p in a._coeffs.items():
        for j, q in b._coeffs.items():
            dq = q
            for l in range(i + 1):
                if not dq:
                    break
                term = p * dq * comb(i, l)
                order = i - l + j
                out[order] = out[order] + term if order in out else term
                dq = dq.derivative()
    return WeylOp(a.chart, out)


def weyl_commutator(a: WeylOp, b: WeylOp) -> WeylOp:
    return weyl_mul(a, b) - weyl_mul(b, a)


def weyl_transpose(a: WeylOp) -> WeylOp:
    """Anti-automorphism fixing functions and sending d to -d."""
    out = WeylOp(a.chart)
    minus_d = -WeylOp.d(a.chart)
    for i, p in a._coeffs.items():
        out = out + weyl_mul(minus_d ** i, WeylOp.function(p))
    return out


def chart_rewrite(a: WeylOp) -> WeylOp:
    """Express an operator valid on the overlap in the other chart's coordinate.

    With ``y = 1/x`` one has ``d_x = -y^2 d_y``.
    """
    target = a.chart.other
    d_new = WeylOp(target, {1: Laurent.monomial(target, 2, -1)})
    out = WeylOp(target)
    for i, p in a._coeffs.items():
        out = out + weyl_mul(WeylOp.function(laurent_invert_coordinate(p)), d_new ** i)
    return out


def twist_psi(a: WeylOp, t, inverse: bool = False) -> WeylOp:
    """Gluing isomorphism of the twisted sheaf: ``z -> z``, ``d -> d - (t-1)/z``.

    ``t`` may be a rational or a symbolic ``IndexPoly``.  With ``inverse`` the
    shift is ``+(t-1)/z``.
    """
    if a.chart is not Chart.ZERO:
        raise ChartMismatch("twist_psi is expressed in the z chart")
    shift = as_scalar(IndexPoly.coerce(as_scalar(t)) - 1)
    if inverse:
        shift = -shift
    d_new = WeylOp(Chart.ZERO, {1: Laurent.const(Chart.ZERO, 1), 0: Laurent.monomial(Chart.ZERO, -1, -shift)})
    out = WeylOp(Chart.ZERO)
    power = WeylOp.const(Chart.ZERO, 1)
    for i in range(a.order() + 1):
        if i in a._coeffs:
            out = out + weyl_mul(WeylOp.function(a._coeffs[i]), power)
        power = weyl_mul(power, d_new)
    return out


def conjugate_by_power(a: WeylOp, n: int) -> WeylOp:
    """``x^n * a * x^-n`` in normal form."""
    n = int(n)
    return weyl_mul(weyl_mul(WeylOp.coordinate(a.chart, n), a), WeylOp.coordinate(a.chart, -n))


# text format -----------------------------------------------------------------


def _render_coeff(c: Scalar, has_factors: bool) -> tuple[bool, str]:
    """Return (negative, body) for a coefficient."""
    if isinstance(c, IndexPoly):
        neg = c.leading_coefficient() < 0
        body = -c if neg else c
        terms = body.terms
        if len(terms) == 1 and next(iter(terms.values())) == 1:
            text = str(body)
        else:
            text = f"({body})"
        return neg, text if not has_factors else text + "*"
    neg = c < 0
    mag = abs(c)
    if mag == 1 and has_factors:
        return neg, ""
    return neg, render_rational(mag) + ("*" if has_factors else "")


def render_weyl(a: WeylOp) -> str:
    x = a.chart.coordinate
    parts = []
    for order, e, c in a.terms():
        factors = []
        if e == 1:
            factors.append(x)
        elif e:
            factors.append(f"{x}^{e}")
        if order == 1:
            factors.append("d")
        elif order:
            factors.append(f"d^{order}")
        neg, head = _render_coeff(c, bool(factors))
        body = head + "*".join(factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts) if parts else "0"


class _WeylRing(Ring):
    def __init__(self, chart: Chart):
        self.chart = chart

    def const(self, c):
        return WeylOp.const(self.chart, c)

    def symbol(self, name):
        if name == self.chart.coordinate:
            return WeylOp.coordinate(self.chart)
        if name == "d":
            return WeylOp.d(self.chart)
        if name in ("k", "t", "eta"):
            return WeylOp.const(self.chart, IndexPoly.symbol(name))
        if name in ("z", "w"):
            raise ParseError(f"coordinate {name} does not belong to chart {self.chart.name}")
        raise ParseError(f"unknown symbol {name!r}")

    def mul(self, a, b):
        return weyl_mul(a, b)

    def power(self, a, n):
        if n < 0:
            # only monomials in the coordinate can be inverted
            if set(a.coeffs) == {0} and len(a.coeffs[0].terms) == 1:
                (e, c), = a.coeffs[0].terms.items()
                if c == 1:
                    return WeylOp.coordinate(self.chart, e * n)
            raise ParseError("negative powers only apply to the coordinate")
        return a ** n

    def as_constant(self, a):
        v = a.scalar_value()
        return v if isinstance(v, Fraction) else None


def parse_weyl(text: str, chart: Chart | None = None) -> WeylOp:
    """Parse an operator such as ``"z^2*d - (t-1)*z"`` into normal form.

    The chart is inferred from the coordinate letter when not given.
    """
    names = {tok for kind, tok in tokenize(text) if kind == "id"}
    if chart is None:
        if "z" in names and "w" in names:
            raise ParseError("expression mixes z and w")
        chart = Chart.INF if "w" in names else Chart.ZERO
    return parse_with(text, _WeylRing(chart))
