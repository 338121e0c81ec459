"""Global sections of the twisted sheaf D_t at the operator level.

The chart operators attached to E, F, H are not typed in by hand: they are
obtained by differentiating the group action on local sections, using
first-order jets over the dual numbers ``r^2 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Mapping, Tuple

from .exact import T, Chart, IndexPoly, Laurent, Scalar, as_scalar
from .parsing import ParseError, Ring, parse_with
from .weyl import WeylOp, chart_rewrite, twist_psi, weyl_mul

__all__ = [
    "TracelessMatrix",
    "E",
    "F",
    "H",
    "Jet",
    "exp_first_order",
    "group_action_jet",
    "derive_chart_operator",
    "chart_operator",
    "LieWord",
    "GlobalOp",
    "beta",
    "GlueReport",
    "glue_check",
    "casimir_scalar_identity",
    "CASIMIR",
    "expected_casimir",
]


@dataclass(frozen=True)
class TracelessMatrix:
    """``[[x11, x12], [x21, -x11]]``."""

    x11: Fraction = Fraction(0)
    x12: Fraction = Fraction(0)
    x21: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("x11", "x12", "x21"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def x22(self) -> Fraction:
        return -self.x11

    def rows(self):
        return ((self.x11, self.x12), (self.x21, self.x22))

    def __add__(self, other: "TracelessMatrix") -> "TracelessMatrix":
        return TracelessMatrix(self.x11 + other.x11, self.x12 + other.x12, self.x21 + other.x21)

    def __rmul__(self, c) -> "TracelessMatrix":
        c = Fraction(c)
        return TracelessMatrix(c * self.x11, c * self.x12, c * self.x21)

    def bracket(self, other: "TracelessMatrix") -> "TracelessMatrix":
        (a, b), (c, d) = self.rows()
        (p, q), (r, s) = other.rows()
        m11 = a * p + b * r - (p * a + q * c)
        m12 = a * q + b * s - (p * b + q * d)
        m21 = c * p + d * r - (r * a + s * c)
        return TracelessMatrix(m11, m12, m21)


E = TracelessMatrix(x12=1)
F = TracelessMatrix(x21=1)
H = TracelessMatrix(x11=1)
_LETTERS = {"E": E, "F": F, "H": H}


class Jet:
    """First-order jet ``value + r * eps`` with Laurent entries on one chart."""

    __slots__ = ("value", "eps")

    def __init__(self, value: Laurent, eps: Laurent):
        self.value = value
        self.eps = eps

    @classmethod
    def scalar(cls, chart: Chart, value, eps) -> "Jet":
        return cls(Laurent.const(chart, value), Laurent.const(chart, eps))

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.value + other.value, self.eps + other.eps)

    def __neg__(self) -> "Jet":
        return Jet(-self.value, -self.eps)

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Laurent):
            return Jet(self.value * other, self.eps * other)
        return Jet(self.value * other.value, self.value * other.eps + self.eps * other.value)

    def power(self, s) -> "Jet":
        """``(1 + r*eps)^s = 1 + r*s*eps``; any exponent, symbolic included.

        Integer exponents are also allowed when the value is a unit monomial.
        """
        chart = self.value.chart
        if self.value == Laurent.const(chart, 1):
            return Jet(self.value, self.eps * as_scalar(s))
        s = as_scalar(s)
        if not (isinstance(s, Fraction) and s.denominator == 1):
            raise ValueError("symbolic powers need a jet based at 1")
        n = int(s)
        terms = self.value.terms
        if n < 0:
            if len(terms) != 1:
                raise ValueError("cannot invert a non-monomial jet")
            (e, c), = terms.items()
            inv = Laurent.monomial(chart, -e, 1 / c)
            # (v + r u)^-1 = v^-1 - r u v^-2
            base = Jet(inv, -(self.eps * inv * inv))
            n = -n
        else:
            base = self
        out = Jet(Laurent.const(chart, 1), Laurent(chart))
        for _ in range(n):
            out = out * base
        return out


def exp_first_order(X: TracelessMatrix) -> Tuple[Tuple[Tuple[Fraction, Fraction], ...], ...]:
    """``I + r X`` as a 2x2 matrix of (value, r-coefficient) pairs."""
    (a, b), (c, d) = X.rows()
    return (((Fraction(1), a), (Fraction(0), b)), ((Fraction(0), c), (Fraction(1), d)))


def group_action_jet(X: TracelessMatrix, chart: Chart, t, m: int) -> Laurent:
    """r-coefficient of ``exp(rX)`` acting on the monomial ``x^m`` of O(t-1).

    On the z chart ``g . p(z) = (d - b z)^(t-1) p((-c + a z)/(d - b z))``; on the
    w chart ``g . q(w) = (-c w + a)^(t-1) q((d w - b)/(-c w + a))``.
    """
    ((a0, a1), (b0, b1)), ((c0, c1), (d0, d1)) = exp_first_order(X)
    a = Jet.scalar(chart, a0, a1)
    b = Jet.scalar(chart, b0, b1)
    c = Jet.scalar(chart, c0, c1)
    d = Jet.scalar(chart, d0, d1)
    x = Laurent.monomial(chart, 1)
    if chart is Chart.ZERO:
        unit = d - b * x
        arg_num = a * x - c
    else:
        unit = a - c * x
        arg_num = d * x - b
    shift = as_scalar(IndexPoly.coerce(as_scalar(t)) - 1)
    jet = unit.power(shift) * arg_num.power(m) * unit.power(-m)
    return jet.eps


def derive_chart_operator(X: TracelessMatrix, chart: Chart, t=T) -> WeylOp:
    """First-order operator by which X acts on local sections of O(t-1).

    Reconstructed as ``f + g*d`` from the action on 1 and x, then re-checked
    against the jet computation on x^2 and x^3.
    """
    f = group_action_jet(X, chart, t, 0)
    x = Laurent.monomial(chart, 1)
    g = group_action_jet(X, chart, t, 1) - x * f
    op = WeylOp(chart, {0: f, 1: g})
    for m in (2, 3, -1):
        if op.apply(Laurent.monomial(chart, m)) != group_action_jet(X, chart, t, m):
            raise ArithmeticError(f"first-order reconstruction failed on x^{m}")
    return op


@lru_cache(maxsize=512)
def _chart_operator_cached(letter: str, chart: Chart, t) -> WeylOp:
    return derive_chart_operator(_LETTERS[letter], chart, t)


def chart_operator(letter: str, chart: Chart, t=T) -> WeylOp:
    """Cached ``derive_chart_operator`` for the basis letters E, F, H."""
    return _chart_operator_cached(letter, chart, as_scalar(t))


class LieWord:
    """Formal rational combination of words in the letters E, F, H."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Tuple[str, ...], object] | None = None):
        clean: Dict[Tuple[str, ...], Fraction] = {}
        for word, c in (terms or {}).items():
            word = tuple(word)
            if any(letter not in _LETTERS for letter in word):
                raise ValueError(f"unknown letter in {word}")
            c = Fraction(c)
            if c:
                clean[word] = clean.get(word, Fraction(0)) + c
        self._terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def letter(cls, name: str) -> "LieWord":
        return cls({(name,): 1})

    @classmethod
    def identity(cls) -> "LieWord":
        return cls({(): 1})

    @classmethod
    def parse(cls, text: str) -> "LieWord":
        return parse_with(text, _WordRing())

    def items(self) -> Iterator[Tuple[Tuple[str, ...], Fraction]]:
        return iter(self._terms.items())

    def __add__(self, other: "LieWord") -> "LieWord":
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return LieWord(out)

    def __neg__(self):
        return LieWord({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LieWord):
            out: Dict[Tuple[str, ...], Fraction] = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
            return LieWord(out)
        c = Fraction(other)
        return LieWord({w: v * c for w, v in self._terms.items()})

    def __rmul__(self, other):
        c = Fraction(other)
        return LieWord({w: v * c for w, v in self._terms.items()})

    def __eq__(self, other):
        return isinstance(other, LieWord) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        parts = [f"{c}*{'*'.join(w) or '1'}" for w, c in self._terms.items()]
        return "LieWord(" + " + ".join(parts) + ")"


class _WordRing(Ring):
    def const(self, c):
        return LieWord({(): c})

    def symbol(self, name):
        if name not in _LETTERS:
            raise ParseError(f"unknown Lie letter {name!r}")
        return LieWord.letter(name)

    def as_constant(self, a):
        items = dict(a.items())
        if set(items) <= {()}:
            return items.get((), Fraction(0))
        return None


CASIMIR = LieWord.parse("H*H + 2*E*F + 2*F*E")


def expected_casimir(t) -> Scalar:
    s = IndexPoly.coerce(as_scalar(t)) - 1
    return as_scalar(s * s + 2 * s)


@dataclass(frozen=True)
class GlobalOp:
    """A global section of D_t given chartwise."""

    t: object
    op0: WeylOp
    opinf: WeylOp

    def __post_init__(self):
        object.__setattr__(self, "t", as_scalar(self.t))
        if self.op0.chart is not Chart.ZERO or self.opinf.chart is not Chart.INF:
            raise ValueError("GlobalOp needs a z-chart and a w-chart operator")

    def _same_t(self, other: "GlobalOp"):
        if self.t != other.t:
            raise ValueError("global operators for different twists")

    def __add__(self, other: "GlobalOp") -> "GlobalOp":
        self._same_t(other)
        return GlobalOp(self.t, self.op0 + other.op0, self.opinf + other.opinf)

    def __neg__(self):
        return GlobalOp(self.t, -self.op0, -self.opinf)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GlobalOp):
            self._same_t(other)
            return GlobalOp(self.t, weyl_mul(self.op0, other.op0), weyl_mul(self.opinf, other.opinf))
        return GlobalOp(self.t, self.op0 * other, self.opinf * other)

    def __rmul__(self, other):
        return GlobalOp(self.t, other * self.op0, other * self.opinf)

    def commutator(self, other: "GlobalOp") -> "GlobalOp":
        return self * other - other * self

    def chart(self, chart: Chart) -> WeylOp:
        return self.op0 if chart is Chart.ZERO else self.opinf


def beta(word, t=T) -> GlobalOp:
    """Image of an enveloping-algebra element as a pair of chart operators."""
    if isinstance(word, str):
        word = LieWord.parse(word)
    if isinstance(word, TracelessMatrix):
        return GlobalOp(t, derive_chart_operator(word, Chart.ZERO, t), derive_chart_operator(word, Chart.INF, t))
    total = GlobalOp(t, WeylOp(Chart.ZERO), WeylOp(Chart.INF))
    for letters, c in word.items():
        prod = GlobalOp(t, WeylOp.const(Chart.ZERO, 1), WeylOp.const(Chart.INF, 1))
        for letter in letters:
            prod = prod * GlobalOp(t, chart_operator(letter, Chart.ZERO, t), chart_operator(letter, Chart.INF, t))
        total = total + c * prod
    return total


@dataclass(frozen=True)
class GlueReport:
    ok: bool
    expected: WeylOp
    glued: WeylOp
    difference: WeylOp = field(repr=False, default=None)

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"glues: {self.expected}"
        return f"psi(rewrite(op_inf)) = {self.glued} but op_0 = {self.expected} (difference {self.difference})"


def glue_check(g: GlobalOp) -> GlueReport:
    """Check that the w-chart operator, moved to z and twisted, equals the z-chart one."""
    glued = twist_psi(chart_rewrite(g.opinf), g.t)
    diff = glued - g.op0
    return GlueReport(not diff, g.op0, glued, diff)


def casimir_scalar_identity(t=T) -> Scalar:
    """The constant by which the Casimir element acts through beta.

    Raises ``ArithmeticError`` if either chart component is not a constant
    operator or the constant differs from ``(t-1)^2 + 2(t-1)``.
    """
    omega = beta(CASIMIR, t)
    values = []
    for op in (omega.op0, omega.opinf):
        v = op.scalar_value()
        if v is None:
            raise ArithmeticError(f"Casimir image is not a scalar: {op}")
        values.append(v)
    if values[0] != values[1] or values[0] != expected_casimir(t):
        raise ArithmeticError(f"Casimir constants disagree: {values}")
    return values[0]
