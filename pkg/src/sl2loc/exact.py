"""Exact scalars, index polynomials in (k, t, eta) and chart-tagged Laurent polynomials."""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

__all__ = [
    "Fraction",
    "Chart",
    "ChartMismatch",
    "IndexPoly",
    "Laurent",
    "K",
    "T",
    "ETA",
    "Scalar",
    "as_scalar",
    "render_rational",
    "laurent_mul",
    "laurent_invert_coordinate",
    "indexpoly_eval",
]


class ChartMismatch(ValueError):
    """Raised when values living on different charts are combined."""


class Chart(enum.Enum):
    ZERO = "zero"
    INF = "inf"

    @property
    def coordinate(self) -> str:
        return "z" if self is Chart.ZERO else "w"

    @property
    def other(self) -> "Chart":
        return Chart.INF if self is Chart.ZERO else Chart.ZERO

    @classmethod
    def parse(cls, text: str) -> "Chart":
        key = text.strip().lower()
        if key in ("zero", "0", "z", "u0", "chartzero"):
            return cls.ZERO
        if key in ("inf", "infinity", "w", "uinf", "chartinfinity"):
            return cls.INF
        raise ValueError(f"unknown chart {text!r}")


def render_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


Monomial = Tuple[int, int, int]
_VARS = ("k", "t", "eta")


def _mono_key(m: Monomial):
    # graded, then lexicographic in the fixed order (k, t, eta); highest first
    return (-sum(m), tuple(-e for e in m))


class IndexPoly:
    """Polynomial with rational coefficients in the three symbols k, t and eta.

    Instances are immutable.  Equality against plain numbers works when the
    polynomial is constant, and hashing agrees with ``Fraction`` in that case.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                mono = tuple(int(e) for e in mono)
                if len(mono) != 3 or min(mono) < 0:
                    raise ValueError(f"bad monomial {mono}")
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = dict(sorted(clean.items(), key=lambda kv: _mono_key(kv[0])))
        self._hash = None

    @classmethod
    def const(cls, c) -> "IndexPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def symbol(cls, name: str) -> "IndexPoly":
        mono = [0, 0, 0]
        mono[_VARS.index(name)] = 1
        return cls({tuple(mono): 1})

    @classmethod
    def coerce(cls, x) -> "IndexPoly":
        if isinstance(x, IndexPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to IndexPoly")

    @classmethod
    def parse(cls, text: str) -> "IndexPoly":
        from .parsing import parse_indexpoly

        return parse_indexpoly(text)

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_constant(self) -> bool:
        return all(m == (0, 0, 0) for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0, 0, 0), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(sum(m) for m in self._terms)
        i = _VARS.index(var)
        return max(m[i] for m in self._terms)

    def free_symbols(self) -> set:
        return {v for i, v in enumerate(_VARS) for m in self._terms if m[i]}

    # arithmetic ---------------------------------------------------------
    def __bool__(self):
        return bool(self._terms)

    def __neg__(self):
        return IndexPoly({m: -c for m, c in self._terms.items()})

    def __add__(self, other):
        try:
            other = IndexPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return IndexPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return self + (-IndexPoly.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = IndexPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[m] = out.get(m, 0) + c1 * c2
        return IndexPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, IndexPoly):
            if not other.is_constant():
                return NotImplemented
            other = other.constant_value()
        other = Fraction(other)
        return IndexPoly({m: c / other for m, c in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("IndexPoly powers must be non-negative integers")
        out = IndexPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, IndexPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # substitution ------------------------------------------------------
    def subs(self, k=None, t=None, eta=None) -> "Scalar":
        """Substitute any subset of the symbols; returns a normalised scalar."""
        vals = (k, t, eta)
        total: object = Fraction(0)
        for mono, c in self._terms.items():
            term: object = c
            rest = [0, 0, 0]
            for i, e in enumerate(mono):
                if not e:
                    continue
                if vals[i] is None:
                    rest[i] = e
                else:
                    term = term * (vals[i] ** e)
            if any(rest):
                term = term * IndexPoly({tuple(rest): 1})
            total = total + term
        return as_scalar(total)

    def leading_coefficient(self) -> Fraction:
        for c in self._terms.values():
            return c
        return Fraction(0)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (mono, c) in enumerate(self._terms.items()):
            factors = []
            for name, e in zip(_VARS, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = render_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = render_rational(mag) + "*" + "*".join(factors)
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"IndexPoly({str(self)!r})"


Scalar = Union[Fraction, IndexPoly]

K = IndexPoly.symbol("k")
T = IndexPoly.symbol("t")
ETA = IndexPoly.symbol("eta")


def as_scalar(x) -> Scalar:
    """Normalise to ``Fraction`` when possible, otherwise a non-constant IndexPoly."""
    if isinstance(x, IndexPoly):
        return x.constant_value() if x.is_constant() else x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return as_scalar(IndexPoly.parse(x))
    raise TypeError(f"not an exact scalar: {x!r}")


def render_scalar(x: Scalar) -> str:
    if isinstance(x, IndexPoly):
        return str(x)
    return render_rational(x)


def indexpoly_eval(p, k, t, eta) -> Fraction:
    """Evaluate ``p`` at rational k, t, eta."""
    if not isinstance(p, IndexPoly):
        return Fraction(p)
    value = p.subs(Fraction(k), Fraction(t), Fraction(eta))
    if isinstance(value, IndexPoly):
        raise ValueError(f"evaluation of {p} did not produce a number")
    return value


class Laurent:
    """Laurent polynomial in the coordinate of one chart.

    ``terms`` maps integer exponents to nonzero scalars (``Fraction`` or
    non-constant ``IndexPoly`` when the twist parameter is kept symbolic).
    """

    __slots__ = ("chart", "_terms")

    def __init__(self, chart: Chart, terms: Mapping[int, object] | None = None):
        if not isinstance(chart, Chart):
            raise TypeError("chart must be a Chart")
        clean: Dict[int, Scalar] = {}
        for e, c in (terms or {}).items():
            c = as_scalar(c)
            if c:
                clean[int(e)] = c
        self.chart = chart
        self._terms = dict(sorted(clean.items(), reverse=True))

    @classmethod
    def monomial(cls, chart: Chart, exponent: int, coeff=1) -> "Laurent":
        return cls(chart, {exponent: coeff})

    @classmethod
    def const(cls, chart: Chart, c) -> "Laurent":
        return cls(chart, {0: c})

    @property
    def terms(self) -> Dict[int, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[int, Scalar]]:
        return self._terms.items()

    def coeff(self, exponent: int) -> Scalar:
        return self._terms.get(exponent, Fraction(0))

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other: "Laurent"):
        if self.chart is not other.chart:
            raise ChartMismatch(f"cannot combine {self.chart.name} and {other.chart.name} values")

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(self.chart, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(self.chart, out)

    def __neg__(self):
        return Laurent(self.chart, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(self.chart, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            c = as_scalar(other)
            return Laurent(self.chart, {e: v * c for e, v in self._terms.items()})
        return laurent_mul(self, other)

    def __rmul__(self, other):
        return self * other

    def derivative(self) -> "Laurent":
        return Laurent(self.chart, {e - 1: e * c for e, c in self._terms.items() if e})

    def min_exponent(self) -> int:
        return min(self._terms) if self._terms else 0

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.chart is other.chart and self._terms == other._terms
        if isinstance(other, (int, Fraction, IndexPoly)):
            return self == Laurent.const(self.chart, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.chart, frozenset(self._terms.items())))

    def __str__(self):
        from .weyl import WeylOp

        return str(WeylOp(self.chart, {0: self}))

    def __repr__(self):
        return f"Laurent({self.chart.name}, {str(self)!r})"


def laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    a._check(b)
    out: Dict[int, object] = {}
    for e1, c1 in a._terms.items():
        for e2, c2 in b._terms.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return Laurent(a.chart, out)


def laurent_invert_coordinate(a: Laurent) -> Laurent:
    """Substitute coordinate -> 1/coordinate, moving to the other chart."""
    return Laurent(a.chart.other, {-e: c for e, c in a._terms.items()})
