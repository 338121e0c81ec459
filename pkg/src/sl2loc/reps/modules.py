"""Basis-indexed local modules over the chart Weyl algebras.

Each local module is described only by how the coordinate and the derivative
act on its basis ``b_k``; everything else (the sl(2) actions, the tables in
closed form) is computed from those two rules and the chart operators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from ..exact import ETA, K, T, Chart, ChartMismatch, IndexPoly, Scalar, as_scalar, render_scalar
from ..tdo import chart_operator
from ..weyl import WeylOp

__all__ = [
    "Family",
    "IndexDomain",
    "ActionRule",
    "Element",
    "BasisModule",
    "UnsupportedModule",
    "make_local",
    "act_weyl",
    "act_lie",
    "action_table",
    "interpolate_in_k",
]


class UnsupportedModule(ValueError):
    """Invalid (family, chart, t, eta) request."""


class Family(enum.Enum):
    FINITE = "FiniteO"
    VERMA = "VermaPoint"
    DUAL_VERMA = "DualVermaOpen"
    DELTA_INF = "DeltaInfinity"
    PRINCIPAL_EVEN = "PrincipalEven"
    PRINCIPAL_ODD = "PrincipalOdd"
    WHITTAKER = "WhittakerOpen"

    @classmethod
    def parse(cls, text: str) -> "Family":
        if isinstance(text, Family):
            return text
        key = text.replace("_", "").replace("-", "").lower()
        for fam in cls:
            if fam.value.lower() == key or fam.name.replace("_", "").lower() == key:
                return fam
        raise UnsupportedModule(f"unknown family {text!r}; choose from {', '.join(f.value for f in cls)}")

    @property
    def charts(self) -> Tuple[Chart, ...]:
        if self is Family.VERMA:
            return (Chart.ZERO,)
        if self is Family.DELTA_INF:
            return (Chart.INF,)
        return (Chart.ZERO, Chart.INF)


@dataclass(frozen=True)
class IndexDomain:
    """Contiguous set of integer indices; ``None`` means unbounded."""

    lo: Optional[int] = None
    hi: Optional[int] = None

    def __contains__(self, k: int) -> bool:
        return (self.lo is None or k >= self.lo) and (self.hi is None or k <= self.hi)

    @property
    def finite(self) -> bool:
        return self.lo is not None and self.hi is not None

    @property
    def kind(self) -> str:
        if self.finite:
            return f"FiniteRange({self.lo}..{self.hi})"
        if self.lo == 0 and self.hi is None:
            return "NonNegativeIntegers"
        if self.lo is None and self.hi is None:
            return "AllIntegers"
        return f"Interval({self.lo}..{self.hi})"

    def window(self, n: int) -> List[int]:
        if self.finite:
            return list(range(self.lo, self.hi + 1))
        if self.lo is not None:
            return list(range(self.lo, self.lo + n + 1))
        if self.hi is not None:
            return list(range(self.hi - n, self.hi + 1))
        return list(range(-n, n + 1))

    def samples(self) -> List[int]:
        """Four interior indices far enough from any boundary."""
        if self.lo is not None:
            return [self.lo + j for j in (4, 5, 6, 7)]
        if self.hi is not None:
            return [self.hi - j for j in (4, 5, 6, 7)]
        return [4, 5, 6, 7]


NON_NEGATIVE = IndexDomain(0, None)
ALL_INTEGERS = IndexDomain(None, None)


class ActionRule:
    """``X . b_k = sum over (shift, c) of c(k) * b_{k + shift}``."""

    __slots__ = ("_entries", "_memo")

    def __init__(self, entries: Mapping[int, object] | Iterable[Tuple[int, object]]):
        if isinstance(entries, Mapping):
            entries = entries.items()
        clean: Dict[int, Scalar] = {}
        for shift, c in entries:
            if int(shift) in clean:
                raise ValueError(f"duplicate shift {shift}")
            c = as_scalar(c)
            if c:
                clean[int(shift)] = c
        self._entries = dict(sorted(clean.items()))
        self._memo: Dict[int, Tuple[Tuple[int, Scalar], ...]] = {}

    @property
    def entries(self) -> Dict[int, Scalar]:
        return dict(self._entries)

    def shifts(self) -> Tuple[int, ...]:
        return tuple(self._entries)

    def at(self, k: int) -> Tuple[Tuple[int, Scalar], ...]:
        """Nonzero ``(target_index, coefficient)`` pairs for basis index k."""
        hit = self._memo.get(k)
        if hit is None:
            out = []
            for shift, c in self._entries.items():
                v = c.subs(k=k) if isinstance(c, IndexPoly) else c
                if v:
                    out.append((k + shift, v))
            hit = self._memo[k] = tuple(out)
        return hit

    def subs(self, t=None, eta=None) -> "ActionRule":
        return ActionRule(
            {s: (c.subs(None, t, eta) if isinstance(c, IndexPoly) else c) for s, c in self._entries.items()}
        )

    def __eq__(self, other):
        if isinstance(other, ActionRule):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self == ActionRule(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def render(self) -> Dict[int, str]:
        return {s: render_scalar(c) for s, c in self._entries.items()}

    def __repr__(self):
        return "ActionRule({" + ", ".join(f"{s:+d}: {render_scalar(c)!r}" for s, c in self._entries.items()) + "})"


class Element:
    """Finite linear combination of basis vectors of one module."""

    __slots__ = ("terms", "tag")

    def __init__(self, terms: Mapping[int, object] | None = None, tag: str = ""):
        clean = {}
        for k, c in (terms or {}).items():
            c = as_scalar(c)
            if c:
                clean[int(k)] = c
        self.terms: Dict[int, Scalar] = dict(sorted(clean.items()))
        self.tag = tag

    @classmethod
    def from_clean(cls, terms: Dict[int, Scalar], tag: str = "") -> "Element":
        """Build from already normalized nonzero scalars, skipping validation."""
        e = cls.__new__(cls)
        e.terms = dict(sorted(terms.items()))
        e.tag = tag
        return e

    @classmethod
    def basis(cls, k: int, tag: str = "") -> "Element":
        return cls({k: 1}, tag)

    def support(self) -> List[int]:
        return list(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, k):
        return self.terms.get(k, Fraction(0))

    def _combine(self, other: "Element", sign: int) -> "Element":
        if self.tag and other.tag and self.tag != other.tag:
            raise ChartMismatch(f"elements of different modules: {self.tag} vs {other.tag}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + sign * c
        return Element(out, self.tag or other.tag)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Element({k: -c for k, c in self.terms.items()}, self.tag)

    def __mul__(self, c):
        c = as_scalar(c)
        return Element({k: v * c for k, v in self.terms.items()}, self.tag)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def render(self, label: str = "b") -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms.items():
            text = render_scalar(c)
            if isinstance(c, IndexPoly):
                text = f"({text})"
            parts.append(f"{text}*{label}_{k}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Element({self.render()})"


def _apply_rule(rule: ActionRule, terms: Mapping[int, Scalar], domain: IndexDomain) -> Dict[int, Scalar]:
    out: Dict[int, Scalar] = {}
    for k, c in terms.items():
        for j, v in rule.at(k):
            if j in domain:
                out[j] = out.get(j, 0) + c * v
    return {j: as_scalar(v) for j, v in out.items() if v}


@dataclass(frozen=True)
class BasisModule:
    """A local module ``M(U)`` over ``D(U)`` for one chart ``U``.

    ``coord_action`` and ``del_action`` describe multiplication by the chart
    coordinate and the chart derivative.  Indices outside ``domain`` do not
    exist: a rule pointing there contributes zero.  For the delta modules that
    is exactly the relation ``x * delta = 0`` (listed in ``boundary``).
    """

    family: Family
    chart: Chart
    t: object
    eta: object
    domain: IndexDomain
    coord_action: ActionRule
    del_action: ActionRule
    basis_label: str
    boundary: Tuple[str, ...] = ()
    singular: bool = False
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def tag(self) -> str:
        tag = self._cache.get("tag")
        if tag is None:
            tag = self._cache["tag"] = (
                f"{self.family.value}/{self.chart.value}/t={render_scalar(self.t)}/eta={render_scalar(self.eta)}"
            )
        return tag

    def basis(self, k: int) -> Element:
        if k not in self.domain:
            raise IndexError(f"{self.basis_label}_{k} is not a basis vector of {self.tag}")
        return Element.basis(k, self.tag)

    def element(self, terms: Mapping[int, object]) -> Element:
        bad = [k for k in terms if k not in self.domain]
        if bad:
            raise IndexError(f"indices {bad} outside {self.domain.kind}")
        return Element(terms, self.tag)

    def coord(self, e: Element) -> Element:
        return Element.from_clean(_apply_rule(self.coord_action, e.terms, self.domain), self.tag)

    def deriv(self, e: Element) -> Element:
        return Element.from_clean(_apply_rule(self.del_action, e.terms, self.domain), self.tag)

    @property
    def coord_invertible(self) -> bool:
        entries = self.coord_action.entries
        return (
            self.domain.lo is None
            and self.domain.hi is None
            and len(entries) == 1
            and all(isinstance(c, Fraction) for c in entries.values())
        )

    def coord_inverse(self, e: Element) -> Element:
        if not self.coord_invertible:
            raise ValueError(f"the coordinate does not act invertibly on {self.tag}")
        (shift, c), = self.coord_action.entries.items()
        return Element({k - shift: v / c for k, v in e.terms.items()}, self.tag)

    def leaks(self, window: int) -> List[Tuple[str, int, int]]:
        """Rule terms that would land outside the domain with a nonzero coefficient.

        Relations recorded in ``boundary`` are excluded.
        """
        out = []
        for name, rule in (("coord", self.coord_action), ("del", self.del_action)):
            for k in self.domain.window(window):
                for j, _ in rule.at(k):
                    if j not in self.domain and f"{name}@{k}" not in self.boundary:
                        out.append((name, k, j))
        return out

    def window(self, n: int) -> List[int]:
        return self.domain.window(n)


# rule tables: (label, domain, coordinate rule, derivative rule, boundary)
# u_k = (-1)^k w^k ; w_k = (-1)^k z^(t-1-k) ; n_k = (-1)^k w^k = (-1)^k z^-k ;
# m_k, d_k = (-1)^k/k! d^k delta ; p_k = z^k p_0 with p_0 ~ z^(1/2)
_RULES = {
    (Family.FINITE, Chart.INF): ("u", "nonneg", {1: "-1"}, {-1: "-k"}, ()),
    (Family.FINITE, Chart.ZERO): ("w", "upto_t", {-1: "-1"}, {1: "k - t + 1"}, ()),
    (Family.VERMA, Chart.ZERO): ("m", "nonneg", {-1: "1"}, {1: "-k - 1"}, ("coord@0",)),
    (Family.DUAL_VERMA, Chart.INF): ("n", "nonneg", {1: "-1"}, {-1: "-k"}, ()),
    (Family.DUAL_VERMA, Chart.ZERO): ("n", "all", {-1: "-1"}, {1: "k"}, ()),
    (Family.DELTA_INF, Chart.INF): ("d", "nonneg", {-1: "1"}, {1: "-k - 1"}, ("coord@0",)),
    (Family.PRINCIPAL_EVEN, Chart.INF): ("n", "all", {1: "-1"}, {-1: "-k"}, ()),
    (Family.PRINCIPAL_EVEN, Chart.ZERO): ("n", "all", {-1: "-1"}, {1: "k"}, ()),
    (Family.PRINCIPAL_ODD, Chart.ZERO): ("p", "all", {1: "1"}, {-1: "k + 1/2"}, ()),
    (Family.PRINCIPAL_ODD, Chart.INF): ("p", "all", {-1: "1"}, {1: "-k - 1/2"}, ()),
    (Family.WHITTAKER, Chart.INF): ("n", "nonneg", {1: "-1"}, {-1: "-k", 0: "-eta"}, ()),
    (Family.WHITTAKER, Chart.ZERO): ("n", "all", {-1: "-1"}, {1: "k", 2: "eta"}, ()),
}

_NO_TWIST_MESSAGE = (
    "for eta != 0 there is no standard eta-twisted Harish-Chandra sheaf on a closed orbit: "
    "E is nilpotent on the one-point orbit and must act by 0"
)


def _check_t(t, singular: bool) -> Scalar:
    t = as_scalar(t)
    if isinstance(t, IndexPoly):
        return t
    if t.denominator != 1:
        raise UnsupportedModule(f"t = {t}: modules need integral t (regular dominant integral required)")
    floor = 0 if singular else 1
    if t < floor:
        raise UnsupportedModule(f"t = {t}: regular dominant integral required (t >= 1)")
    return t


def make_local(family, chart, t, eta=0, singular: bool = False) -> BasisModule:
    """The local module of ``family`` on ``chart`` for twist ``t``.

    ``t`` and ``eta`` may be symbolic (``T``, ``ETA``) for closed-form tables.
    ``singular=True`` admits ``t = 0``.
    """
    family = Family.parse(family)
    chart = chart if isinstance(chart, Chart) else Chart.parse(chart)
    t = _check_t(t, singular)
    eta = as_scalar(eta)
    if family in (Family.VERMA, Family.DELTA_INF):
        if eta != 0:
            raise UnsupportedModule(_NO_TWIST_MESSAGE)
    elif family is not Family.WHITTAKER:
        eta = Fraction(0)
    key = (family, chart)
    if key not in _RULES:
        where = "the point 0, inside the z chart" if family is Family.VERMA else "the point infinity, inside the w chart"
        raise UnsupportedModule(
            f"{family.value} has no {chart.value} chart realization: its support is {where}"
        )
    label, dom, coord, deriv, boundary = _RULES[key]
    if dom == "nonneg":
        domain = NON_NEGATIVE
    elif dom == "all":
        domain = ALL_INTEGERS
    else:
        domain = IndexDomain(None, int(t) - 1) if isinstance(t, Fraction) else ALL_INTEGERS
    coord_rule = ActionRule({s: IndexPoly.parse(c) for s, c in coord.items()}).subs(t, eta)
    del_rule = ActionRule({s: IndexPoly.parse(c) for s, c in deriv.items()}).subs(t, eta)
    return BasisModule(family, chart, t, eta, domain, coord_rule, del_rule, label, boundary, singular)


def act_weyl(m: BasisModule, op: WeylOp, e: Element) -> Element:
    """Apply a chart operator ``sum p_i d^i`` to an element through the module rules."""
    if op.chart is not m.chart:
        raise ChartMismatch(f"operator on {op.chart.name} applied to module on {m.chart.name}")
    key = ("op", op)
    if key not in m._cache:
        m._cache[key] = op.subs(
            t=None if isinstance(m.t, IndexPoly) else m.t, eta=None if isinstance(m.eta, IndexPoly) else m.eta
        )
    op = m._cache[key]
    total = Element({}, m.tag)
    for order, p in op.coeffs.items():
        v = e
        for _ in range(order):
            v = m.deriv(v)
        if not v:
            continue
        for exp, c in p.items():
            if isinstance(c, IndexPoly) and "k" in c.free_symbols():
                raise ValueError("operator coefficients may not involve the index k")
            w = v
            if exp >= 0:
                for _ in range(exp):
                    w = m.coord(w)
            else:
                for _ in range(-exp):
                    w = m.coord_inverse(w)
            total = total + w * c
    return total


def act_lie(m: BasisModule, letter: str, e: Element) -> Element:
    """Act by E, F or H using the derived operator of the module's chart."""
    return act_weyl(m, chart_operator(letter, m.chart, m.t), e)


def interpolate_in_k(points: List[Tuple[int, Scalar]]) -> Scalar:
    """Lagrange interpolation in k; values may be symbolic in t, eta."""
    total: object = Fraction(0)
    for i, (ki, yi) in enumerate(points):
        basis: object = IndexPoly.const(1)
        for j, (kj, _) in enumerate(points):
            if j != i:
                basis = basis * (K - kj) / Fraction(ki - kj)
        total = total + basis * yi
    return as_scalar(total)


def rule_from_samples(m: BasisModule, letter: str) -> ActionRule:
    """Closed-form action of ``letter`` on a generic basis vector.

    Three sample indices fix a polynomial of degree <= 2 in k per shift; a
    fourth certifies it.
    """
    ks = m.domain.samples()
    images = {k: act_lie(m, letter, m.basis(k)) for k in ks}
    shifts = sorted({j - k for k, img in images.items() for j in img.terms})
    entries = {}
    for s in shifts:
        pts = [(k, images[k][k + s]) for k in ks]
        poly = interpolate_in_k(pts[:3])
        check = poly.subs(k=pts[3][0]) if isinstance(poly, IndexPoly) else poly
        if check != pts[3][1]:
            raise ArithmeticError(f"{letter} action on {m.tag} is not quadratic in k (shift {s})")
        entries[s] = poly
    return ActionRule(entries)


def action_table(family, chart, letter: str, t=T, eta=ETA, singular: bool = False) -> ActionRule:
    """Closed-form ActionRule for E, F or H; symbolic in t and eta by default."""
    family = Family.parse(family)
    if family is not Family.WHITTAKER:
        eta = 0
    m = make_local(family, chart, t, eta, singular=singular)
    key = ("table", letter)
    if key not in m._cache:
        m._cache[key] = rule_from_samples(m, letter)
    return m._cache[key]
