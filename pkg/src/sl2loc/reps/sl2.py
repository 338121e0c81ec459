"""Global sections as sl(2)-modules and the identification of chart realizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import List, Optional, Tuple

from ..exact import Chart, Laurent, Scalar, as_scalar, render_scalar
from ..tdo import LieWord
from .modules import (
    ActionRule,
    BasisModule,
    Element,
    Family,
    IndexDomain,
    act_lie,
    make_local,
    rule_from_samples,
)

__all__ = ["Sl2Module", "global_module", "overlap_check", "OverlapReport", "realization_chart", "apply_rule"]

_REALIZATION = {
    Family.FINITE: Chart.INF,
    Family.VERMA: Chart.ZERO,
    Family.DUAL_VERMA: Chart.INF,
    Family.DELTA_INF: Chart.INF,
    Family.PRINCIPAL_EVEN: Chart.INF,
    Family.PRINCIPAL_ODD: Chart.INF,
    Family.WHITTAKER: Chart.INF,
}


def realization_chart(family) -> Chart:
    return _REALIZATION[Family.parse(family)]


def _intertwiner_shift(family: Family, t: Fraction) -> Optional[int]:
    """Index shift taking the chart-infinity basis to the chart-zero basis."""
    if family is Family.FINITE:
        return 0
    if family is Family.PRINCIPAL_ODD:
        return int(t) - 1
    if family in (Family.DUAL_VERMA, Family.PRINCIPAL_EVEN, Family.WHITTAKER):
        return -(int(t) - 1)
    return None


def apply_rule(rule: ActionRule, v: Element, domain: IndexDomain) -> Element:
    out = {}
    for k, c in v.terms.items():
        for j, x in rule.at(k):
            if j in domain:
                out[j] = out.get(j, 0) + c * x
    return Element.from_clean({j: c for j, c in out.items() if c}, v.tag)


@dataclass(frozen=True)
class Sl2Module:
    """A g-module with an integer-indexed basis and closed-form E, F, H rules."""

    family: Family
    t: Fraction
    eta: Fraction
    chart: Chart
    domain: IndexDomain
    actE: ActionRule
    actF: ActionRule
    actH: ActionRule
    intertwiner_shift: Optional[int]
    label: str
    local: BasisModule = field(compare=False, repr=False)

    @cached_property
    def tag(self) -> str:
        return f"global/{self.family.value}/t={render_scalar(self.t)}/eta={render_scalar(self.eta)}"

    def rule(self, letter: str) -> ActionRule:
        try:
            return {"E": self.actE, "F": self.actF, "H": self.actH}[letter]
        except KeyError:
            raise ValueError(f"unknown generator {letter!r}") from None

    def basis(self, k: int) -> Element:
        if k not in self.domain:
            raise IndexError(f"{self.label}_{k} is not a basis vector")
        return Element.basis(k, self.tag)

    def element(self, terms) -> Element:
        bad = [k for k in terms if k not in self.domain]
        if bad:
            raise IndexError(f"indices {bad} outside {self.domain.kind}")
        return Element(terms, self.tag)

    def window(self, n: int) -> List[int]:
        return self.domain.window(n)

    def act(self, letter: str, v: Element) -> Element:
        return apply_rule(self.rule(letter), v, self.domain)

    def act_word(self, word: LieWord, v: Element) -> Element:
        total = Element({}, self.tag)
        for letters, c in word.items():
            w = v
            for letter in reversed(letters):
                w = self.act(letter, w)
            total = total + w * c
        return total

    @property
    def dimension(self) -> Optional[int]:
        d = self.domain
        return d.hi - d.lo + 1 if d.finite else None


@lru_cache(maxsize=None)
def _global_module(family: Family, t: Fraction, eta: Fraction, singular: bool) -> Sl2Module:
    chart = _REALIZATION[family]
    local = make_local(family, chart, t, eta, singular=singular)
    rules = {X: rule_from_samples(local, X) for X in "EFH"}
    domain = IndexDomain(0, int(t) - 1) if family is Family.FINITE else local.domain
    return Sl2Module(
        family,
        local.t,
        local.eta,
        chart,
        domain,
        rules["E"],
        rules["F"],
        rules["H"],
        _intertwiner_shift(family, local.t),
        local.basis_label,
        local,
    )


def global_module(family, t, eta=0, singular: bool = False) -> Sl2Module:
    """The g-module of global sections, realized in its standard chart."""
    return _global_module(Family.parse(family), as_scalar(t), as_scalar(eta), singular)


@dataclass(frozen=True)
class OverlapReport:
    ok: bool
    family: Family
    t: Fraction
    shift: int
    checked: int
    counterexample: Optional[Tuple[str, int, Element, Element]] = None

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        head = f"{self.family.value} t={render_scalar(self.t)}: b_k (w chart) -> b_{{k{self.shift:+d}}} (z chart)"
        if self.ok:
            return f"{head} intertwines E, F, H on {self.checked} basis vectors"
        letter, k, lhs, rhs = self.counterexample
        return f"{head} fails for {letter} on b_{k}: {lhs.render()} != {rhs.render()}"


def _shifted(e: Element, s: int, tag: str) -> Element:
    return Element({k + s: c for k, c in e.terms.items()}, tag)


def overlap_check(family, t, eta=0, window: int = 20) -> OverlapReport:
    """Verify that shifting indices identifies the two chart realizations.

    For every basis vector of the chart-infinity module in the window and each
    of E, F, H, compare "act then shift" with "shift then act".  FiniteO also
    checks the function-level pairing ``p(z) = z^(t-1) q(1/z)``.
    """
    family = Family.parse(family)
    if family in (Family.VERMA, Family.DELTA_INF):
        raise ValueError(f"{family.value} is supported in one chart only; there is no overlap to check")
    g = global_module(family, t, eta)
    shift = g.intertwiner_shift
    m_inf = make_local(family, Chart.INF, g.t, g.eta)
    m_zero = make_local(family, Chart.ZERO, g.t, g.eta)
    indices = g.window(window)
    checked = 0
    for k in indices:
        src = m_inf.basis(k)
        dst = m_zero.basis(k + shift)
        for letter in "EFH":
            lhs = _shifted(act_lie(m_inf, letter, src), shift, m_zero.tag)
            rhs = act_lie(m_zero, letter, dst)
            if lhs != rhs:
                return OverlapReport(False, family, g.t, shift, checked, (letter, k, lhs, rhs))
        checked += 1
    if family is Family.FINITE:
        n = int(g.t) - 1
        for k in indices:
            q = Laurent.monomial(Chart.INF, k, (-1) ** k)  # u_k as a polynomial in w
            p = Laurent.monomial(Chart.ZERO, n - k, (-1) ** k)  # w_k as a polynomial in z
            lifted = Laurent(Chart.ZERO, {-e: c for e, c in q.items()}) * Laurent.monomial(Chart.ZERO, n)
            if lifted != p or p.min_exponent() < 0:
                return OverlapReport(False, family, g.t, shift, checked, ("pairing", k, Element({k: 1}), Element({k: 1})))
    return OverlapReport(True, family, g.t, shift, checked)
