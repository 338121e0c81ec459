"""Structural analysis of the global modules over a finite index window.

Everything is exact: vectors are solved for with rational Gaussian
elimination, and infinite modules are examined on a window of basis indices
with explicit bookkeeping of where the window is left.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..exact import render_scalar
from ..tdo import CASIMIR, expected_casimir
from .linalg import Echelon, nullspace
from .modules import Element, Family
from .sl2 import Sl2Module, global_module

__all__ = [
    "NotAWeightBasis",
    "WeightVector",
    "SubmoduleReport",
    "Certificate",
    "QuotientPiece",
    "CompositionReport",
    "ParityReport",
    "weights",
    "casimir_scalar",
    "highest_weight_vectors",
    "lowest_weight_vectors",
    "h_eigenvectors",
    "whittaker_vectors",
    "submodule_generated",
    "irreducibility_certificate",
    "composition_report",
    "k_weight_parity",
    "borel_weil_dim",
    "module_name",
]

DEFAULT_WINDOW = 60


@dataclass(frozen=True)
class NotAWeightBasis:
    """H is not diagonal on the basis: it moves index k by ``shift``."""

    shift: int

    def __bool__(self):
        return False


@dataclass(frozen=True)
class WeightVector:
    vector: Element
    weight: Fraction


def weights(M: Sl2Module, window: int = DEFAULT_WINDOW):
    """``[(k, weight)]`` on the window, or NotAWeightBasis if H is not diagonal."""
    shifts = M.actH.shifts()
    off = [s for s in shifts if s != 0]
    if off:
        return NotAWeightBasis(off[0])
    out = []
    for k in M.window(window):
        terms = dict(M.actH.at(k))
        out.append((k, terms.get(k, Fraction(0))))
    return out


def casimir_scalar(M: Sl2Module, window: int = DEFAULT_WINDOW) -> Fraction:
    """The scalar by which H^2 + 2EF + 2FE acts, checked on every window vector."""
    value = None
    for k in M.window(window):
        v = M.basis(k)
        w = M.act_word(CASIMIR, v)
        c = w[k]
        if w != v * c:
            raise ArithmeticError(f"Casimir is not scalar on {M.label}_{k}: {w.render(M.label)}")
        if value is None:
            value = c
        elif c != value:
            raise ArithmeticError(f"Casimir takes values {value} and {c}")
    expected = expected_casimir(M.t)
    if value is not None and value != expected:
        raise ArithmeticError(f"Casimir {value} differs from (t-1)^2 + 2(t-1) = {expected}")
    return value


def _rows(M: Sl2Module, letter: str, c: Fraction, columns: Sequence[int]) -> List[Dict]:
    """Rows of the matrix of ``X - c`` restricted to the given basis columns."""
    rows: Dict[int, Dict[int, Fraction]] = {}
    for k in columns:
        for j, x in M.rule(letter).at(k):
            if j in M.domain:
                rows.setdefault(j, {})[k] = rows.get(j, {}).get(k, 0) + x
        if c:
            rows.setdefault(k, {})[k] = rows.get(k, {}).get(k, 0) - c
    return [{k: v for k, v in r.items() if v} for r in rows.values()]


def _eigen_columns(M: Sl2Module, columns: Sequence[int]) -> List[Tuple[Fraction, List[int]]]:
    """Candidate H-eigenvalues with the columns an eigenvector may use.

    H must be triangular on the basis.  The extreme index of an eigenvector
    (lowest when H only raises, highest when it only lowers) carries the
    diagonal value, which bounds the support; a diagonal H pins it exactly.
    """
    shifts = M.actH.shifts()
    if shifts and min(shifts) < 0 < max(shifts):
        raise ValueError("H is not triangular on this basis")
    diag = {k: dict(M.actH.at(k)).get(k, Fraction(0)) for k in columns}
    out: Dict[Fraction, List[int]] = {}
    for k in columns:
        out.setdefault(diag[k], []).append(k)
    if all(s == 0 for s in shifts):
        return list(out.items())
    raising = max(shifts) > 0
    result = []
    for c, ks in out.items():
        if raising:
            lo = min(ks)
            result.append((c, [k for k in columns if k >= lo]))
        else:
            hi = max(ks)
            result.append((c, [k for k in columns if k <= hi]))
    return result


def _joint_kernel(M: Sl2Module, conditions, columns) -> List[Element]:
    rows = []
    for letter, c in conditions:
        rows.extend(_rows(M, letter, c, columns))
    return [Element(v, M.tag) for v in nullspace(rows, columns)]


def h_eigenvectors(M: Sl2Module, window: int = DEFAULT_WINDOW) -> List[WeightVector]:
    """All H-eigenvectors supported on the window (a basis of each eigenspace)."""
    out = []
    for c, cols in _eigen_columns(M, M.window(window)):
        out.extend(WeightVector(v, c) for v in _joint_kernel(M, [("H", c)], cols))
    return out


def _extremal(M: Sl2Module, letter: str, window: int) -> List[WeightVector]:
    out = []
    for c, cols in _eigen_columns(M, M.window(window)):
        out.extend(WeightVector(v, c) for v in _joint_kernel(M, [(letter, 0), ("H", c)], cols))
    return out


def highest_weight_vectors(M: Sl2Module, window: int = DEFAULT_WINDOW) -> List[WeightVector]:
    """Solutions of E v = 0, H v = c v with v supported on the window."""
    return _extremal(M, "E", window)


def lowest_weight_vectors(M: Sl2Module, window: int = DEFAULT_WINDOW) -> List[WeightVector]:
    """Solutions of F v = 0, H v = c v with v supported on the window."""
    return _extremal(M, "F", window)


def whittaker_vectors(M: Sl2Module, eta, window: int = DEFAULT_WINDOW) -> List[Element]:
    """Solutions of (E - eta) v = 0 with v supported on the window."""
    return _joint_kernel(M, [("E", Fraction(eta))], M.window(window))


@dataclass
class SubmoduleReport:
    basis: List[Element]
    closed: bool
    exits: List[Tuple[str, int]]
    window: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def spans_window(self) -> bool:
        return self.dim == len(self.window)

    def coordinate_indices(self) -> Optional[List[int]]:
        """Indices if the subspace is spanned by basis vectors, else None."""
        idx = []
        for v in self.basis:
            if len(v.terms) != 1:
                return None
            idx.extend(v.terms)
        return sorted(idx)

    def contains(self, v: Element) -> bool:
        ech = Echelon()
        for b in self.basis:
            ech.add(b.terms)
        return ech.contains(v.terms)


def _leaves(M: Sl2Module, letter: str, v: Element, inside) -> bool:
    return any(j not in inside for j in M.act(letter, v).terms)


def submodule_generated(M: Sl2Module, v: Element, window: int = DEFAULT_WINDOW) -> SubmoduleReport:
    """Closure of span{v} under E, F, H inside the window.

    An image that leaves the window cannot be followed; the source vector is
    recorded in ``exits`` and the report is marked open.
    """
    cols = tuple(M.window(window))
    inside = set(cols)
    if not v:
        raise ValueError("generator must be nonzero")
    if any(k not in inside for k in v.terms):
        raise ValueError("generator must be supported in the window")
    ech = Echelon(pivot_order=max)
    ech.add(v.terms)
    queue = deque([v])
    exits: List[Tuple[str, int]] = []
    full = ech.rank == len(cols)
    while queue and not full:
        u = queue.popleft()
        for letter in "EFH":
            img = M.act(letter, u)
            if not img:
                continue
            if any(j not in inside for j in img.terms):
                exits.append((letter, max(u.terms)))
                continue
            if ech.add(img.terms) is not None:
                queue.append(img)
                if ech.rank == len(cols):
                    full = True
                    break
    if full:
        exits = [(X, k) for k in cols for X in "EFH" if _leaves(M, X, M.basis(k), inside)]
    basis = [Element(b, M.tag) for b in ech.basis()]
    return SubmoduleReport(basis, not exits, exits, cols)


@dataclass
class Certificate:
    kind: str  # "Irreducible", "Reducible" or "Unknown"
    strategy: Optional[str] = None
    witness: Optional[List[int] | List[Element]] = None
    detail: str = ""
    window: int = 0
    window_stable: Optional[bool] = None

    @property
    def irreducible(self) -> bool:
        return self.kind == "Irreducible"

    def key(self):
        w = self.witness
        if w and isinstance(w[0], Element):
            w = [tuple(e.terms.items()) for e in w]
        return (self.kind, self.strategy, tuple(w) if w else None)

    def describe(self) -> str:
        text = self.kind
        if self.strategy:
            text += f"({self.strategy})"
        if self.kind == "Reducible" and self.witness is not None:
            text += f": invariant span of indices {self.witness}"
        if self.detail:
            text += f" [{self.detail}]"
        return text


def _arrows(M: Sl2Module, cols) -> Tuple[Dict[int, List[int]], set]:
    """E/F arrows between window indices, and the indices with an arrow leaving the window."""
    inside = set(cols)
    out: Dict[int, List[int]] = {k: [] for k in cols}
    leaving = set()
    for k in cols:
        for letter in "EF":
            for j, _ in M.rule(letter).at(k):
                if j not in M.domain:
                    continue
                if j in inside:
                    out[k].append(j)
                else:
                    leaving.add(k)
    return out, leaving


def _reach(graph: Dict[int, List[int]], start: int) -> set:
    seen, stack = {start}, [start]
    while stack:
        for j in graph[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def _certificate(M: Sl2Module, window: int) -> Certificate:
    cols = M.window(window)
    inside = set(cols)
    ws = weights(M, window)
    if not isinstance(ws, NotAWeightBasis):
        values = [w for _, w in ws]
        if len(set(values)) == len(values):
            # multiplicity one: submodules are spanned by basis vectors, so
            # irreducibility is strong connectivity of the E/F arrow graph
            graph, leaving = _arrows(M, cols)
            backward: Dict[int, List[int]] = {k: [] for k in cols}
            for k, js in graph.items():
                for j in js:
                    backward[j].append(k)
            root = cols[0]
            if _reach(graph, root) == inside and _reach(backward, root) == inside:
                return Certificate("Irreducible", "a", None, "every basis vector generates the window", window)
            for k in sorted(cols, key=lambda i: (abs(i), i)):
                reach = _reach(graph, k)
                if reach != inside and not (reach & leaving):
                    return Certificate("Reducible", "a", sorted(reach), "closed proper span", window)
            return Certificate("Unknown", None, None, "arrow graph not strongly connected on the window", window)
    e_rule, f_rule = M.actE.entries, M.actF.entries
    eta = e_rule.get(0)
    if (
        isinstance(ws, NotAWeightBasis)
        and M.domain.lo is not None
        and set(e_rule) == {-1, 0}
        and isinstance(eta, Fraction)
        and eta != 0
        and eta == M.eta
    ):
        lowering = all(dict(M.actE.at(k)).get(k - 1) for k in cols if k - 1 in M.domain)
        raising = all(dict(M.actF.at(k)).get(k + 2) for k in cols)
        if lowering and raising and set(f_rule) <= {1, 2}:
            return Certificate(
                "Irreducible",
                "b",
                None,
                "E - eta strictly lowers to the first basis vector, which generates upward",
                window,
            )
    return Certificate("Unknown", None, None, "no certificate strategy applies", window)


def irreducibility_certificate(M: Sl2Module, window: int = DEFAULT_WINDOW, check_stability: bool = True) -> Certificate:
    """Certify irreducibility, exhibit an invariant proper subspace, or give up.

    With ``check_stability`` the computation is repeated at twice the window
    and ``window_stable`` records whether the verdict agrees.
    """
    cert = _certificate(M, window)
    if check_stability:
        cert.window_stable = _certificate(M, 2 * window).key() == cert.key()
    return cert


@dataclass
class QuotientPiece:
    generator: int
    kind: str  # "highest" or "lowest"
    weight: Fraction
    weights: List[Fraction]


@dataclass
class CompositionReport:
    family: Family
    t: Fraction
    sub_indices: List[int]
    sub_weights: List[Fraction]
    sub_closed: bool
    sub_irreducible: bool
    pieces: List[QuotientPiece] = field(default_factory=list)

    @property
    def sub_dim(self) -> int:
        return len(self.sub_indices)

    def describe(self) -> str:
        lines = [
            f"submodule: span of indices {self.sub_indices} (dim {self.sub_dim}), weights "
            + ", ".join(render_scalar(w) for w in self.sub_weights)
        ]
        for p in self.pieces:
            lines.append(f"quotient piece generated by index {p.generator}: {p.kind} weight {render_scalar(p.weight)}")
        return "\n".join(lines)


def _quotient_components(M: Sl2Module, cols, sub) -> List[List[int]]:
    rest = [k for k in cols if k not in sub]
    rest_set = set(rest)
    parent = {k: k for k in rest}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for k in rest:
        for letter in "EF":
            for j, _ in M.rule(letter).at(k):
                if j in rest_set:
                    parent[find(j)] = find(k)
    groups: Dict[int, List[int]] = {}
    for k in rest:
        groups.setdefault(find(k), []).append(k)
    return sorted(groups.values())


def composition_report(family, t, window: int = DEFAULT_WINDOW) -> CompositionReport:
    """The finite-dimensional submodule and the extremal structure of the quotient."""
    family = Family.parse(family)
    if family not in (Family.DUAL_VERMA, Family.PRINCIPAL_EVEN):
        raise ValueError(f"composition_report applies to DualVermaOpen and PrincipalEven, not {family.value}")
    M = global_module(family, t)
    n = int(M.t)
    cols = M.window(window)
    hw = dict(weights(M, window))
    sub = submodule_generated(M, M.basis(0), window)
    idx = sub.coordinate_indices() or []
    sub_module = global_module(Family.FINITE, n)
    sub_cert = _certificate(sub_module, n)
    report = CompositionReport(
        family,
        M.t,
        idx,
        [hw[k] for k in idx],
        sub.closed,
        sub_cert.irreducible and idx == list(range(n)),
    )
    subset = set(idx)
    for comp in _quotient_components(M, cols, subset):
        comp_set = set(comp)
        for k in comp:
            for letter, kind in (("E", "highest"), ("F", "lowest")):
                img = M.act(letter, M.basis(k))
                if all(j in subset for j in img.terms):
                    # the image vanishes in the quotient
                    report.pieces.append(QuotientPiece(k, kind, hw[k], sorted(hw[j] for j in comp_set)))
    report.pieces.sort(key=lambda p: (p.kind, p.generator))
    return report


@dataclass
class ParityReport:
    family: Family
    t: Fraction
    parities: frozenset
    connection_parities: frozenset

    @property
    def single(self) -> bool:
        return len(self.parities) == 1

    @property
    def parity(self) -> str:
        if not self.single:
            return "mixed"
        return "even" if next(iter(self.parities)) == 0 else "odd"

    def describe(self) -> str:
        return f"{self.family.value} t={render_scalar(self.t)}: H weights all {self.parity}"


def k_weight_parity(family, t, window: int = 20) -> ParityReport:
    """Parity of the H-weights, which decides how the diagonal torus of K acts.

    ``connection_parities`` records the parity of ``weight - (t-1)``: the
    exponent carried by the connection itself once the trivialization twist
    is removed (0 for functions on the punctured line, 1 for the half-twist).
    """
    family = Family.parse(family)
    if family not in (Family.PRINCIPAL_EVEN, Family.PRINCIPAL_ODD):
        raise ValueError(f"k_weight_parity applies to the principal series families, not {family.value}")
    M = global_module(family, t)
    ws = weights(M, window)
    par = frozenset(int(w) % 2 for _, w in ws)
    conn = frozenset(int(w - (M.t - 1)) % 2 for _, w in ws)
    return ParityReport(family, M.t, par, conn)


def borel_weil_dim(n: int, slack: int = 2) -> int:
    """Dimension of the space of pairs (p, q) of polynomials with p(z) = z^n q(1/z).

    Both polynomials range over degree <= max(n, 0) + slack, which is more
    than enough room; the answer is the nullity of the linear constraints.
    """
    n = int(n)
    D = max(n, 0) + slack
    cols = [("p", i) for i in range(D + 1)] + [("q", j) for j in range(D + 1)]
    rows: Dict[int, Dict] = {}
    for i in range(D + 1):
        rows.setdefault(i, {})[("p", i)] = Fraction(1)
    for j in range(D + 1):
        rows.setdefault(n - j, {})[("q", j)] = Fraction(-1)
    return len(nullspace(rows.values(), cols))


def module_name(family, t, eta=0) -> str:
    """Name of the global module in the standard notation."""
    family = Family.parse(family)
    t = Fraction(t)
    n = render_scalar(t - 1)
    if family is Family.FINITE:
        return f"L({n})"
    if family is Family.VERMA:
        return f"M({render_scalar(-t - 1)})"
    if family is Family.DUAL_VERMA:
        return f"I({n})"
    if family is Family.DELTA_INF:
        return f"D_-({render_scalar(t + 1)})"
    if family is Family.PRINCIPAL_EVEN:
        return f"P_+({n})"
    if family is Family.PRINCIPAL_ODD:
        return f"P_-({n})"
    if Fraction(eta) == 0:
        return f"I({n})"
    return f"Y({render_scalar(Fraction(eta))},{render_scalar(t)})"
