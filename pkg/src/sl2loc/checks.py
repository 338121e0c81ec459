"""The full verification suite behind ``sl2loc check-all``.

Each check returns a ``CheckResult``; a failing result carries the first
counterexample found.  Checks are grouped under stable labels so that a
failure names the identity or table that broke.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence

from .exact import ETA, T, Chart, IndexPoly, as_scalar, render_scalar
from .tdo import (
    E as E_MAT,
    F as F_MAT,
    H as H_MAT,
    beta,
    casimir_scalar_identity,
    derive_chart_operator,
    expected_casimir,
    glue_check,
)
from .weyl import WeylOp
from .reps.analysis import (
    NotAWeightBasis,
    borel_weil_dim,
    casimir_scalar,
    composition_report,
    h_eigenvectors,
    highest_weight_vectors,
    irreducibility_certificate,
    k_weight_parity,
    lowest_weight_vectors,
    submodule_generated,
    weights,
    whittaker_vectors,
)
from .reps.golden import golden_tables, reference_table, table_label
from .reps.modules import Element, Family, action_table, make_local
from .reps.sl2 import apply_rule, global_module, overlap_check

DEFAULT_TS = (1, 2, 3, 4, 5, 6)
DEFAULT_ETAS = (Fraction(0), Fraction(1), Fraction(-2), Fraction(3, 2))

REFERENCE_OPERATORS = {
    ("E", Chart.ZERO): "z^2*d - (t-1)*z",
    ("F", Chart.ZERO): "-d",
    ("H", Chart.ZERO): "2*z*d - (t-1)",
    ("E", Chart.INF): "-d",
    ("F", Chart.INF): "w^2*d - (t-1)*w",
    ("H", Chart.INF): "-2*w*d + (t-1)",
}
_MATRICES = {"E": E_MAT, "F": F_MAT, "H": H_MAT}


@dataclass
class CheckResult:
    label: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.label}" + (f": {self.detail}" if self.detail else "")


def _etas_for(family: Family, etas) -> Sequence[Fraction]:
    return etas if family is Family.WHITTAKER else (Fraction(0),)


def cells(ts=DEFAULT_TS, etas=DEFAULT_ETAS):
    for family in Family:
        for t in ts:
            for eta in _etas_for(family, etas):
                yield family, Fraction(t), Fraction(eta)


# operator level ---------------------------------------------------------


def check_chart_operators() -> CheckResult:
    for (letter, chart), text in REFERENCE_OPERATORS.items():
        got = derive_chart_operator(_MATRICES[letter], chart, T)
        want = WeylOp.parse(text, chart)
        if got != want:
            return CheckResult("operators.derived", False, f"{letter} on {chart.value}: {got} != {want}")
    return CheckResult("operators.derived", True, "six chart operators match the reference formulas")


def check_gluing(ts=DEFAULT_TS) -> CheckResult:
    for t in list(ts) + [T]:
        for letter in "EFH":
            rep = glue_check(beta(letter, t))
            if not rep:
                return CheckResult("operators.gluing", False, f"{letter} at t={render_scalar(as_scalar(t))}: {rep.describe()}")
    return CheckResult("operators.gluing", True, "psi(rewrite(X_inf)) = X_0 for E, F, H")


def check_operator_relations() -> CheckResult:
    E, F, H = (beta(x, T) for x in "EFH")
    for name, lhs, rhs in (
        ("[E,F]=H", E.commutator(F), H),
        ("[H,E]=2E", H.commutator(E), 2 * E),
        ("[H,F]=-2F", H.commutator(F), -2 * F),
    ):
        for chart in Chart:
            if lhs.chart(chart) != rhs.chart(chart):
                return CheckResult("operators.sl2", False, f"{name} fails on {chart.value}")
    return CheckResult("operators.sl2", True, "bracket relations hold chartwise at symbolic t")


def check_operator_casimir() -> CheckResult:
    try:
        value = casimir_scalar_identity(T)
    except ArithmeticError as exc:
        return CheckResult("operators.casimir", False, str(exc))
    ok = value == expected_casimir(T)
    return CheckResult("operators.casimir", ok, f"Omega = {render_scalar(value)}")


# module level -----------------------------------------------------------


def check_module_casimir(ts, etas, window) -> CheckResult:
    for family, t, eta in cells(ts, etas):
        try:
            c = casimir_scalar(global_module(family, t, eta), window)
        except ArithmeticError as exc:
            return CheckResult("modules.casimir", False, f"{family.value} t={t} eta={eta}: {exc}")
        if c != (t - 1) ** 2 + 2 * (t - 1):
            return CheckResult("modules.casimir", False, f"{family.value} t={t}: {c}")
    return CheckResult("modules.casimir", True, "Casimir acts by (t-1)^2 + 2(t-1) on every module")


def check_borel_weil() -> CheckResult:
    for n in range(-3, 7):
        want = n + 1 if n >= 0 else 0
        got = borel_weil_dim(n)
        if got != want:
            return CheckResult("borel_weil.dimension", False, f"n={n}: {got} != {want}")
    return CheckResult("borel_weil.dimension", True, "dim = n+1 for n >= 0, else 0")


def check_finite(ts) -> CheckResult:
    for t in ts:
        M = global_module(Family.FINITE, t)
        hw = highest_weight_vectors(M, t)
        if M.dimension != t or [w.weight for w in hw] != [t - 1] or M.act("E", M.basis(0)):
            return CheckResult("finite.highest_weight", False, f"t={t}")
        if M.act("F", M.basis(t - 1)):
            return CheckResult("finite.highest_weight", False, f"F does not kill the last vector at t={t}")
    return CheckResult("finite.highest_weight", True, "dimension t, highest weight t-1, E u_0 = 0")


def check_golden_tables(fault: Optional[str] = None) -> List[CheckResult]:
    out = []
    for key, want in golden_tables(fault).items():
        family, chart, letter = key
        got = action_table(family, chart, letter)
        label = f"table.{table_label(key)}"
        out.append(CheckResult(label, got == want, "" if got == want else f"derived {got!r} vs reference {want!r}"))
    return out


def check_representation_property(ts, etas, window) -> CheckResult:
    n = 0
    for family, t, eta in cells(ts, etas):
        for chart in family.charts:
            m = make_local(family, chart, t, eta)
            for k in m.window(window):
                v = m.basis(k)
                if m.deriv(m.coord(v)) - m.coord(m.deriv(v)) != v:
                    return CheckResult(
                        "modules.weyl_relation", False, f"{family.value}/{chart.value} t={t} eta={eta} at index {k}"
                    )
                n += 1
    return CheckResult("modules.weyl_relation", True, f"[d, x] = 1 on {n} basis vectors")


def check_leaks(ts, etas, window) -> CheckResult:
    for family, t, eta in cells(ts, etas):
        for chart in family.charts:
            leaks = make_local(family, chart, t, eta).leaks(window)
            if leaks:
                return CheckResult("modules.support", False, f"{family.value}/{chart.value}: {leaks[:3]}")
        g = global_module(family, t, eta)
        for k in g.window(window):
            for X in "EFH":
                for j, _ in g.rule(X).at(k):
                    if j not in g.domain and not _structural(family, X, k):
                        return CheckResult("modules.support", False, f"{family.value} {X} on index {k} -> {j}")
    return CheckResult("modules.support", True, "no coefficient lands outside an index domain")


def _structural(family: Family, letter: str, k: int) -> bool:
    # the delta relation x * delta = 0 is what kills these boundary terms
    return (family, letter, k) in ((Family.VERMA, "E", 0), (Family.DELTA_INF, "F", 0))


def _relations_hold(M, window) -> Optional[str]:
    def E(x):
        return M.act("E", x)

    def F(x):
        return M.act("F", x)

    def H(x):
        return M.act("H", x)

    for k in M.window(window):
        v = M.basis(k)
        if E(F(v)) - F(E(v)) != H(v):
            return f"[E,F] != H at index {k}"
        if H(E(v)) - E(H(v)) != E(v) * 2:
            return f"[H,E] != 2E at index {k}"
        if H(F(v)) - F(H(v)) != F(v) * -2:
            return f"[H,F] != -2F at index {k}"
    return None


def check_module_relations(ts, etas, window) -> CheckResult:
    for family, t, eta in cells(ts, etas):
        bad = _relations_hold(global_module(family, t, eta), window)
        if bad:
            return CheckResult("modules.sl2", False, f"{family.value} t={t} eta={eta}: {bad}")
    for family in (Family.VERMA, Family.DELTA_INF):
        bad = _relations_hold(global_module(family, 0, singular=True), window)
        if bad:
            return CheckResult("modules.sl2", False, f"{family.value} t=0: {bad}")
    return CheckResult("modules.sl2", True, "bracket relations hold on every module (and at t = 0 for the delta modules)")


def check_overlaps(ts, etas, window) -> CheckResult:
    n = 0
    for family, t, eta in cells(ts, etas):
        if family in (Family.VERMA, Family.DELTA_INF):
            continue
        rep = overlap_check(family, t, eta, window)
        if not rep:
            return CheckResult("modules.overlap", False, rep.describe())
        n += 1
    return CheckResult("modules.overlap", True, f"chart identifications verified in {n} cases")


def check_verma(ts, window) -> CheckResult:
    for t in ts:
        M = global_module(Family.VERMA, t)
        cert = irreducibility_certificate(M, window)
        hw = highest_weight_vectors(M, window)
        if not (cert.irreducible and cert.strategy == "a" and cert.window_stable):
            return CheckResult("verma.irreducible", False, f"t={t}: {cert.describe()}")
        if [w.weight for w in hw] != [-t - 1] or hw[0].vector != M.basis(0):
            return CheckResult("verma.irreducible", False, f"t={t}: highest weight vectors {hw}")
    return CheckResult("verma.irreducible", True, "irreducible with highest weight -t-1")


def check_dual_verma(ts, window) -> CheckResult:
    for t in ts:
        n = int(t)
        M = global_module(Family.DUAL_VERMA, t)
        cert = irreducibility_certificate(M, window)
        if cert.kind != "Reducible" or cert.witness != list(range(n)) or not cert.window_stable:
            return CheckResult("dual_verma.structure", False, f"t={t}: {cert.describe()}")
        rep = composition_report(Family.DUAL_VERMA, t, window)
        if not (rep.sub_closed and rep.sub_irreducible and rep.sub_indices == list(range(n))):
            return CheckResult("dual_verma.structure", False, f"t={t}: {rep.describe()}")
        if [(p.kind, p.generator, p.weight) for p in rep.pieces] != [("highest", n, -t - 1)]:
            return CheckResult("dual_verma.structure", False, f"t={t}: quotient {rep.describe()}")
        hw = highest_weight_vectors(M, window)
        if [w.weight for w in hw] != [t - 1]:
            return CheckResult("dual_verma.structure", False, f"t={t}: highest weights {hw}")
    return CheckResult("dual_verma.structure", True, "irreducible t-dim submodule, quotient of highest weight -t-1")


def check_discrete_series(ts, window) -> CheckResult:
    for t in ts:
        D = global_module(Family.DELTA_INF, t)
        low = lowest_weight_vectors(D, window)
        if [w.weight for w in low] != [t + 1] or highest_weight_vectors(D, window):
            return CheckResult("discrete_series", False, f"t={t}: lowest weight vectors {low}")
        for M in (D, global_module(Family.VERMA, t)):
            cert = irreducibility_certificate(M, window)
            if not (cert.irreducible and cert.window_stable):
                return CheckResult("discrete_series", False, f"{M.family.value} t={t}: {cert.describe()}")
    return CheckResult("discrete_series", True, "lowest weight t+1; both closed-orbit modules irreducible")


def check_principal(ts, window) -> List[CheckResult]:
    out = []
    bad = None
    for t in ts:
        rep = composition_report(Family.PRINCIPAL_EVEN, t, window)
        kinds = [(p.kind, p.weight) for p in rep.pieces]
        pieces = {p.kind: p for p in rep.pieces}
        if rep.sub_indices != list(range(int(t))) or not rep.sub_closed or not rep.sub_irreducible:
            bad = f"t={t}: {rep.describe()}"
        elif sorted(kinds) != [("highest", -t - 1), ("lowest", t + 1)]:
            bad = f"t={t}: quotient pieces {kinds}"
        else:
            hi, lo = pieces["highest"].weights, pieces["lowest"].weights
            if any(w > -t - 1 or (w + t + 1) % 2 for w in hi) or any(w < t + 1 or (w - t - 1) % 2 for w in lo):
                bad = f"t={t}: quotient weights {hi} / {lo}"
        if bad:
            break
    out.append(CheckResult("principal_even.composition", bad is None, bad or "t-dim submodule, quotient D_+ + D_-"))
    bad = None
    for t in ts:
        rep = overlap_check(Family.PRINCIPAL_EVEN, t, 0, window)
        if not rep or rep.shift != -(int(t) - 1):
            bad = rep.describe()
            break
    out.append(CheckResult("principal_even.intertwiner", bad is None, bad or "n_k -> n_(k-t+1) intertwines"))
    bad = None
    for t in ts:
        cert = irreducibility_certificate(global_module(Family.PRINCIPAL_ODD, t), window)
        if not (cert.irreducible and cert.window_stable):
            bad = f"t={t}: {cert.describe()}"
            break
    out.append(CheckResult("principal_odd.irreducible", bad is None, bad or "irreducible for every t"))
    bad = None
    for t in ts:
        even, odd = k_weight_parity(Family.PRINCIPAL_EVEN, t), k_weight_parity(Family.PRINCIPAL_ODD, t)
        if not (even.single and odd.single and even.parities != odd.parities):
            bad = f"t={t}: {even.describe()}; {odd.describe()}"
            break
        if even.connection_parities != {0} or odd.connection_parities != {1}:
            bad = f"t={t}: connection parities {set(even.connection_parities)} {set(odd.connection_parities)}"
            break
    out.append(CheckResult("principal.parity", bad is None, bad or "the two families have opposite weight parity"))
    return out


def bracket_defect(rule_e, rule_f, rule_h, domain, window) -> Optional[int]:
    """First index in the window where [E, F] != H for the given rules."""
    for k in domain.window(window):
        v = Element.basis(k)
        ef = apply_rule(rule_e, apply_rule(rule_f, v, domain), domain)
        fe = apply_rule(rule_f, apply_rule(rule_e, v, domain), domain)
        if ef - fe != apply_rule(rule_h, v, domain):
            return k
    return None


def check_erratum(ts, window) -> List[CheckResult]:
    key = (Family.PRINCIPAL_ODD, Chart.INF, "F")
    derived = action_table(*key)
    recorded = reference_table(key)
    want = {-1: IndexPoly.parse("-t + 1/2 - k")}
    out = [CheckResult("erratum.derived_value", derived == want, f"F p_k = ({render_scalar(derived.entries.get(-1, 0))}) p_(k-1)")]
    derived_ok, reference_fails = True, True
    for t in ts:
        M = global_module(Family.PRINCIPAL_ODD, t)
        if bracket_defect(M.actE, M.actF, M.actH, M.domain, window) is not None:
            derived_ok = False
        if bracket_defect(M.actE, recorded.subs(t=M.t), M.actH, M.domain, window) is None:
            reference_fails = False
    out.append(CheckResult("erratum.derived_satisfies_bracket", derived_ok))
    out.append(CheckResult("erratum.reference_violates_bracket", reference_fails))
    return out


def check_whittaker(ts, etas, window) -> List[CheckResult]:
    out = []
    bad = None
    for t in ts:
        for eta in etas:
            M = global_module(Family.WHITTAKER, t, eta)
            n0 = M.basis(0)
            if M.act("E", n0) != n0 * eta:
                bad = f"E n_0 != eta n_0 at t={t}, eta={eta}"
            elif eta and whittaker_vectors(M, eta, window) != [n0]:
                bad = f"Whittaker vectors at t={t}, eta={eta}"
            if bad:
                break
        if bad:
            break
    out.append(CheckResult("whittaker.vector", bad is None, bad or "E n_0 = eta n_0"))
    bad = None
    for t in ts:
        for eta in etas:
            if not eta:
                continue
            M = global_module(Family.WHITTAKER, t, eta)
            if not isinstance(weights(M, window), NotAWeightBasis):
                bad = f"H diagonal at t={t}, eta={eta}"
            elif h_eigenvectors(M, window):
                bad = f"H eigenvector found at t={t}, eta={eta}"
            else:
                sub = submodule_generated(M, M.basis(0), window)
                cert = irreducibility_certificate(M, window)
                if not sub.spans_window:
                    bad = f"n_0 generates only {sub.dim} dims at t={t}, eta={eta}"
                elif not (cert.irreducible and cert.strategy == "b" and cert.window_stable):
                    bad = f"t={t}, eta={eta}: {cert.describe()}"
            if bad:
                break
        if bad:
            break
    out.append(CheckResult("whittaker.irreducible", bad is None, bad or "no weight vectors, n_0 generates, certificate (b)"))
    bad = None
    for t in ts:
        W, N = global_module(Family.WHITTAKER, t, 0), global_module(Family.DUAL_VERMA, t)
        if (W.actE, W.actF, W.actH, W.domain) != (N.actE, N.actF, N.actH, N.domain):
            bad = f"t={t}"
            break
        for chart in Chart:
            a, b = make_local(Family.WHITTAKER, chart, t, 0), make_local(Family.DUAL_VERMA, chart, t)
            if (a.coord_action, a.del_action, a.domain) != (b.coord_action, b.del_action, b.domain):
                bad = f"local rules differ on {chart.value} at t={t}"
                break
        if bad:
            break
    for chart in Chart:
        for X in "EFH":
            if action_table(Family.WHITTAKER, chart, X, T, 0) != action_table(Family.DUAL_VERMA, chart, X):
                bad = f"tables differ for {X} on {chart.value}"
    out.append(CheckResult("whittaker.eta_zero", bad is None, bad or "eta = 0 recovers the dual Verma module"))
    return out


def check_window_stability(ts, etas, small: int, large: int) -> CheckResult:
    for family, t, eta in cells(ts, etas):
        M = global_module(family, t, eta)
        a = irreducibility_certificate(M, small, check_stability=False)
        b = irreducibility_certificate(M, large, check_stability=False)
        if a.key() != b.key():
            return CheckResult("certificates.window_stable", False, f"{family.value} t={t} eta={eta}: {a.describe()} vs {b.describe()}")
    return CheckResult("certificates.window_stable", True, f"same verdicts at windows {small} and {large}")


def run_all(
    window: int = 60,
    ts: Iterable[int] = DEFAULT_TS,
    etas: Iterable = DEFAULT_ETAS,
    fault: Optional[str] = None,
) -> List[CheckResult]:
    ts = tuple(Fraction(t) for t in ts)
    etas = tuple(Fraction(e) for e in etas)
    results: List[CheckResult] = [
        check_chart_operators(),
        check_gluing(ts),
        check_operator_relations(),
        check_operator_casimir(),
        check_module_casimir(ts, etas, window),
        check_borel_weil(),
        check_finite(ts),
    ]
    results += check_golden_tables(fault)
    results += [
        check_representation_property(ts, etas, window),
        check_leaks(ts, etas, window),
        check_module_relations(ts, etas, window),
        check_overlaps(ts, etas, window),
        check_verma(ts, window),
        check_dual_verma(ts, window),
        check_discrete_series(ts, window),
    ]
    results += check_principal(ts, window)
    results += check_erratum(ts, window)
    results += check_whittaker(ts, etas, window)
    results.append(check_window_stability(ts, etas, 8, window))
    return results
