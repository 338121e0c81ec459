"""Command-line interface: ``sl2loc derive | module | classify | check-all``.

Exit codes: 0 success, 1 a check failed, 2 invalid usage or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .checks import DEFAULT_ETAS, DEFAULT_TS, run_all
from .diagram import build_diagram
from .exact import Chart, render_rational, render_scalar
from .reps.analysis import (
    NotAWeightBasis,
    casimir_scalar,
    composition_report,
    highest_weight_vectors,
    irreducibility_certificate,
    k_weight_parity,
    lowest_weight_vectors,
    module_name,
    weights,
    whittaker_vectors,
)
from .reps.modules import Family, UnsupportedModule, action_table
from .reps.sl2 import global_module, realization_chart
from .tdo import GlobalOp, beta, casimir_scalar_identity
from .weyl import WeylOp

FORMATS = ("text", "json", "dot", "ascii")
DEFAULT_FAULT = "VermaPoint/zero/E"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    t: Optional[int]
    eta: Fraction
    window: int
    format: str
    family: Optional[Family]
    chart: Optional[Chart]
    out: Optional[str] = None
    fault: Optional[str] = None


def _positive_window(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be an integer, got {text!r}") from None
    if n < 8:
        raise argparse.ArgumentTypeError("window must be at least 8")
    return n


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _family(text: str) -> Family:
    try:
        return Family.parse(text)
    except UnsupportedModule as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _chart(text: str) -> Chart:
    try:
        return Chart.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--family", type=_family, help="module family, e.g. VermaPoint")
    common.add_argument("--chart", type=_chart, help="zero or inf")
    common.add_argument("--t", type=int, help="twist parameter (integer)")
    common.add_argument("--eta", type=_rational, default=Fraction(0), help="Whittaker parameter (rational)")
    common.add_argument("--window", type=_positive_window, default=60, help="index window (>= 8)")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", help="write output to this file (UTF-8)")
    parser = _Parser(prog="sl2loc", description="Exact sl(2) computations on the projective line.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("derive", parents=[common], help="chart operators for E, F, H and the Casimir")
    sub.add_parser("module", parents=[common], help="action diagram of a module")
    sub.add_parser("classify", parents=[common], help="structural report and identification")
    p = sub.add_parser("check-all", parents=[common], help="run the full verification suite")
    p.add_argument("--inject-fault", nargs="?", const=DEFAULT_FAULT, default=None, help=argparse.SUPPRESS)
    return parser


def _config(ns) -> RunConfig:
    return RunConfig(
        ns.t,
        ns.eta,
        ns.window,
        ns.format,
        ns.family,
        ns.chart,
        ns.out,
        getattr(ns, "inject_fault", None),
    )


def _need_t(cfg: RunConfig, minimum: Optional[int] = 1) -> int:
    if cfg.t is None:
        raise UsageError("--t is required")
    if minimum is not None and cfg.t < minimum:
        raise UsageError(f"t = {cfg.t}: regular dominant integral required (t >= {minimum})")
    return cfg.t


def _need_family(cfg: RunConfig) -> Family:
    if cfg.family is None:
        raise UsageError("--family is required")
    return cfg.family


# derive ------------------------------------------------------------------


def derive_table(t) -> dict:
    ops = {}
    for letter in "EFH":
        g = beta(letter, t)
        ops[letter] = {"zero": str(g.op0), "inf": str(g.opinf)}
    return {
        "schema_version": 1,
        "t": render_scalar(Fraction(t)),
        "operators": ops,
        "casimir": render_scalar(casimir_scalar_identity(t)),
    }


def parse_derive_table(data: dict) -> Dict[str, object]:
    """Inverse of ``derive_table``: GlobalOps per letter plus the Casimir constant."""
    t = Fraction(data["t"])
    out: Dict[str, object] = {
        letter: GlobalOp(t, WeylOp.parse(pair["zero"], Chart.ZERO), WeylOp.parse(pair["inf"], Chart.INF))
        for letter, pair in data["operators"].items()
    }
    out["casimir"] = Fraction(data["casimir"])
    return out


def cmd_derive(cfg: RunConfig) -> tuple[int, str]:
    t = _need_t(cfg, minimum=None)
    table = derive_table(t)
    if cfg.format == "json":
        return 0, json.dumps(table, sort_keys=True, indent=2) + "\n"
    if cfg.format == "dot":
        raise UsageError("derive supports text, ascii and json formats")
    lines = []
    for letter in "EFH":
        lines.append(f"{letter}_0 = {table['operators'][letter]['zero']}")
        lines.append(f"{letter}_inf = {table['operators'][letter]['inf']}")
    lines.append(f"casimir = {table['casimir']}")
    return 0, "\n".join(lines) + "\n"


# module ------------------------------------------------------------------


def _identifications(family: Family, t: int, eta: Fraction) -> List[str]:
    g = global_module(family, t, eta)
    out = [f"global sections: {module_name(family, t, eta)}"]
    if g.intertwiner_shift is not None:
        out.append(f"chart identification: b_k (inf) -> b_(k{g.intertwiner_shift:+d}) (zero)")
    return out


def _module_certificates(family: Family, t: int, eta: Fraction, window: int) -> List[Dict[str, str]]:
    g = global_module(family, t, eta)
    c = casimir_scalar(g, window)
    return [{"name": "casimir", "status": "pass", "value": render_rational(c)}]


def cmd_module(cfg: RunConfig) -> tuple[int, str]:
    family = _need_family(cfg)
    t = _need_t(cfg)
    chart = cfg.chart or realization_chart(family)
    doc = build_diagram(
        family,
        chart,
        t,
        cfg.eta,
        cfg.window,
        _identifications(family, t, cfg.eta),
        _module_certificates(family, t, cfg.eta, cfg.window),
    )
    if cfg.format == "json":
        return 0, doc.to_json()
    if cfg.format == "dot":
        return 0, doc.to_dot()
    if cfg.format == "ascii":
        return 0, doc.to_ascii()
    lines = [f"{family.value} on the {chart.value} chart, t={t}, eta={render_rational(cfg.eta)}"]
    label = doc.nodes[0].label.split("_")[0] if doc.nodes else "b"
    for letter in "EFH":
        rule = action_table(family, chart, letter, t, cfg.eta)
        terms = [f"({c}) {label}_(k{s:+d})" if s else f"({c}) {label}_k" for s, c in rule.render().items()]
        lines.append(f"{letter} . {label}_k = " + (" + ".join(terms) if terms else "0"))
    lines.extend(doc.identifications)
    lines.append(f"window: {len(doc.nodes)} basis vectors, {len(doc.edges)} arrows")
    return 0, "\n".join(lines) + "\n"


# classify ----------------------------------------------------------------


def classify(family: Family, t: int, eta: Fraction, window: int) -> dict:
    M = global_module(family, t, eta)
    T = M.t
    name = module_name(family, t, eta)
    cert = irreducibility_certificate(M, window)
    cas = casimir_scalar(M, window)
    report: dict = {
        "family": family.value,
        "t": t,
        "eta": render_rational(M.eta),
        "name": name,
        "casimir": render_rational(cas),
        "certificate": cert.describe(),
        "window_stable": bool(cert.window_stable),
    }
    ws = weights(M, window)
    if isinstance(ws, NotAWeightBasis):
        report["weights"] = f"not a weight basis (H shifts indices by {ws.shift:+d})"
    else:
        report["weights"] = [render_rational(w) for _, w in ws[:8]]
        report["highest_weight_vectors"] = [
            f"{e.vector.render(M.label)} (weight {render_rational(e.weight)})" for e in highest_weight_vectors(M, window)
        ]
        report["lowest_weight_vectors"] = [
            f"{e.vector.render(M.label)} (weight {render_rational(e.weight)})" for e in lowest_weight_vectors(M, window)
        ]
    report["whittaker_vectors"] = [v.render(M.label) for v in whittaker_vectors(M, M.eta, window)]
    headline = f"{name}, irreducible" if cert.irreducible else f"{name}, {cert.kind.lower()}"
    if family is Family.FINITE:
        headline = f"{name}, dim {M.dimension}, " + ("irreducible" if cert.irreducible else cert.kind.lower())
    elif family in (Family.PRINCIPAL_EVEN, Family.DUAL_VERMA) or (family is Family.WHITTAKER and M.eta == 0):
        comp = composition_report(Family.PRINCIPAL_EVEN if family is Family.PRINCIPAL_EVEN else Family.DUAL_VERMA, t, window)
        report["composition"] = comp.describe().splitlines()
        kinds = sorted(p.kind for p in comp.pieces)
        if kinds == ["highest", "lowest"]:
            quotient = "D_+⊕D_−"
        elif kinds == ["highest"]:
            quotient = f"highest weight {render_rational(comp.pieces[0].weight)}"
        else:
            quotient = ", ".join(f"{p.kind} weight {render_rational(p.weight)}" for p in comp.pieces)
        headline = f"{name}: sub dim {comp.sub_dim}, quotient {quotient}"
    elif family is Family.WHITTAKER:
        headline = f"{name}, " + ("irreducible" if cert.irreducible else cert.kind.lower()) + f", Casimir {render_rational(cas)}"
    elif family is Family.VERMA:
        headline += f", highest weight {render_rational(-T - 1)}"
        report["also"] = f"D_+({render_rational(-T - 1)})"
    elif family is Family.DELTA_INF:
        headline += f", lowest weight {render_rational(T + 1)}"
    if family in (Family.PRINCIPAL_EVEN, Family.PRINCIPAL_ODD):
        par = k_weight_parity(family, t)
        report["parity"] = par.parity
        if family is Family.PRINCIPAL_ODD:
            headline += f", weights all {par.parity}"
    report["headline"] = headline
    return report


def cmd_classify(cfg: RunConfig) -> tuple[int, str]:
    family = _need_family(cfg)
    t = _need_t(cfg)
    report = classify(family, t, cfg.eta, cfg.window)
    if cfg.format == "json":
        return 0, json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if cfg.format == "dot":
        raise UsageError("classify supports text, ascii and json formats")
    lines = [report["headline"]]
    for key in sorted(report):
        if key == "headline":
            continue
        value = report[key]
        if isinstance(value, list):
            value = "; ".join(value) if value else "none"
        lines.append(f"  {key}: {value}")
    return 0, "\n".join(lines) + "\n"


# check-all ---------------------------------------------------------------


def cmd_check_all(cfg: RunConfig) -> tuple[int, str]:
    ts = (cfg.t,) if cfg.t is not None else DEFAULT_TS
    if any(t < 1 for t in ts):
        raise UsageError("t must be >= 1")
    try:
        results = run_all(cfg.window, ts, DEFAULT_ETAS, cfg.fault)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    failed = [r for r in results if not r.ok]
    if cfg.format == "json":
        text = json.dumps(
            {
                "checks": len(results),
                "passed": len(results) - len(failed),
                "failed": [r.label for r in failed],
                "results": [{"label": r.label, "ok": r.ok, "detail": r.detail} for r in results],
            },
            sort_keys=True,
            indent=2,
        ) + "\n"
    else:
        lines = [r.line() for r in results]
        if failed:
            lines.append(f"{len(failed)} of {len(results)} checks failed; first: {failed[0].label}: {failed[0].detail}")
        else:
            lines.append(f"all {len(results)} checks passed")
        text = "\n".join(lines) + "\n"
    return (1 if failed else 0), text


COMMANDS = {"derive": cmd_derive, "module": cmd_module, "classify": cmd_classify, "check-all": cmd_check_all}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if not ns.command:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        cfg = _config(ns)
        code, text = COMMANDS[ns.command](cfg)
    except UsageError as exc:
        print(f"sl2loc: error: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedModule, ValueError) as exc:
        print(f"sl2loc: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif hasattr(sys.stdout, "buffer"):
        sys.stdout.flush()
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
