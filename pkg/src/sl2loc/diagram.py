"""Action diagrams: nodes are basis vectors, edges are nonzero generator coefficients.

The JSON and DOT encodings are canonical (sorted, fixed formatting) so that the
same configuration always produces the same bytes, and both parse back to an
equal ``DiagramDoc``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .exact import Chart, as_scalar, render_rational, render_scalar
from .reps.modules import ActionRule, Family, IndexDomain, make_local, rule_from_samples
from .reps.sl2 import global_module, realization_chart

SCHEMA_VERSION = 1
_OP_ORDER = {"E": 0, "F": 1, "H": 2}


@dataclass(frozen=True)
class Node:
    index: int
    label: str
    weight: str

    @property
    def id(self) -> str:
        return f"b{self.index}"


@dataclass(frozen=True)
class Edge:
    op: str
    src: int
    dst: int
    coeff: str

    def sort_key(self):
        return (_OP_ORDER[self.op], self.src, self.dst)


@dataclass
class DiagramDoc:
    family: str
    t: int
    eta: str
    chart: str
    nodes: List[Node] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)
    identifications: List[str] = field(default_factory=list)
    certificates: List[Dict[str, str]] = field(default_factory=list)

    def canonical(self) -> "DiagramDoc":
        return DiagramDoc(
            self.family,
            self.t,
            self.eta,
            self.chart,
            sorted(self.nodes, key=lambda n: n.index),
            sorted(self.edges, key=Edge.sort_key),
            list(self.identifications),
            [dict(sorted(c.items())) for c in self.certificates],
        )

    def __eq__(self, other):
        if not isinstance(other, DiagramDoc):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (a.family, a.t, a.eta, a.chart, a.nodes, a.edges, a.identifications, a.certificates) == (
            b.family,
            b.t,
            b.eta,
            b.chart,
            b.nodes,
            b.edges,
            b.identifications,
            b.certificates,
        )

    # JSON ----------------------------------------------------------------
    def to_dict(self) -> dict:
        d = self.canonical()
        return {
            "schema_version": SCHEMA_VERSION,
            "family": d.family,
            "t": d.t,
            "eta": d.eta,
            "chart": d.chart,
            "nodes": [{"id": n.id, "index": n.index, "label": n.label, "weight": n.weight} for n in d.nodes],
            "edges": [
                {"op": e.op, "src": f"b{e.src}", "dst": f"b{e.dst}", "coeff": e.coeff} for e in d.edges
            ],
            "identifications": d.identifications,
            "certificates": d.certificates,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "DiagramDoc":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        return cls(
            data["family"],
            int(data["t"]),
            data["eta"],
            data["chart"],
            [Node(int(n["index"]), n["label"], n["weight"]) for n in data["nodes"]],
            [Edge(e["op"], _node_index(e["src"]), _node_index(e["dst"]), e["coeff"]) for e in data["edges"]],
            list(data["identifications"]),
            [dict(c) for c in data["certificates"]],
        ).canonical()

    @classmethod
    def from_json(cls, text: str) -> "DiagramDoc":
        return cls.from_dict(json.loads(text))

    # DOT -----------------------------------------------------------------
    def to_dot(self) -> str:
        d = self.canonical()
        extra = json.dumps(
            {"identifications": d.identifications, "certificates": d.certificates},
            sort_keys=True,
            ensure_ascii=False,
            separators=(",", ":"),
        )
        lines = [f"digraph {_q(d.family)} {{"]
        lines.append(
            f"  graph [family={_q(d.family)}, t={_q(str(d.t))}, eta={_q(d.eta)}, chart={_q(d.chart)}, meta={_q(extra)}];"
        )
        for n in d.nodes:
            lines.append(f"  {_q(n.id)} [label={_q(n.label)}, weight={_q(n.weight)}];")
        for e in d.edges:
            lines.append(
                f"  {_q('b%d' % e.src)} -> {_q('b%d' % e.dst)} [op={_q(e.op)}, coeff={_q(e.coeff)}, label={_q(e.op + ': ' + e.coeff)}];"
            )
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dot(cls, text: str) -> "DiagramDoc":
        graph_attrs: Dict[str, str] = {}
        nodes, edges = [], []
        for raw in text.splitlines()[1:]:
            line = raw.strip()
            if not line or line == "}":
                continue
            m = _EDGE_LINE.match(line)
            if m:
                attrs = _attrs(m.group(3))
                edges.append(Edge(attrs["op"], _node_index(_unq(m.group(1))), _node_index(_unq(m.group(2))), attrs["coeff"]))
                continue
            m = _GRAPH_LINE.match(line)
            if m:
                graph_attrs = _attrs(m.group(1))
                continue
            m = _NODE_LINE.match(line)
            if m:
                attrs = _attrs(m.group(2))
                nodes.append(Node(_node_index(_unq(m.group(1))), attrs["label"], attrs["weight"]))
                continue
            raise ValueError(f"unrecognised DOT line: {line!r}")
        meta = json.loads(graph_attrs.get("meta", "{}"))
        return cls(
            graph_attrs["family"],
            int(graph_attrs["t"]),
            graph_attrs["eta"],
            graph_attrs["chart"],
            nodes,
            edges,
            meta.get("identifications", []),
            meta.get("certificates", []),
        ).canonical()

    # ASCII ---------------------------------------------------------------
    def to_ascii(self) -> str:
        d = self.canonical()
        by_index = {n.index: n for n in d.nodes}
        out = [f"{d.family}  t={d.t}  eta={d.eta}  chart={d.chart}"]
        chain = []
        order = sorted(by_index)
        for i, k in enumerate(order):
            chain.append(by_index[k].label)
            if i + 1 < len(order):
                nxt = order[i + 1]
                left = [e.coeff for e in d.edges if e.src == nxt and e.dst == k and e.op == "E"]
                right = [e.coeff for e in d.edges if e.src == k and e.dst == nxt and e.op == "F"]
                arrow = ""
                if left:
                    arrow += f" <-E:{left[0]}-"
                if right:
                    arrow += f" -F:{right[0]}->"
                chain.append(arrow.strip() or "  ")
        out.append(" ".join(chain))
        for n in d.nodes:
            moves = [f"{e.op}->{by_index[e.dst].label} ({e.coeff})" for e in d.edges if e.src == n.index]
            out.append(f"  {n.label:>8} [weight {n.weight}]: " + ("; ".join(moves) if moves else "0"))
        for ident in d.identifications:
            out.append(f"identification: {ident}")
        for c in d.certificates:
            out.append("certificate: " + ", ".join(f"{k}={v}" for k, v in c.items()))
        return "\n".join(out) + "\n"


_GRAPH_LINE = re.compile(r"^graph \[(.*)\];$")
_NODE_LINE = re.compile(r'^("(?:[^"\\]|\\.)*") \[(.*)\];$')
_EDGE_LINE = re.compile(r'^("(?:[^"\\]|\\.)*") -> ("(?:[^"\\]|\\.)*") \[(.*)\];$')
_ATTR = re.compile(r'\s*([A-Za-z_]+)=("(?:[^"\\]|\\.)*")\s*(?:,|$)')


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _unq(s: str) -> str:
    body = s[1:-1]
    return re.sub(r"\\(.)", r"\1", body)


def _attrs(text: str) -> Dict[str, str]:
    out, pos = {}, 0
    while pos < len(text):
        m = _ATTR.match(text, pos)
        if not m:
            raise ValueError(f"bad attribute list: {text!r}")
        out[m.group(1)] = _unq(m.group(2))
        pos = m.end()
    return out


def _node_index(node_id: str) -> int:
    if not node_id.startswith("b"):
        raise ValueError(f"bad node id {node_id!r}")
    return int(node_id[1:])


def chart_rules(family, chart, t, eta=0) -> Tuple[Dict[str, ActionRule], IndexDomain, str]:
    """Numeric E, F, H rules with their domain for a family in one chart."""
    family = Family.parse(family)
    chart = realization_chart(family) if chart is None else (chart if isinstance(chart, Chart) else Chart.parse(chart))
    g = global_module(family, t, eta)
    if chart is g.chart:
        return {"E": g.actE, "F": g.actF, "H": g.actH}, g.domain, g.label
    local = make_local(family, chart, t, eta)
    domain = local.domain
    if family is Family.FINITE:
        domain = IndexDomain(0, int(g.t) - 1)
    return {X: rule_from_samples(local, X) for X in "EFH"}, domain, local.basis_label


def build_diagram(family, chart, t, eta=0, window: int = 60, identifications=(), certificates=()) -> DiagramDoc:
    family = Family.parse(family)
    chart = realization_chart(family) if chart is None else (chart if isinstance(chart, Chart) else Chart.parse(chart))
    rules, domain, label = chart_rules(family, chart, t, eta)
    indices = domain.window(window)
    inside = set(indices)
    nodes, edges = [], []
    for k in indices:
        diag = dict(rules["H"].at(k)).get(k, Fraction(0))
        nodes.append(Node(k, f"{label}_{k}", render_scalar(diag)))
        for X in "EFH":
            for j, c in rules[X].at(k):
                if j in inside and c:
                    edges.append(Edge(X, k, j, render_rational(c)))
    return DiagramDoc(
        family.value,
        int(as_scalar(t)),
        render_rational(as_scalar(eta)),
        chart.value,
        nodes,
        edges,
        list(identifications),
        [dict(c) for c in certificates],
    ).canonical()
