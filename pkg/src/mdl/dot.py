"""Graphviz DOT output for diagrams, frames, bundles, pseudoproducts and graphs."""

from __future__ import annotations

from typing import Mapping

from .constructions import ConstructionBundle, Pseudoproduct
from .diagram import Diagram, Frame
from .graphs import Graph

_LAYER_COLOURS = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666")


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _digraph(
    title: str,
    node_ids: list[str],
    edges: list[tuple[int, int, str, Mapping[str, str]]],
    node_attrs: Mapping[int, Mapping[str, str]] | None = None,
) -> str:
    node_attrs = node_attrs or {}
    lines = [f"digraph {_quote(title)} {{", "  rankdir=TB;", "  node [shape=circle];"]
    for i, nid in enumerate(node_ids):
        attrs = dict(node_attrs.get(i, {}))
        attrs.setdefault("label", nid)
        body = ", ".join(f"{k}={_quote(v)}" for k, v in sorted(attrs.items()))
        lines.append(f"  {_quote(nid)} [{body}];")
    for s, t, lab, extra in edges:
        attrs = {"label": lab, **extra}
        body = ", ".join(f"{k}={_quote(v)}" for k, v in sorted(attrs.items()))
        lines.append(f"  {_quote(node_ids[s])} -> {_quote(node_ids[t])} [{body}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def diagram_to_dot(d: Diagram, title: str = "diagram") -> str:
    ids = [f"x{i}" for i in d.points]
    return _digraph(title, ids, [(s, t, lab, {}) for s, t, lab in d.sorted_edges()], {0: {"shape": "doublecircle"}})


def frame_to_dot(f: Frame, title: str = "frame") -> str:
    ids = [f.name(i) for i in f.points]
    return _digraph(title, ids, [(s, t, lab, {}) for s, t, lab in f.sorted_edges()])


def bundle_to_dot(bundle: ConstructionBundle, title: str = "bundle") -> str:
    """``f_plus`` with the deleted edge dashed; points in the image of g are named ``g_x<i>``."""
    fp = bundle.f_plus
    inverse = {p: i for i, p in enumerate(bundle.g)}
    ids = [f"g_x{inverse[p]}" if p in inverse else fp.name(p) for p in fp.points]
    deleted = bundle.deleted_edge if bundle.selected is not None else None
    edges = [
        (s, t, lab, {"style": "dashed"} if (s, t, lab) == deleted else {})
        for s, t, lab in fp.sorted_edges()
    ]
    attrs = {bundle.reflexive_point: {"shape": "doublecircle", "label": "o"}}
    return _digraph(title, ids, edges, attrs)


def pseudoproduct_to_dot(bundle: ConstructionBundle, pp: Pseudoproduct, title: str = "pseudoproduct") -> str:
    """Points are coloured by graph vertex; re-routed edges are bold."""
    inverse = {p: i for i, p in enumerate(bundle.g)}
    ids = []
    attrs: dict[int, dict[str, str]] = {}
    for p in pp.frame.points:
        y, v = pp.pr[p], pp.h[p]
        base = f"g_x{inverse[y]}" if y in inverse else bundle.f_plus.name(y)
        ids.append(base if v is None else f"{base}.v{v}")
        if v is not None:
            attrs[p] = {"color": _LAYER_COLOURS[v % len(_LAYER_COLOURS)]}
    fm = bundle.f_minus
    edges = []
    for s, t, lab in pp.frame.sorted_edges():
        rerouted = fm is not None and not fm.has_edge(pp.pr[s], pp.pr[t], lab)
        edges.append((s, t, lab, {"style": "bold"} if rerouted else {}))
    return _digraph(title, ids, edges, attrs)


def graph_to_dot(g: Graph, title: str = "graph") -> str:
    lines = [f"graph {_quote(title)} {{"]
    lines += [f"  v{i};" for i in range(g.order)]
    lines += [f"  v{u} -- v{v};" for u, v in sorted(g.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"
