"""Undirected graphs, colourings and the small constructions used with pseudoproducts."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import BudgetExceeded, DiagramSyntaxError

CHROMATIC_VERTEX_BUDGET = 12
COLOURING_NODE_BUDGET = 2_000_000

Colouring = tuple[int, ...]
"""Colour of each vertex, numbered from 1."""


@dataclass(frozen=True)
class Graph:
    """A graph on vertices ``0..order-1`` with a symmetric edge relation; loops allowed."""

    order: int
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        normal = set()
        for u, v in self.edges:
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge {(u, v)} leaves the vertex set")
            normal.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normal))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        rows: list[set[int]] = [set() for _ in range(self.order)]
        for u, v in self.edges:
            rows[u].add(v)
            rows[v].add(u)
        return tuple(frozenset(r) for r in rows)

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @property
    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def is_complete(self) -> bool:
        return len(self.edges) == self.order * (self.order - 1) // 2 and not self.has_loops


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.order
    return Graph(g.order + h.order, g.edges | {(u + shift, v + shift) for u, v in h.edges})


def mycielski(g: Graph) -> Graph:
    """Mycielskian of ``g``: copies ``u_i`` of each vertex joined to its neighbours, plus a hub."""
    n = g.order
    edges = set(g.edges)
    for u, v in g.edges:
        edges.add((u, n + v))
        edges.add((v, n + u))
    hub = 2 * n
    edges.update((n + i, hub) for i in range(n))
    return Graph(2 * n + 1, frozenset(edges))


def mycielski_tower(k: int) -> Graph:
    """The k-th Mycielski graph: K1, K2, C5, Groetzsch, ...; chromatic number k."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return complete_graph(1)
    g = complete_graph(2)
    for _ in range(k - 2):
        g = mycielski(g)
    return g


def is_colouring(g: Graph, colouring: Sequence[int]) -> bool:
    return len(colouring) == g.order and all(colouring[u] != colouring[v] for u, v in g.edges)


def _degree_order(g: Graph) -> list[int]:
    return sorted(range(g.order), key=lambda v: (-len(g.adjacency[v]), v))


def find_colouring(
    g: Graph, n_colours: int, node_budget: int = COLOURING_NODE_BUDGET
) -> Colouring | None:
    """Exact backtracking search for a proper colouring with at most ``n_colours`` colours."""
    if g.has_loops or n_colours < 0:
        return None
    if g.order == 0:
        return ()
    order = _degree_order(g)
    colour = [0] * g.order
    nodes = 0

    def place(i: int, used: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded("colouring search nodes", nodes, node_budget)
        v = order[i]
        taken = {colour[u] for u in g.adjacency[v]}
        # a colour beyond used+1 is symmetric to used+1
        for c in range(1, min(used + 1, n_colours) + 1):
            if c in taken:
                continue
            colour[v] = c
            if place(i + 1, max(used, c)):
                return True
        colour[v] = 0
        return False

    if place(0, 0):
        return tuple(colour)
    return None


def chromatic_number(g: Graph, vertex_budget: int = CHROMATIC_VERTEX_BUDGET) -> int | None:
    """Least number of colours in a proper colouring; ``None`` for graphs with loops."""
    if g.has_loops:
        return None
    if g.is_complete():
        return g.order
    if g.order > vertex_budget:
        raise BudgetExceeded("chromatic number vertices", g.order, vertex_budget)
    for k in range(0 if g.order == 0 else 1, g.order + 1):
        if find_colouring(g, k) is not None:
            return k
    raise AssertionError("unreachable: order colours always suffice")


def check_edge_lifting(g_hi: Graph, g_lo: Graph, rho: Sequence[int]) -> bool:
    """Surjective homomorphism ``rho: g_hi -> g_lo`` along which every edge lifts.

    For each edge {x, y} of ``g_lo`` and each ``x'`` with ``rho(x') = x`` there
    must be ``y'`` with ``rho(y') = y`` and {x', y'} an edge of ``g_hi``.
    """
    if len(rho) != g_hi.order or any(not 0 <= r < g_lo.order for r in rho):
        return False
    if set(rho) != set(range(g_lo.order)):
        return False
    if any(not g_lo.adjacent(rho[u], rho[v]) for u, v in g_hi.edges):
        return False
    for x, y in g_lo.edges:
        for a, b in ((x, y), (y, x)):
            for xp in (v for v in range(g_hi.order) if rho[v] == a):
                if not any(rho[yp] == b for yp in g_hi.adjacency[xp]):
                    return False
    return True


# ---------------------------------------------------------------------------
# DSL and selectors
# ---------------------------------------------------------------------------

_GRAPH = re.compile(r"graph\s+(\d+)\s*\Z")
_GEDGE = re.compile(r"edge\s+v(\d+)\s+--\s+v(\d+)\s*\Z")


def parse_graph(text: str) -> Graph:
    order: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        for stmt in raw.split("#", 1)[0].split("/"):
            stmt = stmt.strip()
            if not stmt:
                continue
            if order is None:
                m = _GRAPH.match(stmt)
                if not m:
                    raise DiagramSyntaxError("expected 'graph <n>' header", lineno, 1)
                order = int(m.group(1))
                continue
            m = _GEDGE.match(stmt)
            if not m:
                raise DiagramSyntaxError(f"cannot parse {stmt!r}", lineno, 1)
            u, v = int(m.group(1)), int(m.group(2))
            if u >= order or v >= order:
                raise DiagramSyntaxError("dangling vertex reference", lineno, 1)
            edges.append((u, v))
    if order is None:
        raise DiagramSyntaxError("empty input: expected 'graph <n>'", 1, 1)
    return Graph(order, frozenset(edges))


def graph_to_dsl(g: Graph) -> str:
    return "\n".join([f"graph {g.order}"] + [f"edge v{u} -- v{v}" for u, v in sorted(g.edges)]) + "\n"


def graph_from_selector(selector: str) -> Graph:
    """Resolve ``complete:<n>``, ``cycle:<n>``, ``mycielski:<k>``, ``mycielski:<selector>`` or ``file:<path>``."""
    kind, _, arg = selector.partition(":")
    if kind == "complete":
        return complete_graph(int(arg))
    if kind == "cycle":
        return cycle_graph(int(arg))
    if kind == "mycielski":
        if arg.isdigit():
            return mycielski_tower(int(arg))
        return mycielski(graph_from_selector(arg))
    if kind == "file":
        with open(arg, encoding="utf-8") as fh:
            return parse_graph(fh.read())
    raise ValueError(f"unknown graph selector {selector!r}")
