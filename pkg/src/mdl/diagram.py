"""Finite Kripke frames, diagrams and the graph primitives used on them.

A :class:`Frame` is a finite set of points ``0..size-1`` together with a set of
labelled edges ``(src, dst, label)``. A :class:`Diagram` is a frame whose root
is always point 0; it encodes the first-order formula

    forall x0 exists x1 ... exists xn  AND { xi R_label xj | (i, j, label) in edges }

Both are immutable. Every function in this module is pure.
"""

from __future__ import annotations

import math
import re
import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal

from .errors import DiagramSyntaxError, EdgeAbsent, NotRooted

Label = str
Edge = tuple[int, int, Label]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _check_label(label: str) -> None:
    if not isinstance(label, str) or not _IDENT.match(label):
        raise ValueError(f"invalid label {label!r}")


@dataclass(frozen=True)
class Frame:
    size: int
    edges: frozenset[Edge] = frozenset()
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("frame size must be non-negative")
        object.__setattr__(self, "edges", frozenset(self.edges))
        for s, t, lab in self.edges:
            if not (0 <= s < self.size and 0 <= t < self.size):
                raise ValueError(f"edge {(s, t, lab)} leaves the point set")
            _check_label(lab)
        if self.names is not None and len(self.names) != self.size:
            raise ValueError("names must cover every point")

    @property
    def points(self) -> range:
        return range(self.size)

    @cached_property
    def labels(self) -> tuple[Label, ...]:
        return tuple(sorted({lab for _, _, lab in self.edges}))

    @cached_property
    def succ(self) -> dict[Label, tuple[tuple[int, ...], ...]]:
        out: dict[Label, list[set[int]]] = {}
        for s, t, lab in self.edges:
            out.setdefault(lab, [set() for _ in self.points])[s].add(t)
        return {lab: tuple(tuple(sorted(x)) for x in rows) for lab, rows in out.items()}

    @cached_property
    def pred(self) -> dict[Label, tuple[tuple[int, ...], ...]]:
        out: dict[Label, list[set[int]]] = {}
        for s, t, lab in self.edges:
            out.setdefault(lab, [set() for _ in self.points])[t].add(s)
        return {lab: tuple(tuple(sorted(x)) for x in rows) for lab, rows in out.items()}

    @cached_property
    def neighbours(self) -> tuple[tuple[int, ...], ...]:
        """Unlabelled directed successors of each point."""
        rows: list[set[int]] = [set() for _ in self.points]
        for s, t, _ in self.edges:
            rows[s].add(t)
        return tuple(tuple(sorted(r)) for r in rows)

    def successors(self, point: int, label: Label) -> tuple[int, ...]:
        rows = self.succ.get(label)
        return rows[point] if rows is not None else ()

    def predecessors(self, point: int, label: Label) -> tuple[int, ...]:
        rows = self.pred.get(label)
        return rows[point] if rows is not None else ()

    def has_edge(self, src: int, dst: int, label: Label) -> bool:
        return (src, dst, label) in self.edges

    def name(self, point: int) -> str:
        if self.names is not None:
            return self.names[point]
        return f"w{point}"

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def with_edges(self, edges: Iterable[Edge]) -> "Frame":
        return Frame(self.size, frozenset(edges), self.names)


@dataclass(frozen=True)
class Diagram(Frame):
    """A finite pointed frame with root 0.

    Rootedness (every point reachable from 0) is not enforced here because
    deleting an edge may break it; use :func:`is_rooted`.
    """

    def __post_init__(self):
        super().__post_init__()
        if self.size < 1:
            raise ValueError("a diagram has at least its root")

    root = 0

    def name(self, point: int) -> str:
        return f"x{point}"

    def as_frame(self) -> Frame:
        return Frame(self.size, self.edges, tuple(f"x{i}" for i in self.points))

    def with_edges(self, edges: Iterable[Edge]) -> "Diagram":
        return Diagram(self.size, frozenset(edges))


@dataclass(frozen=True)
class SpanningTree:
    """An oriented spanning tree of a diagram, given by one parent edge per non-root point."""

    size: int
    parent_edge: tuple[Edge | None, ...]

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(e for e in self.parent_edge if e is not None)

    def children(self, point: int) -> list[Edge]:
        return sorted(
            (e for e in self.parent_edge if e is not None and e[0] == point),
            key=lambda e: (e[2], e[1]),
        )

    def depth_of(self, point: int) -> int:
        depth = 0
        while point != 0:
            edge = self.parent_edge[point]
            assert edge is not None
            point = edge[0]
            depth += 1
            if depth > self.size:
                raise ValueError("parent edges contain a cycle")
        return depth

    @property
    def depth(self) -> int:
        return max((self.depth_of(p) for p in range(self.size)), default=0)


@dataclass(frozen=True)
class UndirectedStep:
    src: int
    dst: int
    label: Label
    direction: Literal["forward", "backward"]

    @property
    def edge(self) -> Edge:
        if self.direction == "forward":
            return (self.src, self.dst, self.label)
        return (self.dst, self.src, self.label)

    def __str__(self) -> str:
        if self.direction == "forward":
            return f"{self.src} -{self.label}-> {self.dst}"
        return f"{self.src} <-{self.label}- {self.dst}"


# ---------------------------------------------------------------------------
# DSL
# ---------------------------------------------------------------------------

_POINTS = re.compile(r"points\s+(\d+)\s*\Z")
_EDGE = re.compile(r"edge\s+x(\d+)\s+-([A-Za-z_][A-Za-z0-9_]*)->\s+x(\d+)\s*\Z")
_ROOT = re.compile(r"root\s+x(\d+)\s*\Z")


def _statements(text: str) -> Iterable[tuple[int, int, str]]:
    """Yield (line, column, statement); ``#`` starts a comment, ``/`` separates statements."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        for part in line.split("/"):
            stripped = part.strip()
            if stripped:
                yield lineno, col + len(part) - len(part.lstrip()) + 1, stripped
            col += len(part) + 1


def _parse_points_and_edges(text: str, kind: str) -> tuple[int, list[Edge]]:
    size: int | None = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for line, col, stmt in _statements(text):
        if size is None:
            m = _POINTS.match(stmt)
            if not m:
                raise DiagramSyntaxError("expected 'points <n>' header", line, col)
            size = int(m.group(1))
            if size < 1:
                raise DiagramSyntaxError("a diagram needs at least one point", line, col)
            continue
        m = _EDGE.match(stmt)
        if m:
            src, lab, dst = int(m.group(1)), m.group(2), int(m.group(3))
            for idx, group in ((src, 1), (dst, 3)):
                if idx >= size:
                    raise DiagramSyntaxError(
                        f"dangling point reference x{idx} (declared x0..x{size - 1})",
                        line,
                        col + m.start(group),
                    )
            edge = (src, dst, lab)
            if edge in seen:
                warnings.warn(f"line {line}: duplicate edge {stmt!r} ignored", stacklevel=3)
                continue
            seen.add(edge)
            edges.append(edge)
            continue
        m = _ROOT.match(stmt)
        if m and kind == "diagram":
            if int(m.group(1)) != 0:
                raise DiagramSyntaxError("the root is always x0", line, col)
            continue
        raise DiagramSyntaxError(f"cannot parse {stmt!r}", line, col)
    if size is None:
        raise DiagramSyntaxError("empty input: expected 'points <n>'", 1, 1)
    return size, edges


def parse_diagram(text: str) -> Diagram:
    """Parse the diagram DSL.

    >>> parse_diagram("points 2 / edge x0 -a-> x1 / edge x1 -a-> x1").sorted_edges()
    [(0, 1, 'a'), (1, 1, 'a')]
    """
    size, edges = _parse_points_and_edges(text, "diagram")
    return Diagram(size, frozenset(edges))


def parse_frame(text: str) -> Frame:
    size, edges = _parse_points_and_edges(text, "frame")
    return Frame(size, frozenset(edges))


def to_dsl(frame: Frame) -> str:
    lines = [f"points {frame.size}"]
    lines += [f"edge x{s} -{lab}-> x{t}" for s, t, lab in frame.sorted_edges()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# reachability and distances
# ---------------------------------------------------------------------------


def bfs_distances(frame: Frame, start: int, removed: frozenset[int] = frozenset()) -> list[float]:
    dist: list[float] = [math.inf] * frame.size
    if start in removed:
        return dist
    dist[start] = 0
    queue = deque([start])
    nbrs = frame.neighbours
    while queue:
        x = queue.popleft()
        for y in nbrs[x]:
            if y not in removed and dist[y] == math.inf:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def is_rooted(d: Frame) -> bool:
    return all(x != math.inf for x in bfs_distances(d, 0))


def distance(f: Frame, y: int, z: int) -> float:
    """Length of the shortest directed path from ``y`` to ``z``; ``math.inf`` if none."""
    return bfs_distances(f, y)[z]


def _require_rooted(d: Frame) -> list[int]:
    dist = bfs_distances(d, 0)
    if any(x == math.inf for x in dist):
        raise NotRooted("diagram is not rooted: some point is unreachable from x0")
    return [int(x) for x in dist]


def ranks(d: Diagram) -> list[int]:
    return _require_rooted(d)


def rank(d: Diagram, x: int) -> int:
    return _require_rooted(d)[x]


def max_rank(d: Diagram) -> int:
    return max(_require_rooted(d))


def del_set(d: Diagram, x: int) -> frozenset[int]:
    """Points other than ``x`` that every directed path from the root passes through ``x`` to reach."""
    if x == 0:
        raise ValueError("del_set is undefined for the root")
    _require_rooted(d)
    dist = bfs_distances(d, 0, removed=frozenset({x}))
    return frozenset(y for y in d.points if y != x and dist[y] == math.inf)


def reachable_points(d: Frame, start: int = 0) -> list[int]:
    return [p for p, x in enumerate(bfs_distances(d, start)) if x != math.inf]


def restrict_reachable(d: Diagram) -> Diagram:
    """Drop points unreachable from the root, renumbering the rest in order."""
    keep = reachable_points(d)
    index = {old: new for new, old in enumerate(keep)}
    return Diagram(
        len(keep),
        frozenset(
            (index[s], index[t], lab) for s, t, lab in d.edges if s in index and t in index
        ),
    )


# ---------------------------------------------------------------------------
# spanning trees and cycles
# ---------------------------------------------------------------------------


def spanning_tree(d: Diagram) -> SpanningTree:
    """Breadth-first spanning tree with a fixed tie-break.

    Each non-root point takes as parent the edge ``(src, point, label)`` with
    ``rank(src) == rank(point) - 1`` that is least by ``(src, label)``.
    """
    rk = _require_rooted(d)
    parents: list[Edge | None] = [None] * d.size
    for s, t, lab in d.edges:
        if t != 0 and rk[s] == rk[t] - 1:
            cur = parents[t]
            if cur is None or (s, lab) < (cur[0], cur[2]):
                parents[t] = (s, t, lab)
    return SpanningTree(d.size, tuple(parents))


def is_spanning_tree(d: Diagram, tree: SpanningTree) -> bool:
    if tree.size != d.size or tree.parent_edge[0] is not None:
        return False
    for p in range(1, d.size):
        e = tree.parent_edge[p]
        if e is None or e[1] != p or e not in d.edges or e[1] == 0:
            return False
    try:
        tree.depth
    except ValueError:
        return False
    return True


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _inner_edges(d: Frame) -> list[Edge]:
    return [e for e in d.sorted_edges() if e[0] != 0 and e[1] != 0]


def has_inner_cycle(d: Frame) -> bool:
    """True iff the edges among non-root points do not form a multigraph forest.

    Every labelled triple is its own edge identity, so ``x1 -a-> x2`` and
    ``x2 -a-> x1`` already form a cycle, as does any loop.
    """
    uf = _UnionFind(d.size)
    for s, t, _ in _inner_edges(d):
        if s == t or not uf.union(s, t):
            return True
    return False


def inner_cycle_edges(d: Frame) -> list[Edge]:
    """Edges among non-root points that lie on some inner cycle."""
    inner = _inner_edges(d)
    out = []
    for e in inner:
        if e[0] == e[1]:
            out.append(e)
            continue
        uf = _UnionFind(d.size)
        for other in inner:
            if other != e:
                uf.union(other[0], other[1])
        if uf.find(e[0]) == uf.find(e[1]):
            out.append(e)
    return out


def delete_edge(d: Diagram, e: Edge) -> Diagram:
    if e not in d.edges:
        raise EdgeAbsent(f"edge {e} is not in the diagram")
    return d.with_edges(d.edges - {e})


def add_edge(d: Diagram, e: Edge) -> Diagram:
    return d.with_edges(d.edges | {e})


def undirected_path(
    f: Frame, y: int, z: int, avoid: Iterable[int] = ()
) -> list[UndirectedStep] | None:
    """Shortest path from ``y`` to ``z`` over edges and reversed edges.

    Points in ``avoid`` may not be visited, except that ``y`` and ``z``
    themselves are always allowed. Returns ``[]`` when ``y == z``.
    """
    if y == z:
        return []
    blocked = set(avoid) - {y, z}
    prev: dict[int, UndirectedStep] = {}
    seen = {y}
    queue = deque([y])
    while queue:
        x = queue.popleft()
        steps = [UndirectedStep(x, t, lab, "forward") for lab in f.labels for t in f.successors(x, lab)]
        steps += [UndirectedStep(x, s, lab, "backward") for lab in f.labels for s in f.predecessors(x, lab)]
        for step in steps:
            nxt = step.dst
            if nxt in seen or nxt in blocked:
                continue
            seen.add(nxt)
            prev[nxt] = step
            if nxt == z:
                path = []
                cur = z
                while cur != y:
                    path.append(prev[cur])
                    cur = prev[cur].src
                return path[::-1]
            queue.append(nxt)
    return None
