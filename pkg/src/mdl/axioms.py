"""The hybrid translation of a diagram, the axioms generated from it and reduced syntactical trees."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .diagram import Diagram, Edge, Frame, SpanningTree, is_spanning_tree, spanning_tree
from .errors import ExpansionCapExceeded
from .formulas import And, Box, Diamond, Formula, Implies, Nominal, Or, Var, conj, disj, substitute

EXPANSION_CAP = 100_000


@dataclass(frozen=True)
class AxiomSpec:
    """Everything needed to generate the axioms of one diagram.

    ``labels`` is the alphabet used for the guard; it defaults to the labels
    occurring in the diagram.
    """

    diagram: Diagram
    tree: SpanningTree
    prune_redundant: bool = True
    guard_depth: int | None = None
    labels: tuple[str, ...] | None = None
    depth: int = field(init=False)

    def __post_init__(self):
        if not is_spanning_tree(self.diagram, self.tree):
            raise ValueError("tree is not a spanning tree of the diagram")
        object.__setattr__(self, "depth", self.tree.depth)
        if self.guard_depth is None:
            object.__setattr__(self, "guard_depth", self.depth)
        if self.guard_depth < 0:
            raise ValueError("guard_depth must be non-negative")
        if self.labels is None:
            object.__setattr__(self, "labels", self.diagram.labels)
        else:
            object.__setattr__(self, "labels", tuple(sorted(set(self.labels))))

    @classmethod
    def for_diagram(cls, d: Diagram, **kwargs) -> "AxiomSpec":
        return cls(d, spanning_tree(d), **kwargs)

    @property
    def n_points(self) -> int:
        return self.diagram.size


def build_chi(d: Diagram, i: int) -> Formula:
    """``j_i`` conjoined with ``<l> j_k`` for every edge ``(i, k, l)``, ordered by (label, target)."""
    out = sorted((lab, t) for s, t, lab in d.edges if s == i)
    return conj([Nominal(i)] + [Diamond(lab, Nominal(t)) for lab, t in out])


def build_eta_parts(spec: AxiomSpec) -> dict[int, Formula]:
    """The formulas eta_i for every point, built from the leaves of the tree upwards."""
    d, tree = spec.diagram, spec.tree
    etas: dict[int, Formula] = {}
    order = sorted(d.points, key=tree.depth_of, reverse=True)
    for i in order:
        kids = tree.children(i)
        skip = {(lab, t) for _, t, lab in kids} if spec.prune_redundant else set()
        out = sorted((lab, t) for s, t, lab in d.edges if s == i)
        parts: list[Formula] = [Nominal(i)]
        parts += [Diamond(lab, Nominal(t)) for lab, t in out if (lab, t) not in skip]
        parts += [Diamond(lab, etas[t]) for _, t, lab in kids]
        etas[i] = conj(parts)
    return etas


def build_eta(spec: AxiomSpec) -> Formula:
    return build_eta_parts(spec)[0]


def colour_maps(n_points: int, n_colours: int):
    """All maps {0..n} -> {0..m-1} in lexicographic order."""
    return itertools.product(range(n_colours), repeat=n_points)


def gamma_psi(spec: AxiomSpec, psi: Sequence[Formula], cap: int = EXPANSION_CAP) -> Formula:
    """Disjunction of eta with psi[kappa(l)] substituted for each nominal j_l, over every kappa."""
    if not psi:
        raise ValueError("psi must be nonempty")
    required = len(psi) ** spec.n_points
    if required > cap:
        raise ExpansionCapExceeded(required, cap)
    eta = build_eta(spec)
    return disj(
        substitute(eta, {i: psi[c] for i, c in enumerate(kappa)})
        for kappa in colour_maps(spec.n_points, len(psi))
    )


def label_strings(labels: Sequence[str], max_len: int) -> list[tuple[str, ...]]:
    """Every label string of length at most ``max_len``, shortest first, then lexicographic."""
    out: list[tuple[str, ...]] = []
    for n in range(max_len + 1):
        out.extend(itertools.product(sorted(labels), repeat=n))
    return out


def boxes(sigma: Sequence[str], phi: Formula) -> Formula:
    for lab in reversed(sigma):
        phi = Box(lab, phi)
    return phi


def colour_cover(m: int) -> Formula:
    return disj(Var(i) for i in range(1, m + 1))


def guard(spec: AxiomSpec, m: int) -> Formula:
    cover = colour_cover(m)
    return conj(boxes(sigma, cover) for sigma in label_strings(spec.labels, spec.guard_depth))


def gamma_m(spec: AxiomSpec, m: int, cap: int = EXPANSION_CAP) -> Formula:
    if m < 1:
        raise ValueError("m must be at least 1")
    body = gamma_psi(spec, [Var(i) for i in range(1, m + 1)], cap=cap)
    return Implies(guard(spec, m), body)


# ---------------------------------------------------------------------------
# reduced syntactical trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabelledTree:
    """A finite tree rooted at node 0 whose nodes carry sets of diagram points.

    Nodes are numbered in preorder, children visited in the order they were
    created, so every parent precedes its children.
    """

    size: int
    edges: tuple[Edge, ...]
    label_map: tuple[frozenset[int], ...]

    @property
    def root(self) -> int:
        return 0

    @property
    def frame(self) -> Frame:
        return Frame(self.size, frozenset(self.edges))

    def children(self, node: int) -> list[tuple[str, int]]:
        return [(lab, t) for s, t, lab in self.edges if s == node]

    def parent(self, node: int) -> tuple[int, str] | None:
        for s, t, lab in self.edges:
            if t == node:
                return s, lab
        return None

    def all_singletons(self) -> bool:
        return all(len(lbl) == 1 for lbl in self.label_map)

    def point_map(self) -> tuple[int, ...]:
        if not self.all_singletons():
            raise ValueError("some node label is not a singleton")
        return tuple(next(iter(lbl)) for lbl in self.label_map)


class _Node:
    __slots__ = ("labels", "kids")

    def __init__(self, labels: frozenset[int], kids: list[tuple[str, "_Node"]]):
        self.labels = labels
        self.kids = kids


def _build_node(phi: Formula) -> _Node:
    if isinstance(phi, Nominal):
        return _Node(frozenset({phi.index}), [])
    if isinstance(phi, And):
        parts = [_build_node(c) for c in phi.items]
        return _Node(
            frozenset().union(*(p.labels for p in parts)),
            [kid for p in parts for kid in p.kids],
        )
    if isinstance(phi, Diamond):
        return _Node(frozenset(), [(phi.label, _build_node(phi.sub))])
    raise TypeError(
        f"reduced trees are defined for conjunctions, diamonds and nominals only, got {type(phi).__name__}"
    )


def reduced_tree(phi: Formula) -> LabelledTree:
    root = _build_node(phi)
    labels: list[frozenset[int]] = []
    edges: list[Edge] = []

    def visit(node: _Node) -> int:
        me = len(labels)
        labels.append(node.labels)
        for lab, kid in node.kids:
            edges.append((me, visit(kid), lab))
        return me

    visit(root)
    return LabelledTree(len(labels), tuple(edges), tuple(labels))


def is_monotone_map(tree: LabelledTree, d: Diagram, root_to_root: bool = True) -> bool:
    """Whether the singleton labels of ``tree`` define an edge-preserving map into ``d``."""
    if not tree.all_singletons():
        return False
    f = tree.point_map()
    if any(not 0 <= x < d.size for x in f):
        return False
    if root_to_root and f[0] != 0:
        return False
    return all(d.has_edge(f[s], f[t], lab) for s, t, lab in tree.edges)


def disjunct_count(spec: AxiomSpec, m: int) -> int:
    return m ** spec.n_points


def gamma_disjuncts(phi: Formula) -> tuple[Formula, ...]:
    """The disjuncts of the consequent of a generated axiom (or of a bare disjunction)."""
    if isinstance(phi, Implies):
        phi = phi.right
    return phi.items if isinstance(phi, Or) else (phi,)
