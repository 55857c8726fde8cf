"""The frame pair built from a minimal diagram with an inner cycle, its verification, and pseudoproducts.

Points of ``f_plus`` are the chase points of the diagram (origin ``w0`` first,
then by creation round) followed by the reflexive point ``o``. The embedding
``g`` sends ``x_i`` to index ``i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .axioms import AxiomSpec, build_eta, reduced_tree
from .diagram import (
    Diagram,
    Edge,
    Frame,
    SpanningTree,
    has_inner_cycle,
    inner_cycle_edges,
    is_rooted,
    max_rank,
    spanning_tree,
    undirected_path,
)
from .errors import InternalDisagreement, PreconditionError
from .graphs import Colouring, Graph, chromatic_number, complete_graph, is_colouring
from .minimizer import chase, is_globally_minimal
from .semantics import (
    Valuation,
    find_isomorphism,
    gamma_semantic,
    guard_region,
    is_homomorphism,
    iter_homs,
    satisfies_e,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ConstructionBundle:
    diagram: Diagram
    f_plus: Frame
    g: tuple[int, ...]
    reflexive_point: int
    rounds: int
    f_minus: Frame | None = None
    selected: Edge | None = None
    root: int = 0

    @property
    def b(self) -> int:
        return self.f_plus.size

    @property
    def deleted_edge(self) -> Edge:
        """The selected diagram edge carried into ``f_plus`` by ``g``."""
        if self.selected is None:
            raise ValueError("no edge selected yet")
        s, t, lab = self.selected
        return (self.g[s], self.g[t], lab)

    def name(self, point: int) -> str:
        return self.f_plus.name(point)


def _close_with_reflexive(base: Frame, feeders: Sequence[int], labels: Sequence[str], names: Sequence[str]) -> tuple[Frame, int]:
    top = base.size
    edges = set(base.edges)
    edges |= {(top, top, lab) for lab in labels}
    edges |= {(a, top, lab) for a in feeders for lab in labels}
    return Frame(top + 1, frozenset(edges), tuple(names) + ("o",)), top


def build_f_plus(d: Diagram, check_minimal: bool = True) -> ConstructionBundle:
    """Chase the diagram ``max_rank`` rounds, then feed the last frontier into a reflexive point."""
    if not is_rooted(d):
        raise PreconditionError("not-rooted", "the diagram is not rooted")
    if not has_inner_cycle(d):
        raise PreconditionError("no-inner-cycle", "the diagram has no inner cycle")
    if check_minimal and not is_globally_minimal(d):
        raise PreconditionError("not-minimal", "the diagram is not globally minimal")
    r = max_rank(d)
    state = chase(d, r)
    names = [f"w{i}" for i in state.frame.points]
    frame, top = _close_with_reflexive(state.frame, sorted(state.active), d.labels, names)
    g = tuple(range(d.size))
    for i in range(1, d.size):
        assert state.paths[g[i]] == (i,)
    return ConstructionBundle(d, frame, g, top, r)


def build_naive_bundle(d: Diagram, tree: SpanningTree | None = None) -> ConstructionBundle:
    """The diagram itself plus a reflexive point fed from every non-root point, without chasing."""
    names = [f"w{i}" for i in d.points]
    frame, top = _close_with_reflexive(d.as_frame(), range(1, d.size), d.labels, names)
    bundle = ConstructionBundle(d, frame, tuple(range(d.size)), top, 0)
    return select_edge_and_build_f_minus(bundle, tree)


def select_edge(d: Diagram, tree: SpanningTree) -> Edge:
    """Least inner-cycle edge outside the tree, ordered by (target, source, label)."""
    cands = [e for e in inner_cycle_edges(d) if e not in tree.edges]
    if not cands:
        raise PreconditionError("no-inner-cycle", "every inner-cycle edge lies on the tree")
    return min(cands, key=lambda e: (e[1], e[0], e[2]))


def select_edge_and_build_f_minus(
    bundle: ConstructionBundle, tree: SpanningTree | None = None
) -> ConstructionBundle:
    d = bundle.diagram
    tree = tree or spanning_tree(d)
    sel = select_edge(d, tree)
    s, t, lab = sel
    image = (bundle.g[s], bundle.g[t], lab)
    f_minus = bundle.f_plus.with_edges(bundle.f_plus.edges - {image})
    return ConstructionBundle(
        d, bundle.f_plus, bundle.g, bundle.reflexive_point, bundle.rounds, f_minus, sel, bundle.root
    )


def build_bundle(d: Diagram, tree: SpanningTree | None = None, check_minimal: bool = True) -> ConstructionBundle:
    return select_edge_and_build_f_minus(build_f_plus(d, check_minimal), tree)


# ---------------------------------------------------------------------------
# verification of the six conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"condition": self.name, "passed": self.passed, **self.detail}


@dataclass(frozen=True)
class Rank1Report:
    conditions: tuple[ConditionResult, ...]
    hom_count: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "passed": self.passed,
            "homomorphisms": self.hom_count,
            "conditions": [c.to_json() for c in self.conditions],
        }


def _named(frame: Frame, h: Sequence[int] | None) -> dict[str, str] | None:
    if h is None:
        return None
    return {f"x{i}": frame.name(x) for i, x in enumerate(h)}


def verify_rank1(d: Diagram, bundle: ConstructionBundle) -> Rank1Report:
    fp, fm = bundle.f_plus, bundle.f_minus
    if fm is None or bundle.selected is None:
        raise ValueError("bundle has no selected edge")
    g = bundle.g
    w0 = bundle.root
    deleted = bundle.deleted_edge
    out: list[ConditionResult] = []

    ok_i = (
        deleted in fp.edges
        and fm.edges == fp.edges - {deleted}
        and fm.size == fp.size
        and len(set(g)) == len(g)
        and g[0] == w0
        and is_homomorphism(d, fp, g)
    )
    out.append(ConditionResult("C-i", ok_i, {"deleted": [fp.name(deleted[0]), fp.name(deleted[1]), deleted[2]]}))

    w_minus = satisfies_e(fm, w0, d)
    out.append(ConditionResult("C-ii", w_minus is None, {"witness": _named(fm, w_minus)}))

    w_plus = satisfies_e(fp, w0, d)
    out.append(ConditionResult("C-iii", w_plus is not None, {"witness": _named(fp, w_plus)}))

    avoid = {w0} | (set(fp.points) - set(g))
    path = undirected_path(fm, deleted[0], deleted[1], avoid)
    out.append(
        ConditionResult(
            "C-iv",
            path is not None,
            {
                "path": None
                if path is None
                else [
                    f"{fm.name(s.src)} -{s.label}-> {fm.name(s.dst)}"
                    if s.direction == "forward"
                    else f"{fm.name(s.src)} <-{s.label}- {fm.name(s.dst)}"
                    for s in path
                ]
            },
        )
    )

    g_image = set(g)
    bad: list[dict] = []
    homs = list(iter_homs(d, fp, {0: w0}))
    labels = fp.labels
    for h in homs:
        if set(h) != g_image:
            bad.append({"hom": _named(fp, h), "problem": "image differs from g"})
            continue
        for i in d.points:
            for j in d.points:
                for lab in labels:
                    if fp.has_edge(h[i], h[j], lab) and not d.has_edge(i, j, lab):
                        bad.append({"hom": _named(fp, h), "problem": f"x{i} -{lab}-> x{j} not in diagram"})
    out.append(ConditionResult("C-v", not bad, {"homomorphisms": len(homs), "violations": bad}))

    failing = [fm.name(w) for w in fm.points if w != w0 and satisfies_e(fm, w, d) is None]
    out.append(ConditionResult("C-vi", not failing, {"failing_points": failing}))
    return Rank1Report(tuple(out), len(homs))


# ---------------------------------------------------------------------------
# pseudoproducts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pseudoproduct:
    frame: Frame
    pr: tuple[int, ...]
    h: tuple[int | None, ...]
    order: int

    def index(self, y: int, v: int) -> int:
        return 0 if y == 0 else 1 + (y - 1) * self.order + v


def _graph_pairs(graph: Graph) -> set[tuple[int, int]]:
    return {p for u, v in graph.edges for p in ((u, v), (v, u))}


def pseudoproduct(bundle: ConstructionBundle, graph: Graph) -> Pseudoproduct:
    """Layer the non-root points over the graph and re-route the deleted edge along graph edges.

    The edge relation is built clause by clause and independently from the
    projections; any difference raises :class:`InternalDisagreement`.
    """
    fp, fm = bundle.f_plus, bundle.f_minus
    if fm is None:
        raise ValueError("bundle has no selected edge")
    V = graph.order
    b = fp.size
    size = 1 + (b - 1) * V
    idx = lambda y, v: 0 if y == 0 else 1 + (y - 1) * V + v  # noqa: E731
    pr = tuple([0] + [y for y in range(1, b) for _ in range(V)])
    h: tuple[int | None, ...] = tuple([None] + [v for _ in range(1, b) for v in range(V)])
    gpairs = _graph_pairs(graph)
    xd, xdp, lam = bundle.deleted_edge

    clauses: set[Edge] = set()
    for s, t, lab in fm.edges:
        if s == 0 and t == 0:
            clauses.add((0, 0, lab))
        elif s == 0:
            clauses.update((0, idx(t, v), lab) for v in range(V))
        elif t == 0:
            clauses.update((idx(s, v), 0, lab) for v in range(V))
        else:
            clauses.update((idx(s, v), idx(t, v), lab) for v in range(V))
    clauses.update((idx(xd, v1), idx(xdp, v2), lam) for v1, v2 in gpairs)

    projected: set[Edge] = set()
    for a in range(size):
        for c in range(size):
            for lab in fp.labels:
                if fm.has_edge(pr[a], pr[c], lab):
                    if h[a] == h[c] or h[a] is None or h[c] is None:
                        projected.add((a, c, lab))
                elif fp.has_edge(pr[a], pr[c], lab):
                    if h[a] is not None and h[c] is not None and (h[a], h[c]) in gpairs:
                        projected.add((a, c, lab))
    if clauses != projected:
        raise InternalDisagreement(
            f"clause and projection definitions differ on {sorted(clauses ^ projected)[:5]}"
        )
    names = ["w0"] + [f"{fp.name(y)}.v{v}" for y in range(1, b) for v in range(V)]
    return Pseudoproduct(Frame(size, frozenset(clauses), tuple(names)), pr, h, V)


def k1_isomorphism(bundle: ConstructionBundle) -> tuple[int, ...] | None:
    """An isomorphism from ``f_minus`` onto the pseudoproduct with the one-vertex graph, found by search."""
    pp = pseudoproduct(bundle, complete_graph(1))
    return find_isomorphism(bundle.f_minus, pp.frame, {0: 0})


def lifted_map(bundle: ConstructionBundle, hi: Pseudoproduct, lo: Pseudoproduct, rho: Sequence[int]) -> tuple[int, ...]:
    """The map between pseudoproducts induced by a vertex map ``rho``."""
    return tuple(0 if hi.pr[p] == 0 else lo.index(hi.pr[p], rho[hi.h[p]]) for p in range(hi.frame.size))


# ---------------------------------------------------------------------------
# colouring experiments
# ---------------------------------------------------------------------------


def refuting_valuation(bundle: ConstructionBundle, graph: Graph, colouring: Colouring, n_colours: int | None = None) -> tuple[Valuation, int]:
    """Valuation built from a proper colouring, and the number of variables m = N(b-1)+1.

    ``p_0`` becomes variable 1 and ``p_i^c`` becomes variable ``1 + (i-1)N + c``.
    """
    if not is_colouring(graph, colouring):
        raise ValueError("not a proper colouring")
    N = n_colours if n_colours is not None else max(colouring, default=1)
    if any(not 1 <= c <= N for c in colouring):
        raise ValueError("colours must lie in 1..N")
    V, b = graph.order, bundle.b
    sets: dict[int, frozenset[int]] = {1: frozenset({0})}
    for i in range(1, b):
        for c in range(1, N + 1):
            sets[1 + (i - 1) * N + c] = frozenset(
                1 + (i - 1) * V + v for v in range(V) if colouring[v] == c
            )
    return Valuation(sets), N * (b - 1) + 1


@dataclass(frozen=True)
class C1Report:
    holds: bool
    samples: int
    points: int
    active_at_root: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "condition": "C1",
            "holds": self.holds,
            "samples": self.samples,
            "points": self.points,
            "guard_active_at_w0": self.active_at_root,
            "counterexample": self.counterexample,
        }


def _draw_extent(rng: np.random.Generator, size: int) -> frozenset[int]:
    mode = rng.random()
    if mode < 0.3:
        mask = np.ones(size, dtype=bool)
    elif mode < 0.6:
        mask = np.ones(size, dtype=bool)
        mask[rng.choice(size, size=min(size, int(rng.integers(1, 3))), replace=False)] = False
    else:
        mask = rng.random(size) < rng.uniform(0.7, 1.0)
    return frozenset(np.flatnonzero(mask).tolist())


def sample_k_generated(rng: np.random.Generator, size: int, k: int, m: int) -> Valuation:
    """A valuation with at most ``k`` nonempty variables among ``p_1..p_m``, biased towards dense extents."""
    chosen = sorted(rng.choice(np.arange(1, m + 1), size=min(k, m), replace=False).tolist())
    return Valuation({int(var): _draw_extent(rng, size) for var in chosen})


def c1_sample_check(
    bundle: ConstructionBundle,
    graph: Graph,
    k: int,
    m: int,
    samples: int,
    seed: int,
    spec: AxiomSpec | None = None,
) -> C1Report:
    """Sample k-generated valuations on the pseudoproduct and check the m-colour axiom at every point."""
    bound = 2 ** (bundle.b * k)
    chi = chromatic_number(graph)
    if chi is not None and chi <= bound:
        raise PreconditionError(
            "colourable", f"the graph has chromatic number {chi}, not above 2^(bk) = {bound}"
        )
    spec = spec or AxiomSpec.for_diagram(bundle.diagram)
    tree = reduced_tree(build_eta(spec))
    pp = pseudoproduct(bundle, graph)
    f = pp.frame
    rng = np.random.default_rng(seed)
    active = 0
    root_region = guard_region(f, 0, spec.labels, spec.guard_depth)
    for n in range(samples):
        v = sample_k_generated(rng, f.size, k, m)
        covered = frozenset().union(*(v(i) for i in range(1, m + 1)))
        active += root_region <= covered
        for w in f.points:
            if not gamma_semantic(f, w, spec, m, v, tree):
                return C1Report(
                    False, n + 1, f.size, active,
                    {"point": f.name(w), "valuation": v.to_json()},
                )
    return C1Report(True, samples, f.size, active)


@dataclass(frozen=True)
class Complete1Report:
    rows: tuple[dict, ...]

    @property
    def holds(self) -> bool:
        return all(r["root_refuted"] and r["others_satisfied"] for r in self.rows)

    def to_json(self) -> dict:
        return {"schema": SCHEMA_VERSION, "holds": self.holds, "alphas": list(self.rows)}


def verify_complete1(d: Diagram, bundle: ConstructionBundle, alpha_max: int) -> Complete1Report:
    """For each alpha, e^D fails at w0 of the pseudoproduct with K_alpha and holds at every other point."""
    if alpha_max < 1:
        raise ValueError("alpha_max must be at least 1")
    rows = []
    for alpha in range(1, alpha_max + 1):
        pp = pseudoproduct(bundle, complete_graph(alpha))
        root = satisfies_e(pp.frame, 0, d)
        others = [pp.frame.name(w) for w in pp.frame.points if w != 0 and satisfies_e(pp.frame, w, d) is None]
        rows.append(
            {"alpha": alpha, "points": pp.frame.size, "root_refuted": root is None, "others_satisfied": not others, "failing": others}
        )
    return Complete1Report(tuple(rows))


# ---------------------------------------------------------------------------
# the doubled frame used in the colouring argument
# ---------------------------------------------------------------------------


def dagger_frame(bundle: ConstructionBundle, pp: Pseudoproduct) -> tuple[Frame, tuple[int, ...]]:
    """The pseudoproduct with a copy of ``f_plus`` glued at w0.

    Returns the frame and the index of each ``f_plus`` point inside it.
    """
    fp = bundle.f_plus
    base = pp.frame.size
    pos = tuple(0 if y == 0 else base + y - 1 for y in fp.points)
    edges = set(pp.frame.edges) | {(pos[s], pos[t], lab) for s, t, lab in fp.edges}
    names = pp.frame.names + tuple(f"{fp.name(y)}'" for y in range(1, fp.size))
    return Frame(base + fp.size - 1, frozenset(edges), names), pos


def dagger_relation(bundle: ConstructionBundle, pp: Pseudoproduct, pos: Sequence[int], v1: int, v2: int) -> set[tuple[int, int]]:
    z = {(p, p) for p in pp.frame.points}
    for y in range(1, bundle.b):
        z.add((pos[y], pp.index(y, v1)))
        z.add((pos[y], pp.index(y, v2)))
    return z


def report_json(obj: Any) -> str:
    return json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj, sort_keys=True, indent=2)

