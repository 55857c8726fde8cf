"""Chase-based entailment between diagrams, minimality, minimization and the dichotomy verdict.

Chase points are tuples of rule points. The origin is ``()``; gluing a copy
of the rule at an active point ``a`` creates ``a + (y,)`` for each non-root
rule point ``y``. A point's creation round is its length.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterator

from .diagram import (
    Diagram,
    Edge,
    Frame,
    delete_edge,
    has_inner_cycle,
    is_rooted,
    max_rank,
    restrict_reachable,
    to_dsl,
)
from .errors import NotRooted
from .semantics import satisfies_e, satisfies_e_globally

Path = tuple[int, ...]

PROPERTIES = ("I-i", "I-ii", "I-iii", "I-iv", "I-v", "I-vi", "I-vii", "I-viii", "I-ix", "I-x")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ChaseState:
    """Result of running a diagram as a tuple-generating rule for some rounds.

    ``paths[i]`` is the chase point with frame index ``i``; indices are sorted
    by (creation round, path), so the origin is 0 and after at least one round
    the copy of rule point ``x_i`` glued at the origin has index ``i``.
    """

    frame: Frame
    paths: tuple[Path, ...]
    active: frozenset[int]
    round: int
    origin: int = 0

    def index(self, path: Path) -> int:
        return self.paths.index(path)

    def created_in(self, point: int) -> int:
        return len(self.paths[point])


def chase(rule: Diagram, rounds: int) -> ChaseState:
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    paths: list[Path] = [()]
    active: list[Path] = [()]
    edges: set[tuple[Path, Path, str]] = set()
    inner = [y for y in rule.points if y != 0]
    for _ in range(rounds):
        fresh: list[Path] = []
        for a in active:
            place = lambda x, a=a: a if x == 0 else a + (x,)  # noqa: E731
            fresh.extend(a + (y,) for y in inner)
            edges.update((place(s), place(t), lab) for s, t, lab in rule.edges)
        paths.extend(fresh)
        active = fresh
    ordered = sorted(paths, key=lambda p: (len(p), p))
    index = {p: i for i, p in enumerate(ordered)}
    frame = Frame(
        len(ordered),
        frozenset((index[s], index[t], lab) for s, t, lab in edges),
        tuple("c" + "".join(f".{x}" for x in p) if p else "c0" for p in ordered),
    )
    return ChaseState(frame, tuple(ordered), frozenset(index[p] for p in active), rounds)


def has_root_loop(d: Diagram) -> bool:
    return any(s == 0 and t == 0 for s, t, _ in d.edges)


def chase_depth(d1: Diagram, d2: Diagram) -> int:
    """Rounds of ``d1`` needed to decide entailment of ``d2``.

    Images of ``d2`` stay within ``max_rank(d2)`` of the origin. A root loop of
    the rule adds a loop at each active point only when that point is glued
    on, one round after it was created, hence the extra round.
    """
    r = max_rank(d2)
    return r + 1 if has_root_loop(d1) else r


def entails_locally(d1: Diagram, d2: Diagram) -> bool:
    """Whether e^{d1}(x) implies e^{d2}(x): a root-preserving homomorphism d2 -> d1."""
    return satisfies_e(d1, 0, d2) is not None


def entails_globally(d1: Diagram, d2: Diagram) -> bool:
    """Whether every frame where e^{d1} holds everywhere also satisfies e^{d2} everywhere."""
    if not is_rooted(d2):
        raise NotRooted("the entailed diagram must be rooted")
    state = chase(d1, chase_depth(d1, d2))
    return satisfies_e(state.frame, state.origin, d2) is not None


def is_locally_minimal(d: Diagram) -> bool:
    return not any(entails_locally(delete_edge(d, e), d) for e in d.sorted_edges())


def is_globally_minimal(d: Diagram) -> bool:
    return not any(entails_globally(delete_edge(d, e), d) for e in d.sorted_edges())


@dataclass(frozen=True)
class Step:
    edge: Edge
    accepted: bool
    reason: str
    result_size: int

    def to_json(self) -> dict:
        return {"edge": list(self.edge), "accepted": self.accepted, "reason": self.reason, "points": self.result_size}


def try_delete(d: Diagram, e: Edge) -> tuple[Diagram | None, str]:
    """Attempt one deletion; return the replacement diagram or None with a reason."""
    smaller = delete_edge(d, e)
    if is_rooted(smaller):
        if entails_globally(smaller, d):
            return smaller, "entails"
        return None, "does-not-entail"
    restricted = restrict_reachable(smaller)
    if entails_globally(restricted, d) and entails_globally(d, restricted):
        return restricted, "entails-after-restriction"
    return None, "restriction-not-equivalent"


def minimize(d: Diagram, trace: list[Step] | None = None) -> Diagram:
    """Greedy deletion in (src, dst, label) order, restarting after every accepted deletion."""
    if not is_rooted(d):
        raise NotRooted("minimize needs a rooted diagram")
    changed = True
    while changed:
        changed = False
        for e in d.sorted_edges():
            nxt, reason = try_delete(d, e)
            if trace is not None:
                trace.append(Step(e, nxt is not None, reason, (nxt or d).size))
            if nxt is not None:
                d = nxt
                changed = True
                break
    return d


def minimize_all_orders(d: Diagram, max_edges: int = 7) -> set[Diagram]:
    """Every diagram reachable as a fixpoint of some deletion order (small inputs only)."""
    if not is_rooted(d):
        raise NotRooted("minimize needs a rooted diagram")
    if len(d.edges) > max_edges:
        raise ValueError(f"all-orders exploration is limited to {max_edges} edges")
    results: set[Diagram] = set()
    seen: set[Diagram] = set()
    stack = [d]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        moves = [nxt for e in cur.sorted_edges() if (nxt := try_delete(cur, e)[0]) is not None]
        if not moves:
            results.add(cur)
        stack.extend(moves)
    return results


@dataclass(frozen=True)
class Verdict:
    minimal_diagram: Diagram
    inner_cycle: bool
    classification: str
    property_table: dict[str, str] = field(hash=False)
    steps: tuple[Step, ...] = field(default=(), hash=False, compare=False)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "minimal": to_dsl(self.minimal_diagram),
            "inner_cycle": self.inner_cycle,
            "class": self.classification,
            "properties": dict(self.property_table),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def classify(d: Diagram) -> Verdict:
    """Minimize, then test the result for an inner cycle."""
    steps: list[Step] = []
    m = minimize(d, trace=steps)
    cyc = has_inner_cycle(m)
    status = "fail" if cyc else "hold"
    return Verdict(
        m,
        cyc,
        "NEGATIVE" if cyc else "POSITIVE",
        {p: status for p in PROPERTIES},
        tuple(steps),
    )


# ---------------------------------------------------------------------------
# countermodels
# ---------------------------------------------------------------------------


def random_frame(rng: random.Random, size: int, labels: tuple[str, ...], density: float) -> Frame:
    edges = frozenset(
        (s, t, lab)
        for s in range(size)
        for t in range(size)
        for lab in labels
        if rng.random() < density
    )
    return Frame(size, edges)


def closed_chase(d1: Diagram, rounds: int) -> Frame:
    """The chase of ``d1`` with every final active point sent to a point looping on all labels."""
    state = chase(d1, rounds)
    top = state.frame.size
    labels = d1.labels or ("a",)
    edges = set(state.frame.edges)
    edges |= {(top, top, lab) for lab in labels}
    edges |= {(a, top, lab) for a in state.active for lab in labels}
    return Frame(top + 1, frozenset(edges))


def candidate_frames(d1: Diagram, d2: Diagram, count: int, seed: int, max_size: int = 5) -> Iterator[Frame]:
    rng = random.Random(seed)
    if is_rooted(d2):
        yield closed_chase(d1, chase_depth(d1, d2))
    labels = tuple(sorted(set(d1.labels) | set(d2.labels))) or ("a",)
    for _ in range(count):
        yield random_frame(rng, rng.randint(1, max_size), labels, rng.choice((0.3, 0.5, 0.7, 0.85)))


def find_countermodel(d1: Diagram, d2: Diagram, count: int = 500, seed: int = 0, max_size: int = 5) -> Frame | None:
    """A frame satisfying e^{d1} everywhere but e^{d2} somewhere not, among the candidates."""
    for f in candidate_frames(d1, d2, count, seed, max_size):
        if satisfies_e_globally(f, d1) and not satisfies_e_globally(f, d2):
            return f
    return None


def random_diagram(rng: random.Random, max_points: int = 4, labels: tuple[str, ...] = ("a",), max_edges: int = 6) -> Diagram:
    """A rooted random diagram: a random tree from the root plus random extra edges."""
    n = rng.randint(1, max_points)
    edges = {(rng.randrange(i), i, rng.choice(labels)) for i in range(1, n)}
    extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(extra):
        edges.add((rng.randrange(n), rng.randrange(n), rng.choice(labels)))
    return Diagram(n, frozenset(edges))

