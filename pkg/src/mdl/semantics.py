"""Kripke semantics: model checking, validity search, homomorphisms and related predicates.

Formulas are evaluated for a whole batch of valuations at once. A batch is a
mapping from variable index to a boolean array of shape ``(batch, |W|)``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .axioms import AxiomSpec, LabelledTree, build_eta, reduced_tree
from .diagram import Frame
from .errors import BudgetExceeded
from .formulas import And, Bot, Box, Diamond, Formula, Implies, Nominal, Not, Or, Var, variables

VALUATION_BUDGET = 2**24
_CHUNK = 1 << 14

HomAssignment = tuple[int, ...]
"""Image of each source point, indexed by source point."""


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Valuation:
    """Variable index to the set of points where it holds; unmapped variables are empty."""

    sets: Mapping[int, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(
            self, "sets", {int(k): frozenset(v) for k, v in sorted(self.sets.items())}
        )

    def __call__(self, var: int) -> frozenset[int]:
        return self.sets.get(var, frozenset())

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        strip = lambda v: {k: s for k, s in v.sets.items() if s}  # noqa: E731
        return strip(self) == strip(other)

    def __hash__(self):
        return hash(tuple(sorted((k, tuple(sorted(s))) for k, s in self.sets.items() if s)))

    @property
    def nonempty_count(self) -> int:
        return sum(1 for s in self.sets.values() if s)

    def check(self, frame: Frame) -> None:
        for k, pts in self.sets.items():
            if any(not 0 <= p < frame.size for p in pts):
                raise ValueError(f"valuation of p{k} leaves the frame")

    def to_json(self) -> dict[str, list[int]]:
        return {f"p{k}": sorted(v) for k, v in self.sets.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, Sequence[int]] | str) -> "Valuation":
        if isinstance(data, str):
            data = json.loads(data)
        sets = {}
        for key, pts in data.items():
            if not (key.startswith("p") and key[1:].isdigit()):
                raise ValueError(f"bad variable name {key!r}")
            sets[int(key[1:])] = frozenset(int(p) for p in pts)
        return cls(sets)


def _batch_from_valuation(v: Valuation, frame: Frame, vars_: Iterable[int]) -> dict[int, np.ndarray]:
    out = {}
    for k in vars_:
        row = np.zeros((1, frame.size), dtype=bool)
        row[0, sorted(v(k))] = True
        out[k] = row
    return out


def _valuation_from_batch(batch: Mapping[int, np.ndarray], row: int) -> Valuation:
    return Valuation({k: frozenset(np.flatnonzero(arr[row]).tolist()) for k, arr in batch.items()})


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _relation_matrices(frame: Frame) -> dict[str, np.ndarray]:
    cache = frame.__dict__.get("_mdl_rel")
    if cache is None:
        cache = {}
        for s, t, lab in frame.edges:
            cache.setdefault(lab, np.zeros((frame.size, frame.size), dtype=np.float32))[s, t] = 1.0
        # Frame is frozen; cached data goes straight into the instance dict
        frame.__dict__["_mdl_rel"] = cache
    return cache


def eval_batch(frame: Frame, batch: Mapping[int, np.ndarray], phi: Formula) -> np.ndarray:
    """Truth of ``phi`` at every point under every valuation of the batch, shape ``(B, |W|)``."""
    rel = _relation_matrices(frame)
    if batch:
        size = next(iter(batch.values())).shape[0]
    else:
        size = 1
    memo: dict[int, np.ndarray] = {}

    def go(node: Formula) -> np.ndarray:
        key = id(node)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Bot):
            out = np.zeros((size, frame.size), dtype=bool)
        elif isinstance(node, Var):
            arr = batch.get(node.index)
            out = arr if arr is not None else np.zeros((size, frame.size), dtype=bool)
        elif isinstance(node, Nominal):
            raise ValueError("nominals have no truth value under a propositional valuation")
        elif isinstance(node, Not):
            out = ~go(node.sub)
        elif isinstance(node, And):
            out = go(node.items[0])
            for c in node.items[1:]:
                out = out & go(c)
        elif isinstance(node, Or):
            out = go(node.items[0])
            for c in node.items[1:]:
                out = out | go(c)
        elif isinstance(node, Implies):
            out = ~go(node.left) | go(node.right)
        elif isinstance(node, (Diamond, Box)):
            r = rel.get(node.label)
            sub = go(node.sub)
            if isinstance(node, Box):
                sub = ~sub
            if r is None:
                dia = np.zeros((size, frame.size), dtype=bool)
            else:
                dia = (sub.astype(np.float32) @ r.T) > 0
            out = ~dia if isinstance(node, Box) else dia
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[key] = out
        return out

    return np.broadcast_to(go(phi), (size, frame.size))


def eval(frame: Frame, v: Valuation, w: int, phi: Formula) -> bool:  # noqa: A001
    v.check(frame)
    batch = _batch_from_valuation(v, frame, variables(phi))
    return bool(eval_batch(frame, batch, phi)[0, w])


def truth_set(frame: Frame, v: Valuation, phi: Formula) -> frozenset[int]:
    batch = _batch_from_valuation(v, frame, variables(phi))
    return frozenset(np.flatnonzero(eval_batch(frame, batch, phi)[0]).tolist())


def _all_valuations(frame: Frame, vars_: Sequence[int], budget: int) -> Iterator[dict[int, np.ndarray]]:
    bits = len(vars_) * frame.size
    total = 1 << bits
    if total > budget:
        raise BudgetExceeded("valuations to enumerate", total, budget)
    shifts = np.arange(bits, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        table = ((codes[:, None] >> shifts[None, :]) & 1).astype(bool)
        table = table.reshape(len(codes), len(vars_), frame.size)
        yield {k: table[:, i, :] for i, k in enumerate(vars_)}


def refute_at(
    frame: Frame, w: int | None, phi: Formula, budget: int = VALUATION_BUDGET
) -> Valuation | None:
    """A valuation falsifying ``phi`` at ``w`` (anywhere when ``w`` is None), or None."""
    vars_ = sorted(variables(phi))
    for batch in _all_valuations(frame, vars_, budget):
        truth = eval_batch(frame, batch, phi)
        bad = ~truth if w is None else ~truth[:, [w]]
        rows = np.flatnonzero(bad.any(axis=1))
        if rows.size:
            return _valuation_from_batch(batch, int(rows[0]))
    return None


def valid_at(frame: Frame, w: int, phi: Formula, budget: int = VALUATION_BUDGET) -> bool:
    """Exhaustive check that ``phi`` holds at ``w`` under every valuation of its variables."""
    return refute_at(frame, w, phi, budget) is None


def valid_points(frame: Frame, phi: Formula, budget: int = VALUATION_BUDGET) -> frozenset[int]:
    """Points of ``frame`` at which ``phi`` is valid."""
    vars_ = sorted(variables(phi))
    ok = np.ones(frame.size, dtype=bool)
    for batch in _all_valuations(frame, vars_, budget):
        ok &= eval_batch(frame, batch, phi).all(axis=0)
        if not ok.any():
            break
    return frozenset(np.flatnonzero(ok).tolist())


@dataclass(frozen=True)
class SampledResult:
    holds: bool
    samples: int
    counterexample: Valuation | None = None

    def __bool__(self) -> bool:
        return self.holds


def valid_sampled(
    frame: Frame, w: int, phi: Formula, samples: int, seed: int, density: float = 0.5
) -> SampledResult:
    """Evaluate ``phi`` at ``w`` under ``samples`` random valuations drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    vars_ = sorted(variables(phi))
    done = 0
    while done < samples:
        n = min(_CHUNK, samples - done)
        batch = {k: rng.random((n, frame.size)) < density for k in vars_}
        truth = eval_batch(frame, batch, phi)[:, w]
        bad = np.flatnonzero(~truth)
        if bad.size:
            return SampledResult(False, done + int(bad[0]) + 1, _valuation_from_batch(batch, int(bad[0])))
        done += n
    return SampledResult(True, samples)


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------


def search_order(source: Frame, root: int = 0) -> list[int]:
    """Points by directed distance from ``root`` then index; unreachable points last by index."""
    dist = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in source.neighbours[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    inf = source.size + 1
    return sorted(source.points, key=lambda p: (dist.get(p, inf), p))


def iter_homs(
    source: Frame,
    target: Frame,
    anchor: Mapping[int, int] | None = None,
    injective: bool = False,
    root: int = 0,
) -> Iterator[HomAssignment]:
    """Every edge-preserving map from ``source`` to ``target`` agreeing with ``anchor``.

    Maps are produced in lexicographic order of their images along
    :func:`search_order`, so the first one is the least.
    """
    anchor = dict(anchor or {})
    order = search_order(source, root)
    pos = {p: i for i, p in enumerate(order)}
    n = len(order)
    # constraints[i]: edges between order[i] and earlier points, as (kind, other, label)
    constraints: list[list[tuple[str, int, str]]] = [[] for _ in range(n)]
    for s, t, lab in source.edges:
        if s == t:
            constraints[pos[s]].append(("loop", s, lab))
        elif pos[s] < pos[t]:
            constraints[pos[t]].append(("from", s, lab))
        else:
            constraints[pos[s]].append(("to", t, lab))
    out_labels = [set() for _ in range(source.size)]
    in_labels = [set() for _ in range(source.size)]
    for s, t, lab in source.edges:
        out_labels[s].add(lab)
        in_labels[t].add(lab)
    tsucc, tpred = target.succ, target.pred

    def fits(p: int, x: int) -> bool:
        return all(lab in tsucc and tsucc[lab][x] for lab in out_labels[p]) and all(
            lab in tpred and tpred[lab][x] for lab in in_labels[p]
        )

    static: list[tuple[int, ...]] = []
    for p in order:
        if p in anchor:
            x = anchor[p]
            static.append((x,) if fits(p, x) else ())
        else:
            static.append(tuple(x for x in target.points if fits(p, x)))

    image = [-1] * source.size
    used: set[int] = set()

    def candidates(i: int) -> Iterable[int]:
        pool: set[int] | None = None
        for kind, other, lab in constraints[i]:
            if kind == "loop":
                continue
            if kind == "from":
                allowed = tsucc.get(lab, ())
                allowed = allowed[image[other]] if allowed else ()
            else:
                allowed = tpred.get(lab, ())
                allowed = allowed[image[other]] if allowed else ()
            pool = set(allowed) if pool is None else pool & set(allowed)
            if not pool:
                return ()
        base = static[i]
        cands = base if pool is None else [x for x in base if x in pool]
        loops = [lab for kind, _, lab in constraints[i] if kind == "loop"]
        if loops:
            cands = [x for x in cands if all(target.has_edge(x, x, lab) for lab in loops)]
        return cands

    def place(i: int) -> Iterator[HomAssignment]:
        if i == n:
            yield tuple(image)
            return
        p = order[i]
        for x in candidates(i):
            if injective and x in used:
                continue
            image[p] = x
            used.add(x)
            yield from place(i + 1)
            used.discard(x)
        image[p] = -1

    yield from place(0)


def satisfies_e(f: Frame, w: int, d: Frame) -> HomAssignment | None:
    """Least homomorphism from ``d`` to ``f`` sending the root to ``w``, if any."""
    return next(iter_homs(d, f, {0: w}), None)


def count_homs(f: Frame, w: int, d: Frame) -> int:
    return sum(1 for _ in iter_homs(d, f, {0: w}))


def satisfies_e_globally(f: Frame, d: Frame) -> bool:
    return all(satisfies_e(f, w, d) is not None for w in f.points)


def failing_points(f: Frame, d: Frame) -> list[int]:
    return [w for w in f.points if satisfies_e(f, w, d) is None]


def is_homomorphism(source: Frame, target: Frame, h: Sequence[int]) -> bool:
    return len(h) == source.size and all(target.has_edge(h[s], h[t], lab) for s, t, lab in source.edges)


def find_isomorphism(f1: Frame, f2: Frame, anchor: Mapping[int, int] | None = None) -> HomAssignment | None:
    """A bijection carrying the edges of ``f1`` exactly onto those of ``f2``."""
    if f1.size != f2.size or len(f1.edges) != len(f2.edges):
        return None
    # an injective edge-preserving map between equal finite sets with equally many edges is an iso
    return next(iter_homs(f1, f2, anchor, injective=True), None)


def is_isomorphism(f1: Frame, f2: Frame, h: Sequence[int]) -> bool:
    if f1.size != f2.size or sorted(h) != list(range(f2.size)):
        return False
    return {(h[s], h[t], lab) for s, t, lab in f1.edges} == set(f2.edges)


# ---------------------------------------------------------------------------
# semantic evaluation of the generated axioms
# ---------------------------------------------------------------------------


def guard_region(f: Frame, w: int, labels: Sequence[str], depth: int) -> set[int]:
    """Points reachable from ``w`` by a label string of length at most ``depth``."""
    seen = {w}
    frontier = {w}
    for _ in range(depth):
        nxt = set()
        for x in frontier:
            for lab in labels:
                nxt.update(f.successors(x, lab))
        frontier = nxt - seen
        seen |= nxt
        if not frontier:
            break
    return seen


def tree_colouring(
    f: Frame, w: int, tree: LabelledTree, colour_sets: Sequence[frozenset[int]]
) -> tuple[HomAssignment, dict[int, int]] | None:
    """Find a homomorphism of ``tree`` into ``f`` at ``w`` and a colour map kappa.

    ``colour_sets[c]`` is the extension of colour ``c``. A node labelled
    ``{x_i, ...}`` must land in the extension of ``kappa(i)`` for each of its
    labels; kappa is chosen lazily during the search.
    """
    n = tree.size
    parent = [None] * n
    for s, t, lab in tree.edges:
        parent[t] = (s, lab)
    image = [-1] * n
    kappa: dict[int, int] = {}

    def place(node: int) -> bool:
        if node == n:
            return True
        if node == 0:
            cands: Sequence[int] = (w,)
        else:
            par, lab = parent[node]  # type: ignore[misc]
            cands = f.successors(image[par], lab)
        for x in cands:
            fresh = []
            ok = True
            for i in sorted(tree.label_map[node]):
                if i in kappa:
                    if x not in colour_sets[kappa[i]]:
                        ok = False
                        break
                else:
                    fresh.append(i)
            if not ok:
                continue
            image[node] = x
            if assign(node, fresh, 0, x):
                return True
        image[node] = -1
        return False

    def assign(node: int, fresh: list[int], j: int, x: int) -> bool:
        if j == len(fresh):
            return place(node + 1)
        i = fresh[j]
        for c, ext in enumerate(colour_sets):
            if x in ext:
                kappa[i] = c
                if assign(node, fresh, j + 1, x):
                    return True
                del kappa[i]
        return False

    if place(0):
        return tuple(image), dict(kappa)
    return None


def gamma_semantic(
    f: Frame, w: int, spec: AxiomSpec, m: int, v: Valuation, tree: LabelledTree | None = None
) -> bool:
    """Truth of the m-colour axiom at ``w`` without expanding its disjunction.

    Nodes of the tree are processed parent first (preorder numbering).
    """
    colour_sets = [v(i) for i in range(1, m + 1)]
    covered = frozenset().union(*colour_sets)
    region = guard_region(f, w, spec.labels, spec.guard_depth)
    if not region <= covered:
        return True
    if tree is None:
        tree = reduced_tree(build_eta(spec))
    return tree_colouring(f, w, tree, colour_sets) is not None


# ---------------------------------------------------------------------------
# bisimulations and p-morphisms
# ---------------------------------------------------------------------------


def is_bisimulation(
    f1: Frame,
    w1: int,
    f2: Frame,
    w2: int,
    z: Iterable[tuple[int, int]],
    v1: Valuation | None = None,
    v2: Valuation | None = None,
    atoms: Iterable[int] = (),
) -> bool:
    """Check the zig and zag clauses for every label, and atom agreement when valuations are given."""
    zset = set(z)
    if (w1, w2) not in zset:
        return False
    labels = sorted(set(f1.labels) | set(f2.labels))
    atoms = list(atoms)
    for a, b in zset:
        if v1 is not None and v2 is not None:
            if any((a in v1(k)) != (b in v2(k)) for k in atoms):
                return False
        for lab in labels:
            for a2 in f1.successors(a, lab):
                if not any((a2, b2) in zset for b2 in f2.successors(b, lab)):
                    return False
            for b2 in f2.successors(b, lab):
                if not any((a2, b2) in zset for a2 in f1.successors(a, lab)):
                    return False
    return True


def is_pmorphism(f1: Frame, f2: Frame, mapping: Sequence[int], surjective: bool = False) -> bool:
    """Forth: edges go to edges. Back: every edge out of an image lifts to the preimage point."""
    if len(mapping) != f1.size or any(not 0 <= x < f2.size for x in mapping):
        return False
    if surjective and set(mapping) != set(f2.points):
        return False
    if not is_homomorphism(f1, f2, mapping):
        return False
    for a in f1.points:
        for lab in f2.labels:
            lifted = {mapping[a2] for a2 in f1.successors(a, lab)}
            if not set(f2.successors(mapping[a], lab)) <= lifted:
                return False
    return True
