"""Ultrafilter extensions of finite frames.

Subsets of a frame with ``n`` points are bitmasks below ``2**n``. An
ultrafilter is materialised as the frozenset of masks it contains, and the
extension relation is computed from its definition rather than assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagram import Frame

Ultrafilter = frozenset[int]

MAX_POINTS = 12


def principal(n: int, a: int) -> Ultrafilter:
    bit = 1 << a
    return frozenset(x for x in range(1 << n) if x & bit)


def is_ultrafilter(n: int, family: frozenset[int]) -> bool:
    """Filter axioms plus primeness over the powerset of ``n`` points."""
    full = (1 << n) - 1
    if full not in family or 0 in family:
        return False
    for x in family:
        for y in family:
            if x & y not in family:
                return False
    for x in family:
        for y in range(1 << n):
            if x & y == x and y not in family:
                return False
    return all((x in family) != ((full ^ x) in family) for x in range(1 << n))


def all_ultrafilters_bruteforce(n: int) -> list[Ultrafilter]:
    """Enumerate every family of subsets and keep the ultrafilters; feasible for n <= 3."""
    if n > 3:
        raise ValueError("brute force over families of subsets is limited to 3 points")
    subsets = range(1 << n)
    out = []
    for bits in range(1 << (1 << n)):
        fam = frozenset(x for x in subsets if bits >> x & 1)
        if is_ultrafilter(n, fam):
            out.append(fam)
    return out


def ultrafilters_by_choice(n: int) -> list[Ultrafilter]:
    """Ultrafilters found by choosing one of each complementary pair of subsets.

    Complete for ``n <= 4``: a candidate is determined by its choice on the
    ``2**(n-1)`` pairs.
    """
    full = (1 << n) - 1
    pairs = [(x, full ^ x) for x in range(1 << n) if x < (full ^ x)]
    out = []
    for pick in itertools.product((0, 1), repeat=len(pairs)):
        fam = frozenset(p[c] for p, c in zip(pairs, pick))
        if is_ultrafilter(n, fam):
            out.append(fam)
    return out


def preimage(frame: Frame, label: str, mask: int) -> int:
    """Mask of points with an ``label``-successor inside ``mask``."""
    out = 0
    for s, t, lab in frame.edges:
        if lab == label and mask >> t & 1:
            out |= 1 << s
    return out


def ue_related(frame: Frame, label: str, u: Ultrafilter, v: Ultrafilter) -> bool:
    """u R v iff the label-preimage of every member of v is a member of u."""
    return all(preimage(frame, label, x) in u for x in v)


@dataclass(frozen=True)
class UEResult:
    frame: Frame
    ultrafilters: tuple[Ultrafilter, ...]
    iso: tuple[int, ...]

    def is_isomorphism_to(self, original: Frame) -> bool:
        h = self.iso
        return sorted(h) == list(range(self.frame.size)) and {
            (h[s], h[t], lab) for s, t, lab in original.edges
        } == set(self.frame.edges)


def ultrafilter_extension_finite(f: Frame, max_points: int = MAX_POINTS) -> UEResult:
    """Extension of a finite frame over its principal ultrafilters.

    Every ultrafilter over a finite set is principal, so point ``a`` of the
    result is the ultrafilter generated by ``a`` and ``iso`` is the identity.
    """
    if f.size > max_points:
        raise ValueError(f"frames above {max_points} points are too large to materialise")
    ufs = tuple(principal(f.size, a) for a in f.points)
    for u in ufs:
        assert is_ultrafilter(f.size, u)
    edges = frozenset(
        (i, j, lab)
        for lab in f.labels
        for i, u in enumerate(ufs)
        for j, v in enumerate(ufs)
        if ue_related(f, lab, u, v)
    )
    return UEResult(Frame(f.size, edges), ufs, tuple(f.points))


def unique_block(n: int, u: Ultrafilter, blocks: list[int]) -> int | None:
    """Index of the single block of a partition that belongs to ``u``; None if not exactly one."""
    hits = [i for i, b in enumerate(blocks) if b in u]
    return hits[0] if len(hits) == 1 else None
