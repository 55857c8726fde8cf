import random

from mdl.diagram import Frame
from mdl.minimizer import random_frame
from mdl.ultrafilter import (
    all_ultrafilters_bruteforce,
    is_ultrafilter,
    principal,
    ue_related,
    ultrafilter_extension_finite,
    ultrafilters_by_choice,
    unique_block,
)


def test_every_ultrafilter_is_principal_bruteforce():
    for n in range(1, 4):
        assert set(all_ultrafilters_bruteforce(n)) == {principal(n, a) for a in range(n)}


def test_choice_enumeration_n4():
    assert set(ultrafilters_by_choice(4)) == {principal(4, a) for a in range(4)}


def test_non_ultrafilters():
    assert not is_ultrafilter(2, frozenset({3}))
    assert not is_ultrafilter(2, frozenset({1, 2, 3}))


def test_single_point():
    ue = ultrafilter_extension_finite(Frame(1, {(0, 0, "a")}))
    assert ue.frame == Frame(1, {(0, 0, "a")})
    assert ue.is_isomorphism_to(Frame(1, {(0, 0, "a")}))


def test_relation_over_all_ultrafilters():
    """Relations between brute-forced ultrafilters mirror the frame."""
    rng = random.Random(0)
    for _ in range(40):
        n = rng.randint(1, 3)
        f = random_frame(rng, n, ("a", "b"), 0.4)
        ufs = all_ultrafilters_bruteforce(n)
        index = {u: next(a for a in range(n) if principal(n, a) == u) for u in ufs}
        for lab in ("a", "b"):
            for u in ufs:
                for v in ufs:
                    assert ue_related(f, lab, u, v) == f.has_edge(index[u], index[v], lab)


def test_extension_isomorphic():
    rng = random.Random(1)
    for _ in range(50):
        f = random_frame(rng, rng.randint(1, 5), ("a",), rng.random())
        ue = ultrafilter_extension_finite(f)
        assert ue.is_isomorphism_to(f)


def test_unique_block():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 6)
        owner = [rng.randrange(3) for _ in range(n)]
        blocks = [sum(1 << p for p in range(n) if owner[p] == i) for i in range(3)]
        for a in range(n):
            assert unique_block(n, principal(n, a), blocks) == owner[a]
