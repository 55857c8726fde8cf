import itertools
import math
import random

import pytest

from mdl.diagram import (
    Diagram,
    add_edge,
    del_set,
    delete_edge,
    distance,
    has_inner_cycle,
    inner_cycle_edges,
    is_rooted,
    is_spanning_tree,
    parse_diagram,
    rank,
    spanning_tree,
    to_dsl,
    undirected_path,
)
from mdl.errors import DiagramSyntaxError, EdgeAbsent, NotRooted
from mdl.minimizer import random_diagram


def test_parse_sym():
    d = parse_diagram("points 2\nedge x0 -a-> x1\nedge x1 -a-> x0\n")
    assert d.size == 2
    assert d.edges == {(0, 1, "a"), (1, 0, "a")}


def test_parse_refsucc_matches_catalog(cat):
    d = parse_diagram("points 2\nedge x0 -a-> x1\nedge x1 -a-> x1\n")
    assert d == cat["D_refsucc"]


def test_single_root():
    d = parse_diagram("points 1")
    assert d.size == 1 and not d.edges
    assert is_rooted(d)


def test_parse_comments_and_duplicates():
    with pytest.warns(UserWarning, match="duplicate"):
        d = parse_diagram("# hi\npoints 2\nedge x0 -a-> x1  # trailing\nedge x0 -a-> x1\n")
    assert d.edges == {(0, 1, "a")}


@pytest.mark.parametrize(
    "text",
    ["edge x0 -a-> x1", "points 2\nedge x0 -a-> x5", "points 2\nedge x0 a x1", "points x"],
)
def test_parse_errors(text):
    with pytest.raises(DiagramSyntaxError):
        parse_diagram(text)


def test_syntax_error_position():
    with pytest.raises(DiagramSyntaxError) as info:
        parse_diagram("points 2\nedge x0 -a-> x9\n")
    assert info.value.line == 2


def test_dsl_round_trip(cat):
    for d in cat.values():
        assert parse_diagram(to_dsl(d)) == d


def test_rootedness(cat):
    assert is_rooted(cat["D_sym"])
    assert not is_rooted(Diagram(2))


def test_distance(cat):
    chain = cat["D_chain"]
    assert distance(chain, 0, 2) == 2
    assert distance(chain, 1, 1) == 0
    assert distance(Diagram(2), 0, 1) == math.inf


def test_rank(cat):
    assert rank(cat["D_tri"], 1) == 1
    assert rank(cat["D_tri"], 0) == 0
    assert rank(cat["D_chain"], 2) == 2
    with pytest.raises(NotRooted):
        rank(Diagram(2), 1)


def test_del_set(cat):
    assert del_set(cat["D_chain"], 1) == {2}
    assert del_set(cat["D_tri"], 1) == frozenset()
    assert del_set(cat["D_refsucc"], 1) == frozenset()


def test_spanning_tree_examples(cat):
    t = spanning_tree(cat["D_tri"])
    assert t.edges == {(0, 1, "a"), (0, 2, "a")}
    assert t.depth == 1
    t = spanning_tree(cat["D_chain"])
    assert t.edges == {(0, 1, "a"), (1, 2, "a")}
    assert t.depth == 2
    t = spanning_tree(Diagram(1))
    assert not t.edges and t.depth == 0


def test_inner_cycle_examples(cat):
    assert not has_inner_cycle(cat["D_sym"])
    assert has_inner_cycle(cat["D_refsucc"])
    assert has_inner_cycle(cat["D_tri"])
    assert not has_inner_cycle(cat["D_chain"])
    assert sorted(inner_cycle_edges(cat["D_tri"])) == [(1, 2, "a"), (2, 1, "a")]


def test_delete_edge(cat):
    d = delete_edge(cat["D_refsucc"], (1, 1, "a"))
    assert d.size == 2 and d.edges == {(0, 1, "a")}
    assert len(delete_edge(cat["D_tri"], (1, 2, "a")).edges) == 3
    with pytest.raises(EdgeAbsent):
        delete_edge(cat["D_tri"], (0, 0, "a"))


def test_undirected_path_examples():
    d = parse_diagram("points 3\nedge x0 -a-> x1\nedge x1 -a-> x2\n")
    assert undirected_path(d, 2, 0) is not None
    assert undirected_path(d, 1, 1) == []
    assert undirected_path(Diagram(2), 0, 1) is None
    assert undirected_path(d, 2, 0, avoid=[1]) is None


def _cycles_brute_force(d):
    """Any undirected cycle among non-root points, by enumerating simple closed walks."""
    inner = [e for e in d.edges if e[0] != 0 and e[1] != 0]
    for length in range(1, len(inner) + 1):
        for combo in itertools.permutations(inner, length):
            if length == 1:
                if combo[0][0] == combo[0][1]:
                    return True
                continue
            for orient in itertools.product((0, 1), repeat=length):
                walk = [(e[0], e[1]) if o == 0 else (e[1], e[0]) for e, o in zip(combo, orient)]
                if all(walk[i][1] == walk[(i + 1) % length][0] for i in range(length)):
                    starts = [w[0] for w in walk]
                    if len(set(starts)) == length:
                        return True
    return False


def test_inner_cycle_against_brute_force():
    rng = random.Random(7)
    seen = 0
    for _ in range(400):
        d = random_diagram(rng, max_points=4, max_edges=6)
        assert has_inner_cycle(d) == _cycles_brute_force(d), to_dsl(d)
        seen += has_inner_cycle(d)
    assert 0 < seen < 400


def test_inner_cycle_needs_inner_edge():
    rng = random.Random(3)
    for _ in range(200):
        d = random_diagram(rng, max_points=4, max_edges=6)
        if has_inner_cycle(d):
            assert any(s != 0 and t != 0 for s, t, _ in d.edges)


def test_spanning_trees_are_trees():
    rng = random.Random(11)
    for _ in range(200):
        d = random_diagram(rng, max_points=5, labels=("a", "b"), max_edges=8)
        if is_rooted(d):
            assert is_spanning_tree(d, spanning_tree(d))


def test_delete_then_add_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        d = random_diagram(rng)
        for e in d.edges:
            assert add_edge(delete_edge(d, e), e) == d


def test_distance_triangle_and_rank():
    rng = random.Random(9)
    for _ in range(100):
        d = random_diagram(rng)
        n = d.size
        for x, y, z in itertools.product(range(n), repeat=3):
            assert distance(d, x, z) <= distance(d, x, y) + distance(d, y, z)
        if is_rooted(d):
            assert all(distance(d, 0, x) == rank(d, x) for x in range(n))
