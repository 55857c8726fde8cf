import itertools

import pytest

from mdl.errors import DiagramSyntaxError
from mdl.graphs import (
    Graph,
    check_edge_lifting,
    chromatic_number,
    complete_graph,
    cycle_graph,
    disjoint_union,
    find_colouring,
    graph_from_selector,
    graph_to_dsl,
    is_colouring,
    mycielski,
    mycielski_tower,
    parse_graph,
)
from mdl.semantics import find_isomorphism
from mdl.diagram import Frame


def as_frame(g):
    return Frame(g.order, {(u, v, "e") for a, b in g.edges for u, v in ((a, b), (b, a))})


def brute_chromatic(g):
    for k in range(1, g.order + 1):
        for col in itertools.product(range(k), repeat=g.order):
            if is_colouring(g, col):
                return k


@pytest.mark.parametrize("n", range(1, 7))
def test_complete(n):
    assert chromatic_number(complete_graph(n)) == n


def test_mycielski_k2_is_c5():
    g = mycielski(complete_graph(2))
    assert find_isomorphism(as_frame(g), as_frame(cycle_graph(5))) is not None
    assert chromatic_number(g) == 3
    assert find_colouring(cycle_graph(5), 2) is None


def test_groetzsch():
    g = mycielski_tower(4)
    assert g.order == 11 and len(g.edges) == 20
    assert chromatic_number(g) == 4


def test_chromatic_against_brute_force():
    graphs = [cycle_graph(n) for n in range(3, 8)] + [
        disjoint_union(complete_graph(3), cycle_graph(4)),
        Graph(5, {(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)}),
    ]
    for g in graphs:
        assert chromatic_number(g) == brute_chromatic(g)
        col = find_colouring(g, chromatic_number(g))
        assert is_colouring(g, col) and min(col) >= 1


def test_loops_have_no_colouring():
    g = Graph(2, {(0, 0), (0, 1)})
    assert chromatic_number(g) is None
    assert find_colouring(g, 3) is None


def test_edge_lifting():
    g = cycle_graph(5)
    assert check_edge_lifting(g, g, list(range(5)))
    both = disjoint_union(complete_graph(3), complete_graph(3))
    assert check_edge_lifting(both, complete_graph(3), [0, 1, 2, 0, 1, 2])
    assert not check_edge_lifting(complete_graph(2), Graph(1), [0, 0])
    assert check_edge_lifting(cycle_graph(6), complete_graph(2), [0, 1, 0, 1, 0, 1])


def test_dsl_and_selectors(tmp_path):
    g = mycielski_tower(3)
    assert parse_graph(graph_to_dsl(g)) == g
    path = tmp_path / "g.txt"
    path.write_text(graph_to_dsl(g), encoding="utf-8")
    assert graph_from_selector(f"file:{path}") == g
    assert graph_from_selector("complete:4") == complete_graph(4)
    assert graph_from_selector("mycielski:complete:2") == mycielski(complete_graph(2))
    with pytest.raises(ValueError):
        graph_from_selector("petersen")
    with pytest.raises(DiagramSyntaxError):
        parse_graph("graph 2\nedge v0 -- v7")
