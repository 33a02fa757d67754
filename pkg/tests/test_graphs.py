import itertools
import random

import pytest

from forestvol.errors import GraphParseError
from forestvol.graphs import (
    Graph,
    Tree,
    broken_edges,
    enumerate_connected_sets,
    enumerate_forests,
    format_graph,
    parse_graph,
    spanning_trees,
    tree_from_edges,
)
from forestvol.families import (
    complete_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
    random_graph,
)

from conftest import brute_connected_sets, brute_forests, is_forest


def test_parse_basic():
    g = parse_graph("3 2\n0 1\n1 2\n")
    assert g.n == 3 and g.m == 2
    assert g.edges == ((0, 1), (1, 2))


def test_parse_comments_blanks_crlf():
    text = "# a comment\r\n\r\n4 2\r\n0 1\r\n# interior\r\n\r\n2 3\r\n"
    g = parse_graph(text)
    assert g.n == 4 and g.edges == ((0, 1), (2, 3))


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 0),
        ("x y\n", 1),
        ("2 1\n0\n", 2),
        ("2 1\n0 0\n", 2),
        ("2 1\n1 0\n", 2),
        ("2 1\n0 2\n", 2),
        ("# lead\n2 2\n0 1\n0 1\n", 4),
        ("2 2\n0 1\n", 0),
        ("2 1\n0 1\n0 1\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(GraphParseError) as exc:
        parse_graph(text)
    if line:
        assert exc.value.line == line


def test_format_parse_roundtrip():
    g = petersen_graph()
    assert parse_graph(format_graph(g)).edges == g.edges


def test_degree_and_components():
    g = Graph(5, [(0, 1), (1, 2), (3, 4)])
    assert g.degree(1) == 2 and g.max_degree() == 2
    assert not g.is_connected()
    comps = g.components()
    assert sorted(c.bit_count() for c in comps) == [2, 3]
    sub, ids = g.induced_subgraph(0b00111)
    assert sub.edges == ((0, 1), (1, 2)) and ids == (0, 1, 2)


def test_induced_subgraph_preserves_edge_order():
    g = Graph(4, [(2, 3), (0, 1), (1, 2)])
    sub, ids = g.induced_subgraph(0b1110)
    # ranks keep the host order: (2,3) then (1,2), relabeled
    assert ids == (1, 2, 3)
    assert sub.edges == ((1, 2), (0, 1))


@pytest.mark.parametrize("seed", range(6))
def test_connected_sets_match_brute_force(seed):
    g = random_graph(7, 0.4, seed=seed)
    got = set(enumerate_connected_sets(g, 5))
    assert got == brute_connected_sets(g, 5)


@pytest.mark.parametrize("seed", range(6))
def test_forests_match_brute_force(seed):
    g = random_graph(6, 0.5, seed=seed)
    got = set()
    for forest in enumerate_forests(g, 4):
        ranks = tuple(sorted(r for t in forest for r in t.edge_ranks))
        assert is_forest(g, ranks)
        assert ranks not in got
        got.add(ranks)
    assert got == brute_forests(g, 4)


def test_forest_counts_k4():
    g = complete_graph(4)
    sizes = {}
    for forest in enumerate_forests(g, 3):
        k = sum(len(t.edge_ranks) for t in forest)
        sizes[k] = sizes.get(k, 0) + 1
    assert sizes == {0: 1, 1: 6, 2: 15, 3: 16}


@pytest.mark.parametrize(
    "g,count",
    [
        (complete_graph(4), 16),
        (cycle_graph(5), 5),
        (path_graph(6), 1),
        (petersen_graph(), 2000),
    ],
)
def test_spanning_tree_counts(g, count):
    assert sum(1 for _ in spanning_trees(g)) == count


def test_spanning_trees_requires_connected():
    with pytest.raises(ValueError):
        list(spanning_trees(Graph(4, [(0, 1), (2, 3)])))


def test_tree_from_edges_validates():
    g = complete_graph(4)
    t = tree_from_edges(g, (0, 1))
    assert t.size == 3
    with pytest.raises(ValueError):
        tree_from_edges(g, (0, 1, 3))  # 0-1, 0-2, 1-2 is a triangle


def _fundamental_cycle(g: Graph, tree: Tree, rank: int) -> list[int]:
    """Edge ranks on the tree path between the endpoints of a chord."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for r in tree.edge_ranks:
        u, v = g.edges[r]
        adj.setdefault(u, []).append((v, r))
        adj.setdefault(v, []).append((u, r))
    src, dst = g.edges[rank]
    seen = {src}
    stack = [(src, [])]
    while stack:
        node, path = stack.pop()
        if node == dst:
            return path
        for nxt, r in adj.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append((nxt, path + [r]))
    raise AssertionError("chord endpoints not connected in tree")


@pytest.mark.parametrize("seed", range(8))
def test_broken_edges_are_cycle_maxima(seed):
    rng = random.Random(seed)
    g = random_graph(7, 0.5, seed=seed + 100)
    if not g.is_connected():
        pytest.skip("disconnected draw")
    trees = list(spanning_trees(g))
    tree = trees[rng.randrange(len(trees))]
    broken = set(broken_edges(g, tree))
    in_tree = set(tree.edge_ranks)
    for rank in range(g.m):
        u, v = g.edges[rank]
        if rank in in_tree or not (tree.vset >> u) & 1 or not (tree.vset >> v) & 1:
            continue
        cycle = _fundamental_cycle(g, tree, rank)
        is_max = all(rank > r for r in cycle)
        assert (rank in broken) == is_max


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(2, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (0, 1)])
