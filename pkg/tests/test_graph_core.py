import itertools
import random

import networkx as nx
import pytest

from generalized_turan.constructions import complete_bipartite, complete_graph, cycle_graph, path_graph, petersen
from generalized_turan.errors import GraphFormatError, InvalidGraphError
from generalized_turan.graph_core import (
    Graph,
    bipartite_beta,
    canonical_form,
    chromatic_number,
    codegree,
    complete_multipartite,
    disjoint_union,
    graph6_decode,
    graph6_encode,
    is_isomorphic,
)


def test_graph_rejects_self_loops_and_out_of_range_pairs():
    """Invalid vertex pairs raise InvalidGraphError."""
    with pytest.raises(InvalidGraphError):
        Graph(3, [(1, 1)])
    with pytest.raises(InvalidGraphError):
        Graph(3, [(0, 3)])


def test_duplicate_pairs_collapse():
    """Both orientations of a pair give a single edge."""
    g = Graph(3, [(0, 1), (1, 0), (1, 2)])
    assert g.edge_count == 2
    assert g.neighbors(1) == frozenset({0, 2})


def test_graph6_matches_networkx():
    """graph6 bytes agree with networkx for the Petersen graph and random graphs."""
    assert graph6_encode(petersen()) == nx.to_graph6_bytes(nx.petersen_graph(), header=False).decode().strip()
    rng = random.Random(7)
    for order in range(1, 12):
        g = nx.gnp_random_graph(order, 0.4, seed=rng.randrange(10**6))
        assert graph6_encode(Graph.from_networkx(g)) == nx.to_graph6_bytes(g, header=False).decode().strip()


def test_graph6_known_strings():
    """Small graphs have their standard graph6 strings."""
    assert graph6_encode(complete_graph(4)) == "C~"
    assert graph6_encode(Graph(2, [(0, 1)])) == "A_"
    assert graph6_decode("C~") == complete_graph(4)
    assert graph6_decode("?").order == 0


@pytest.mark.parametrize(
    ("text", "offset"),
    [("", 0), ("C", 1), ("A_~", 2), ("C ", 1), ("A`", 1)],
)
def test_graph6_errors_carry_offsets(text, offset):
    """Malformed graph6 input reports where decoding failed."""
    with pytest.raises(GraphFormatError) as excinfo:
        graph6_decode(text)
    assert excinfo.value.offset == offset


def test_codegree_and_components():
    """Codegree counts common neighbours; components are listed by smallest vertex."""
    c4 = cycle_graph(4)
    assert codegree(c4, 0, 2) == 2
    assert codegree(c4, 0, 1) == 0
    with pytest.raises(InvalidGraphError):
        codegree(c4, 1, 1)
    g = disjoint_union([complete_graph(3), path_graph(2)])
    assert g.components() == [[0, 1, 2], [3, 4]]
    assert not g.is_connected()


def test_tree_recognition():
    """Only connected graphs with order - 1 edges are trees."""
    assert path_graph(5).is_tree()
    assert not cycle_graph(5).is_tree()
    assert not disjoint_union([path_graph(2), path_graph(2)]).is_tree()


def test_complete_multipartite_edges():
    """Edges run only between distinct parts."""
    g = complete_multipartite([2, 3])
    assert g.edge_count == 6
    assert not g.has_edge(0, 1)
    with pytest.raises(InvalidGraphError):
        complete_multipartite([2, 0])


@pytest.mark.parametrize(
    ("graph", "chi"),
    [
        (Graph(0), 0),
        (Graph(4), 1),
        (cycle_graph(6), 2),
        (cycle_graph(5), 3),
        (complete_graph(4), 4),
        (petersen(), 3),
    ],
)
def test_chromatic_number(graph, chi):
    """Branch and bound returns the exact chromatic number."""
    assert chromatic_number(graph) == chi


def test_chromatic_number_agrees_with_brute_force():
    """Random small graphs: the least k admitting a proper colouring."""
    rng = random.Random(3)
    for _ in range(25):
        order = rng.randint(1, 6)
        g = Graph(order, [(u, v) for u, v in itertools.combinations(range(order), 2) if rng.random() < 0.5])
        expected = next(
            k
            for k in range(1, order + 1)
            if any(
                all(colors[u] != colors[v] for u, v in g.edges)
                for colors in itertools.product(range(k), repeat=order)
            )
        )
        assert chromatic_number(g) == expected


def test_bipartite_beta():
    """beta takes the smaller side of every component; None for non-bipartite graphs."""
    assert bipartite_beta(cycle_graph(6)) == 3
    assert bipartite_beta(complete_bipartite(2, 9)) == 2
    assert bipartite_beta(path_graph(5)) == 2
    assert bipartite_beta(disjoint_union([path_graph(2), path_graph(2)])) == 2
    assert bipartite_beta(complete_graph(3)) is None


def test_canonical_form_is_label_invariant():
    """Relabelled copies share a canonical form; C_6 and 2K_3 do not."""
    rng = random.Random(11)
    g = petersen()
    for _ in range(5):
        perm = list(range(g.order))
        rng.shuffle(perm)
        assert canonical_form(g.relabel(perm)) == canonical_form(g)
    two_triangles = disjoint_union([complete_graph(3), complete_graph(3)])
    assert not is_isomorphic(cycle_graph(6), two_triangles)


@pytest.mark.parametrize(
    "g",
    [
        Graph(20),
        complete_graph(20),
        complete_bipartite(10, 10),
        disjoint_union([complete_graph(4)] * 5),
        disjoint_union([cycle_graph(5)] * 4),
    ],
    ids=["empty", "clique", "k10_10", "5k4", "4c5"],
)
def test_canonical_form_on_symmetric_graphs(g):
    """Large automorphism groups are pruned instead of walked leaf by leaf."""
    rng = random.Random(g.edge_count)
    perm = list(range(g.order))
    rng.shuffle(perm)
    assert canonical_form(g.relabel(perm)) == canonical_form(g)
    if g.edge_count in (0, g.order * (g.order - 1) // 2):
        assert canonical_form(g) == graph6_encode(g)


def test_symmetric_graphs_stay_distinct():
    assert not is_isomorphic(disjoint_union([cycle_graph(4)] * 3), disjoint_union([cycle_graph(6)] * 2))
    assert not is_isomorphic(cycle_graph(12), disjoint_union([cycle_graph(4)] * 3))
    assert is_isomorphic(complete_bipartite(6, 6), complete_multipartite([6, 6]))

def test_is_isomorphic_matches_networkx():
    """Isomorphism agrees with networkx on random pairs with equal edge counts."""
    rng = random.Random(5)
    for _ in range(30):
        a = nx.gnm_random_graph(6, 7, seed=rng.randrange(10**6))
        b = nx.gnm_random_graph(6, 7, seed=rng.randrange(10**6))
        assert is_isomorphic(Graph.from_networkx(a), Graph.from_networkx(b)) == nx.is_isomorphic(a, b)
