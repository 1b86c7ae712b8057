import itertools
import random

import networkx as nx
import pytest

from generalized_turan.constructions import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    path_graph,
    petersen,
    spider,
    star_graph,
)
from generalized_turan.counting import (
    CountMode,
    automorphism_count,
    contains,
    count_copies,
    count_embeddings,
    count_embeddings_fixed,
    count_k2t,
)
from generalized_turan.errors import InvalidGraphError, ParameterError
from generalized_turan.graph_core import Graph, disjoint_union


def _random_graph(order: int, density: float, rng: random.Random) -> Graph:
    return Graph(order, [(u, v) for u, v in itertools.combinations(range(order), 2) if rng.random() < density])


def _brute_force(h: Graph, g: Graph) -> int:
    return sum(
        all(g.has_edge(image[u], image[v]) for u, v in h.edges)
        for image in itertools.permutations(range(g.order), h.order)
    )


def test_counts_in_cliques():
    """Known embedding and copy counts in K_4."""
    k4 = complete_graph(4)
    assert count_embeddings(complete_graph(3), k4).value == 24
    assert count_copies(complete_graph(3), k4).value == 4
    assert count_copies(path_graph(3), k4).value == 12
    assert count_copies(cycle_graph(4), k4).value == 3


def test_embeddings_match_brute_force():
    """Random patterns up to 5 vertices in hosts up to 7 vertices."""
    rng = random.Random(1)
    for _ in range(40):
        h = _random_graph(rng.randint(1, 5), 0.5, rng)
        g = _random_graph(rng.randint(h.order, 7), 0.6, rng)
        assert count_embeddings(h, g).value == _brute_force(h, g)


def test_pendant_heavy_patterns_match_brute_force():
    """Stars and spiders exercise the pendant inclusion-exclusion."""
    rng = random.Random(2)
    for pattern in (star_graph(4), spider(2, 2), spider(3, 1), path_graph(4)):
        for _ in range(5):
            g = _random_graph(7, 0.6, rng)
            assert count_embeddings(pattern, g).value == _brute_force(pattern, g)


def test_triangles_match_networkx():
    """Triangle copies agree with networkx."""
    rng = random.Random(4)
    for _ in range(10):
        g = nx.gnp_random_graph(12, 0.4, seed=rng.randrange(10**6))
        expected = sum(nx.triangles(g).values()) // 3
        assert count_copies(complete_graph(3), Graph.from_networkx(g)).value == expected


def test_existence_mode():
    """Existence counts are 0 or 1."""
    assert count_embeddings(complete_graph(3), cycle_graph(4), existence_only=True).value == 0
    found = count_embeddings(cycle_graph(4), complete_graph(5), existence_only=True)
    assert found.value == 1
    assert found.mode is CountMode.EXISTENCE
    assert contains(complete_graph(4), cycle_graph(4))
    assert not contains(cycle_graph(5), complete_graph(3))


def test_pattern_larger_than_host():
    """No embeddings when the pattern has more vertices."""
    assert count_embeddings(path_graph(5), complete_graph(4)).value == 0


def test_fixed_anchor_counts():
    """The middle of P_3 maps to a common neighbour of the anchor images."""
    result = count_embeddings_fixed(path_graph(3), [0, 2], cycle_graph(4), [0, 2])
    assert result.value == 2
    assert result.mode is CountMode.FIXED_ANCHORS
    assert result.anchors_are_leaves
    assert result.distance_condition is False


def test_fixed_anchor_bound_and_distance_condition():
    """Leaf anchors at distance 3 satisfy the distance condition; t supplies the bound."""
    result = count_embeddings_fixed(path_graph(4), [0, 3], complete_graph(6), [0, 1], t=3)
    assert result.value == 4 * 3
    assert result.distance_condition is True
    assert result.bound == pytest.approx(2**1.5 * 6**0.5)


def test_fixed_anchor_errors():
    """Mismatched, repeated or out-of-range anchors are rejected."""
    g = complete_graph(4)
    with pytest.raises(ParameterError):
        count_embeddings_fixed(path_graph(3), [0, 2], g, [1])
    with pytest.raises(ParameterError):
        count_embeddings_fixed(path_graph(3), [0, 0], g, [1, 2])
    with pytest.raises(InvalidGraphError):
        count_embeddings_fixed(path_graph(3), [0, 5], g, [1, 2])
    with pytest.raises(InvalidGraphError):
        count_embeddings_fixed(path_graph(3), [0, 2], g, [1, 9])


@pytest.mark.parametrize(
    ("graph", "expected"),
    [
        (star_graph(3), 6),
        (path_graph(4), 2),
        (spider(3, 2), 6),
        (cycle_graph(4), 8),
        (complete_graph(4), 24),
        (petersen(), 120),
        (disjoint_union([path_graph(2), path_graph(2)]), 8),
    ],
)
def test_automorphism_count(graph, expected):
    """Automorphism group orders."""
    assert automorphism_count(graph) == expected


def test_k2t_counts():
    """Codegree counting, including the halving for C_4."""
    assert count_k2t(complete_graph(4), 2).value == 3
    assert count_k2t(complete_bipartite(7, 7), 7).value == 42
    assert count_k2t(disjoint_union([complete_graph(9), complete_graph(5)]), 7).value == 36
    with pytest.raises(ParameterError):
        count_k2t(complete_graph(4), 1)


def test_k2t_matches_generic_counter():
    """count_k2t equals generic copy counting of K_{2,t}."""
    rng = random.Random(9)
    for _ in range(30):
        t = rng.choice([2, 3, 4])
        g = _random_graph(rng.randint(2, 9), rng.uniform(0.3, 0.9), rng)
        assert count_k2t(g, t).value == count_copies(complete_bipartite(2, t), g).value


def test_parallel_count_matches_serial():
    """Splitting root images over workers does not change the count."""
    g = _random_graph(10, 0.5, random.Random(12))
    pattern = cycle_graph(4)
    assert count_embeddings(pattern, g, jobs=2).value == count_embeddings(pattern, g).value
