import logging

import pytest

from generalized_turan import oracle
from generalized_turan.cache_manager import ResultCache
from generalized_turan.constructions import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    star_graph,
)
from generalized_turan.counting import contains, count_copies
from generalized_turan.errors import ParameterError, SizeLimitError, TrivialForbiddenError
from generalized_turan.graph_core import Graph, canonical_form, graph6_decode, is_isomorphic
from generalized_turan.oracle import enumerate_maximal_free, exact_ex, sweep_ex


@pytest.mark.parametrize(("n", "value"), [(3, 2), (4, 4), (5, 6), (6, 9), (7, 12)])
def test_mantel_values(n, value):
    """Triangle-free graphs hold at most floor(n^2 / 4) edges."""
    assert exact_ex(n, complete_graph(2), complete_graph(3)).value == value


@pytest.mark.parametrize(("n", "value"), [(4, 4), (5, 6), (6, 7), (7, 9)])
def test_c4_free_edge_counts(n, value):
    assert exact_ex(n, complete_graph(2), cycle_graph(4)).value == value


def test_paths_of_length_two_without_c4():
    """The paw attains C(4, 2) - 1 cherries."""
    assert exact_ex(4, path_graph(3), cycle_graph(4)).value == 5


def test_clique_blocks_for_path_forbidden():
    """K_4 is P_5-free and holds three C_4."""
    result = exact_ex(4, cycle_graph(4), path_graph(5))
    assert result.value == 3
    assert is_isomorphic(graph6_decode(result.witness_g6), complete_graph(4))


@pytest.mark.parametrize(
    ("h", "f"),
    [
        (path_graph(3), cycle_graph(4)),
        (cycle_graph(4), complete_graph(3)),
        (complete_graph(3), star_graph(3)),
        (complete_bipartite(2, 3), path_graph(5)),
    ],
)
def test_search_matches_sweep(h, f):
    """Maximal-graph search agrees with the full sweep on small orders."""
    for n in range(3, 6):
        assert exact_ex(n, h, f).value == sweep_ex(n, h, f).value


def test_witness_is_canonical_and_verified():
    result = exact_ex(6, path_graph(3), cycle_graph(4))
    witness = graph6_decode(result.witness_g6)
    assert result.witness_g6 == canonical_form(witness)
    assert not contains(witness, cycle_graph(4))
    assert count_copies(path_graph(3), witness).value == result.value
    assert result.complete
    assert result.stats.maximal > 0


def test_parallel_search_matches_serial():
    h, f = path_graph(3), complete_graph(3)
    serial = exact_ex(6, h, f)
    parallel = exact_ex(6, h, f, jobs=2)
    assert parallel.value == serial.value
    assert parallel.witness_g6 == serial.witness_g6


def test_maximal_enumeration():
    """Only P_3 is maximal triangle-free on three vertices; the empty graph is K_2-free."""
    graphs = list(enumerate_maximal_free(3, complete_graph(3)))
    assert len(graphs) == 1
    assert is_isomorphic(graphs[0], path_graph(3))
    only = list(enumerate_maximal_free(5, complete_graph(2)))
    assert [g.edge_count for g in only] == [0]


def test_input_validation():
    with pytest.raises(SizeLimitError):
        exact_ex(10, complete_graph(2), complete_graph(3))
    with pytest.raises(SizeLimitError):
        sweep_ex(7, complete_graph(2), complete_graph(3))
    with pytest.raises(ParameterError):
        exact_ex(4, Graph(0), complete_graph(3))
    with pytest.raises(TrivialForbiddenError):
        exact_ex(4, complete_graph(2), Graph(1))
    with pytest.raises(TrivialForbiddenError):
        exact_ex(5, complete_graph(2), empty_graph(3))


def test_edgeless_forbidden_larger_than_host():
    """An edgeless F with more vertices than n forbids nothing."""
    assert exact_ex(3, complete_graph(2), empty_graph(4)).value == 3


def test_timeout_without_witness(monkeypatch):
    monkeypatch.setattr(oracle, "_DEADLINE_CHECK_EVERY", 1)
    with pytest.raises(SizeLimitError):
        exact_ex(7, complete_graph(2), cycle_graph(4), timeout=1e-9)


def test_cache_round_trip(tmp_path):
    cache = ResultCache(tmp_path)
    first = exact_ex(5, complete_graph(2), complete_graph(3), cache=cache)
    assert cache.misses == 1
    second = exact_ex(5, complete_graph(2), complete_graph(3), cache=cache)
    assert cache.hits == 1
    assert (second.value, second.witness_g6) == (first.value, first.witness_g6)


def test_tampered_cache_is_recomputed(tmp_path, caplog):
    cache = ResultCache(tmp_path)
    result = exact_ex(5, complete_graph(2), complete_graph(3), cache=cache)
    cache.store(result.model_copy(update={"value": result.value + 1}))
    with caplog.at_level(logging.WARNING, logger="generalized_turan.oracle"):
        again = exact_ex(5, complete_graph(2), complete_graph(3), cache=cache)
    assert again.value == result.value
    assert any("re-verification" in r.getMessage() for r in caplog.records)


@pytest.mark.slow
def test_c4_free_edges_on_eight_vertices():
    assert exact_ex(8, complete_graph(2), cycle_graph(4)).value == 11
