import logging

import pytest

from generalized_turan.constructions import path_graph
from generalized_turan.counting import count_k2t
from generalized_turan.errors import DivisibilityError, InfeasibleError, NotPrimeError, ParameterError
from generalized_turan.furedi import (
    build_furedi,
    embedding_ratio,
    select_q,
    smallest_feasible_n,
    special_neighbors,
    verify_furedi,
)


@pytest.mark.parametrize(("n", "t", "q"), [(24, 3, 7), (8, 2, 3), (48, 2, 7), (40, 3, 9)])
def test_select_q(n, t, q):
    """The largest admissible prime power is chosen."""
    choice = select_q(n, t)
    assert choice.q == q
    assert choice.vertex_count == (q * q - 1) // (t - 1)
    assert choice.vertex_count <= n


def test_select_q_reports_field_decomposition():
    """q = 9 is reported as 3^2."""
    choice = select_q(40, 3)
    assert (choice.p, choice.k) == (3, 2)


def test_select_q_infeasible_reports_smallest_n():
    """Too small a budget names the least feasible n."""
    with pytest.raises(InfeasibleError) as excinfo:
        select_q(5, 5)
    assert excinfo.value.smallest_n == smallest_feasible_n(5) == 6


def test_select_q_rejects_bad_parameters():
    """n < 3 and t < 2 are parameter errors."""
    with pytest.raises(ParameterError):
        select_q(2, 3)
    with pytest.raises(ParameterError):
        select_q(10, 1)


@pytest.mark.parametrize(("q", "t"), [(5, 2), (7, 3), (7, 4), (9, 3), (4, 2), (8, 2)])
def test_furedi_structure(q, t):
    """Vertex count, degree dichotomy, codegrees and K_{2,t}-freeness all hold."""
    fg = build_furedi(q, t)
    report = verify_furedi(fg, trials=5)
    assert fg.graph.order == (q * q - 1) // (t - 1)
    assert report.vertex_count_ok
    assert report.dichotomy_ok
    assert report.codegree_ok
    assert report.max_codegree <= t - 1
    assert report.k2t_free
    assert report.representatives_ok
    assert report.passed


def test_special_vertices_have_degree_q_minus_1():
    """Special classes lose their loop."""
    fg = build_furedi(7, 3)
    assert fg.special
    for v in fg.graph.vertices():
        assert fg.graph.degree(v) == (6 if v in fg.special else 7)
    assert set(special_neighbors(fg, 0)) <= fg.special


def test_subgroup_has_order_t_minus_1():
    """The defining subgroup has t - 1 members."""
    fg = build_furedi(13, 4)
    assert len(fg.subgroup()) == 3
    assert count_k2t(fg.graph, 4).value == 0


def test_build_furedi_errors():
    """Divisibility and prime-power requirements are enforced."""
    with pytest.raises(DivisibilityError):
        build_furedi(4, 3)
    with pytest.raises(NotPrimeError):
        build_furedi(6, 2)
    with pytest.raises(ParameterError):
        build_furedi(5, 1)


def test_nonadjacent_codegree_deviations_are_logged(caplog):
    """Each deviation from codegree t - 1 on a non-adjacent pair is a warning."""
    with caplog.at_level(logging.WARNING, logger="generalized_turan.furedi"):
        report = verify_furedi(build_furedi(5, 3), trials=2)
    warnings = [r for r in caplog.records if r.name == "generalized_turan.furedi" and r.levelno == logging.WARNING]
    assert len(warnings) == report.nonadjacent_deviations


def test_embedding_ratio_for_edges():
    """An edge embeds 2|E| times."""
    fg = build_furedi(7, 3)
    ratio = embedding_ratio(path_graph(2), fg)
    assert ratio.count == 2 * fg.graph.edge_count
    assert ratio.ratio == pytest.approx(ratio.count / ratio.predicted)
    assert 0.5 <= ratio.ratio <= 1.5


@pytest.mark.parametrize("change", ["remove", "add"])
def test_verify_detects_a_flipped_edge(change):
    """One edge more or less breaks the degree dichotomy and the whole report."""
    fg = build_furedi(5, 3)
    g = fg.graph
    if change == "remove":
        u, v = g.edge_list()[0]
        corrupted = g.without_edge(u, v)
    else:
        u, v = next((0, w) for w in range(1, g.order) if not g.has_edge(0, w))
        corrupted = g.with_edge(u, v)
    report = verify_furedi(fg.model_copy(update={"graph": corrupted}))
    assert not report.dichotomy_ok
    assert not report.passed
