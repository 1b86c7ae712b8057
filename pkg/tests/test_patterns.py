import pytest

from generalized_turan.constructions import build_k2rpq, complete_bipartite, cycle_graph, path_graph, petersen
from generalized_turan.errors import GraphFormatError, InvalidGraphError
from generalized_turan.graph_core import Graph
from generalized_turan.patterns import builtin_names, format_edge_list, parse_edge_list, resolve_graph


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("path_5", path_graph(5)),
        ("cycle_4", cycle_graph(4)),
        ("k2t_3", complete_bipartite(2, 3)),
        ("kab_2_4", complete_bipartite(2, 4)),
        ("k2rpq_1_1_2", build_k2rpq(1, 1, 2)),
        ("petersen", petersen()),
        ("C~", Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])),
    ],
)
def test_resolve_graph(text, expected):
    assert resolve_graph(text) == expected


def test_wrong_arity_is_a_format_error():
    with pytest.raises(GraphFormatError) as excinfo:
        resolve_graph("kab_3")
    assert excinfo.value.offset == 0


def test_builtin_names():
    names = builtin_names()
    assert "k2rpq_p_q_r" in names
    assert "petersen" in names


def test_edge_list_with_header_keeps_isolated_vertices():
    g = parse_edge_list("# order 5\n0 1\n# a comment\n1 2\n")
    assert g.order == 5
    assert g.edge_list() == [(0, 1), (1, 2)]


def test_edge_list_without_header():
    assert parse_edge_list("0 3\n\n1 2\n").order == 4


def test_edge_list_errors_carry_byte_offsets():
    with pytest.raises(GraphFormatError) as excinfo:
        parse_edge_list("0 1\n1 x\n")
    assert excinfo.value.offset == 4
    with pytest.raises(GraphFormatError) as excinfo:
        parse_edge_list("# order five\n")
    assert excinfo.value.offset == 0


def test_edge_list_file(tmp_path):
    path = tmp_path / "c5.txt"
    path.write_text(format_edge_list(cycle_graph(5)))
    assert resolve_graph(f"@{path}") == cycle_graph(5)
    with pytest.raises(InvalidGraphError):
        resolve_graph(f"@{tmp_path / 'missing.txt'}")


def test_empty_argument():
    with pytest.raises(GraphFormatError):
        resolve_graph("  ")
