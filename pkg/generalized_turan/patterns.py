"""Resolution of graph arguments: builtin names, ``@file`` edge lists and graph6 strings."""

import re
from collections.abc import Callable
from pathlib import Path

from generalized_turan.constructions import (
    build_k2rpq,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    petersen,
    spider,
    star_graph,
)
from generalized_turan.errors import GraphFormatError, InvalidGraphError
from generalized_turan.graph_core import Graph, graph6_decode

ORDER_HEADER = "# order"

BUILTINS: dict[str, tuple[int, Callable[..., Graph]]] = {
    "path": (1, path_graph),
    "star": (1, star_graph),
    "cycle": (1, cycle_graph),
    "clique": (1, complete_graph),
    "k2t": (1, lambda t: complete_bipartite(2, t)),
    "kab": (2, complete_bipartite),
    "k2rpq": (3, build_k2rpq),
    "spider": (2, spider),
    "empty": (1, empty_graph),
}

_NAME = re.compile(r"^([a-z0-9]+?)((?:_\d+)*)$")


def builtin_names() -> list[str]:
    """Usage strings for every builtin pattern."""
    arguments = {1: "k", 2: "a_b", 3: "p_q_r"}
    names = [f"{name}_{arguments[arity]}" for name, (arity, _) in BUILTINS.items()]
    return [*names, "petersen"]


def _builtin(text: str) -> Graph | None:
    if text == "petersen":
        return petersen()
    match = _NAME.match(text)
    if not match or match.group(1) not in BUILTINS:
        return None
    arity, factory = BUILTINS[match.group(1)]
    numbers = [int(part) for part in match.group(2).split("_")[1:]]
    if len(numbers) != arity:
        msg = f"builtin {match.group(1)!r} takes {arity} numeric argument(s), got {text!r}"
        raise GraphFormatError(msg, offset=0)
    return factory(*numbers)


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines (zero-based); an ``# order N`` line fixes the vertex count."""
    order: int | None = None
    edges: list[tuple[int, int]] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped.startswith(ORDER_HEADER):
            try:
                order = int(stripped[len(ORDER_HEADER) :])
            except ValueError as e:
                msg = f"bad order header {stripped!r}"
                raise GraphFormatError(msg, offset=offset) from e
        elif stripped and not stripped.startswith("#"):
            parts = stripped.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                msg = f"expected 'u v' with non-negative integers, got {stripped!r}"
                raise GraphFormatError(msg, offset=offset)
            edges.append((int(parts[0]), int(parts[1])))
        offset += len(line.encode())
    if order is None:
        order = 1 + max((max(e) for e in edges), default=-1)
    return Graph(order, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{ORDER_HEADER} {g.order}"]
    lines += [f"{u} {v}" for u, v in g.edge_list()]
    return "\n".join(lines) + "\n"


def resolve_graph(text: str) -> Graph:
    """Turn a command-line graph argument into a graph.

    Accepts a builtin name such as ``path_5`` or ``k2rpq_1_1_1``, ``@path`` for an edge-list
    file, or a graph6 string.
    """
    text = text.strip()
    if not text:
        raise GraphFormatError("empty graph argument", offset=0)
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            return parse_edge_list(path.read_text())
        except OSError as e:
            msg = f"cannot read edge list {path}: {e}"
            raise InvalidGraphError(msg) from e
    if (g := _builtin(text)) is not None:
        return g
    return graph6_decode(text)
