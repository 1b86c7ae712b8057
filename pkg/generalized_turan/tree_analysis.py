"""Greedy A/B partition of trees, nice-tree recognition and the exponents of ex(n, T, K_{2,t}).

``A`` starts as the degree-2 vertices; a non-leaf vertex of ``B`` moves to ``A`` as soon as
it has at most two neighbours left in ``B``. ``Q'`` is ``B`` without its leaves, and the
pieces ``T_j`` are the components of ``T - Q'`` that contain a vertex of ``A``.
"""

import random
from collections.abc import Iterator
from fractions import Fraction

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_serializer

from generalized_turan.errors import NotApplicableError, StructureError
from generalized_turan.graph_core import Graph, iter_bits


class TreePiece(BaseModel):
    vertices: list[int] = Field(..., description="vertex set of the component of T - Q'")
    ell: int = Field(..., description="number of Q' vertices adjacent to the component")


class TreeDecomposition(BaseModel):
    order: int
    a: list[int]
    b: list[int]
    add_order: list[int] = Field(..., description="vertices in the order they moved from B to A")
    leaves: list[int]
    leaves_adj_qprime: list[int]
    q_prime: list[int]
    q_components: list[list[int]]
    t_components: list[TreePiece]
    s: int
    nice: bool


class ExponentReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    furedi_exp: Fraction
    literal_exp: Fraction | None = Field(default=None, description="None for nice trees and for K_2")
    proof_exp: Fraction
    agreement: bool | None = None
    nice: bool = False

    @field_serializer("furedi_exp", "proof_exp")
    def _rational(self, value: Fraction) -> str:
        return str(value)

    @field_serializer("literal_exp")
    def _literal(self, value: Fraction | None) -> str:
        if value is None:
            return "nice" if self.nice else "n/a"
        return str(value)


def _require_tree(t_graph: Graph) -> None:
    if t_graph.order < 2 or not t_graph.is_tree():
        msg = f"expected a tree on at least 2 vertices, got {t_graph!r}"
        raise StructureError(msg)


def _partition(t_graph: Graph) -> tuple[int, list[int]]:
    in_a = 0
    for v in t_graph.vertices():
        if t_graph.degree(v) == 2:
            in_a |= 1 << v
    add_order = []
    changed = True
    while changed:
        changed = False
        for v in t_graph.vertices():
            if in_a >> v & 1 or t_graph.degree(v) <= 1:
                continue
            if (t_graph.mask(v) & ~in_a).bit_count() <= 2:
                in_a |= 1 << v
                add_order.append(v)
                changed = True
    return in_a, add_order


def partition_ab(t_graph: Graph) -> tuple[list[int], list[int], list[int]]:
    """Return ``(A, B, add_order)`` after the greedy fixpoint scan in ascending vertex order."""
    _require_tree(t_graph)
    in_a, add_order = _partition(t_graph)
    a = list(iter_bits(in_a))
    b = [v for v in t_graph.vertices() if not in_a >> v & 1]
    return a, b, add_order


def decompose_tree(t_graph: Graph) -> TreeDecomposition:
    _require_tree(t_graph)
    a, b, add_order = partition_ab(t_graph)
    leaves = [v for v in t_graph.vertices() if t_graph.degree(v) == 1]
    leaf_set = set(leaves)
    q_prime = [v for v in b if v not in leaf_set]
    q_mask = sum(1 << v for v in q_prime)
    leaves_adj = [v for v in leaves if t_graph.mask(v) & q_mask]

    q_components = [[q_prime[i] for i in comp] for comp in t_graph.induced_subgraph(q_prime).components()]

    rest = [v for v in t_graph.vertices() if not q_mask >> v & 1]
    a_set = set(a)
    pieces = []
    for comp in t_graph.induced_subgraph(rest).components():
        vertices = [rest[i] for i in comp]
        if not a_set.intersection(vertices):
            continue
        border = 0
        for v in vertices:
            border |= t_graph.mask(v)
        pieces.append(TreePiece(vertices=vertices, ell=(border & q_mask).bit_count()))

    nice = not q_prime and t_graph.order >= 3
    if nice:
        pieces = []
    return TreeDecomposition(
        order=t_graph.order,
        a=a,
        b=b,
        add_order=add_order,
        leaves=leaves,
        leaves_adj_qprime=leaves_adj,
        q_prime=q_prime,
        q_components=q_components,
        t_components=pieces,
        s=len(pieces),
        nice=nice,
    )


def furedi_exponent(t_graph: Graph) -> Fraction:
    """(|V(T)| + 1) / 2, the exponent of embeddings of T in a Füredi graph."""
    _require_tree(t_graph)
    return Fraction(t_graph.order + 1, 2)


def literal_exponent(d: TreeDecomposition) -> Fraction:
    """|L| + (|A| + s) / 2 with L every leaf; defined for trees that are not nice."""
    if d.nice:
        raise NotApplicableError("the tree is nice; use furedi_exponent")
    if d.order < 3:
        raise NotApplicableError("trees on fewer than 3 vertices have no greedy-partition exponent")
    return len(d.leaves) + Fraction(len(d.a) + d.s, 2)


def proof_exponent(d: TreeDecomposition) -> Fraction:
    """|L_adj| + sum of (|T_j| - l_j + 1) / 2, the per-piece fixed-leaf count."""
    if not d.q_prime:
        return Fraction(d.order + 1, 2)
    return len(d.leaves_adj_qprime) + sum(
        (Fraction(len(piece.vertices) - piece.ell + 1, 2) for piece in d.t_components), Fraction(0)
    )


def exponent_report(t_graph: Graph, d: TreeDecomposition | None = None) -> ExponentReport:
    d = d or decompose_tree(t_graph)
    furedi = furedi_exponent(t_graph)
    proof = proof_exponent(d)
    if d.nice or d.order < 3:
        return ExponentReport(furedi_exp=furedi, proof_exp=proof, nice=d.nice)
    literal = literal_exponent(d)
    return ExponentReport(furedi_exp=furedi, literal_exp=literal, proof_exp=proof, agreement=literal == proof)


def analyze_tree(t_graph: Graph) -> dict:
    """Decomposition and exponents as one JSON-ready document."""
    d = decompose_tree(t_graph)
    return {**d.model_dump(mode="json"), **exponent_report(t_graph, d).model_dump(mode="json")}


def enumerate_trees(max_order: int, min_order: int = 2) -> Iterator[Graph]:
    """Every unlabelled tree with ``min_order..max_order`` vertices, once each."""
    for n in range(max(min_order, 1), max_order + 1):
        if n <= 2:
            yield Graph(n, [(0, 1)] if n == 2 else [])
            continue
        for tree in nx.nonisomorphic_trees(n):
            yield Graph.from_networkx(tree)


def random_tree(order: int, rng: random.Random) -> Graph:
    """Uniformly random labelled tree on ``order >= 2`` vertices via a Prüfer sequence."""
    if order == 2:
        return Graph(2, [(0, 1)])
    sequence = [rng.randrange(order) for _ in range(order - 2)]
    return Graph.from_networkx(nx.from_prufer_sequence(sequence))


def relabel_consistent(t_graph: Graph, perm: list[int]) -> bool:
    """Whether the A/B split of ``t_graph`` relabelled by ``perm`` is the relabelled split."""
    a, _, _ = partition_ab(t_graph)
    a_relabelled, _, _ = partition_ab(t_graph.relabel(perm))
    return sorted(perm[v] for v in a) == a_relabelled
