"""Core graph representation, graph6 interchange and elementary graph quantities."""

from collections import Counter, deque
from collections.abc import Iterable, Iterator, Sequence
from enum import StrEnum

import networkx as nx
from pydantic import BaseModel, Field, model_validator

from generalized_turan.errors import GraphFormatError, InvalidGraphError, SizeLimitError

GRAPH6_MAX_ORDER = 62
_G6_BIAS = 63


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable undirected simple graph on the vertices ``0..order-1``.

    Adjacency is kept as one integer bitmask per vertex: bit ``v`` of ``mask(u)`` is set
    iff ``uv`` is an edge. Python integers are unbounded, so the same representation
    serves every order.
    """

    __slots__ = ("_edges", "_masks", "_order")

    def __init__(self, order: int, edges: Iterable[tuple[int, int]] = ()):
        if order < 0:
            msg = f"order must be non-negative, got {order}"
            raise InvalidGraphError(msg)
        masks = [0] * order
        normalized: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                msg = f"self-loop pair ({u}, {v}) is not allowed"
                raise InvalidGraphError(msg)
            if not (0 <= u < order and 0 <= v < order):
                msg = f"pair ({u}, {v}) has an endpoint outside 0..{order - 1}"
                raise InvalidGraphError(msg)
            a, b = (u, v) if u < v else (v, u)
            normalized.add((a, b))
            masks[a] |= 1 << b
            masks[b] |= 1 << a
        self._order = order
        self._edges = frozenset(normalized)
        self._masks = tuple(masks)

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        """Build a graph from symmetric adjacency bitmasks without re-validating them."""
        graph = cls.__new__(cls)
        graph._order = len(masks)
        graph._masks = tuple(masks)
        graph._edges = frozenset((u, v) for u in range(len(masks)) for v in iter_bits(masks[u] >> (u + 1) << (u + 1)))
        return graph

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Convert a networkx graph, numbering its nodes in sorted order."""
        index = {node: i for i, node in enumerate(sorted(g.nodes))}
        return cls(len(index), ((index[u], index[v]) for u, v in g.edges if u != v))

    @property
    def order(self) -> int:
        return self._order

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(self._order)

    def mask(self, v: int) -> int:
        return self._masks[v]

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self._masks[v]))

    def degree(self, v: int) -> int:
        return self._masks[v].bit_count()

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self._masks]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._masks[u] >> v & 1)

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self._edges)

    def with_edge(self, u: int, v: int) -> "Graph":
        """Return a copy with the edge ``uv`` added."""
        return Graph(self._order, [*self._edges, (u, v)])

    def without_edge(self, u: int, v: int) -> "Graph":
        """Return a copy with the edge ``uv`` removed."""
        drop = (min(u, v), max(u, v))
        return Graph(self._order, (e for e in self._edges if e != drop))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with every vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self._order, ((perm[u], perm[v]) for u, v in self._edges))

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph on ``vertices``; vertex ``vertices[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(index),
            ((index[u], index[v]) for u, v in self._edges if u in index and v in index),
        )

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        seen = 0
        result = []
        for start in range(self._order):
            if seen >> start & 1:
                continue
            component = 1 << start
            frontier = 1 << start
            while frontier:
                reach = 0
                for v in iter_bits(frontier):
                    reach |= self._masks[v]
                frontier = reach & ~component
                component |= frontier
            seen |= component
            result.append(list(iter_bits(component)))
        return result

    def is_connected(self) -> bool:
        return self._order <= 1 or len(self.components()) == 1

    def is_tree(self) -> bool:
        return self._order >= 1 and self.edge_count == self._order - 1 and self.is_connected()

    def distances_from(self, source: int) -> list[int]:
        """Breadth-first distances from ``source``; unreachable vertices get -1."""
        dist = [-1] * self._order
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in iter_bits(self._masks[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self._order))
        g.add_edges_from(self._edges)
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._order == other._order and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._order, self._edges))

    def __repr__(self) -> str:
        return f"Graph(order={self._order}, edges={self.edge_count})"


class ForbiddenCase(StrEnum):
    """Growth regime of ex(n, K_{2,t}, F) that a forbidden graph falls into."""

    ZERO = "ZERO"
    CLIQUE_BLOCKS = "CLIQUE_BLOCKS"
    FUREDI_QUADRATIC = "FUREDI_QUADRATIC"
    BIPARTITE_OTHER = "BIPARTITE_OTHER"
    CHROMATIC = "CHROMATIC"


class Classification(BaseModel):
    """Classification of a forbidden graph F for ex(n, K_{2,t}, F)."""

    case: ForbiddenCase
    params: tuple[int, int, int] | None = Field(default=None, description="(p, q, r) when F = K_{2,r}^{p,q}")
    beta: int | None = Field(default=None, description="beta(F), present iff F is bipartite")
    chi: int = Field(..., description="chromatic number of F")
    growth: str = Field(default="", description="order of magnitude of ex(n, K_{2,t}, F)")

    @model_validator(mode="after")
    def _params_match_case(self) -> "Classification":
        shaped = self.case in (ForbiddenCase.CLIQUE_BLOCKS, ForbiddenCase.FUREDI_QUADRATIC)
        if shaped != (self.params is not None):
            msg = f"params must be present exactly for K_{{2,r}}^{{p,q}} cases, got {self.case} with {self.params}"
            raise ValueError(msg)
        if (self.beta is not None) != (self.chi <= 2):
            msg = f"beta must be present exactly for bipartite F (chi={self.chi}, beta={self.beta})"
            raise ValueError(msg)
        return self


def build_graph(order: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from an edge list, collapsing duplicate pairs."""
    return Graph(order, edge_list)


def _graph6_pairs(n: int) -> Iterator[tuple[int, int]]:
    for j in range(1, n):
        for i in range(j):
            yield i, j


def graph6_encode(g: Graph) -> str:
    """Encode ``g`` as a graph6 string without relabelling its vertices."""
    n = g.order
    if n > GRAPH6_MAX_ORDER:
        msg = f"graph6 encoding supports at most {GRAPH6_MAX_ORDER} vertices, got {n}"
        raise SizeLimitError(msg)
    bits = [1 if g.has_edge(i, j) else 0 for i, j in _graph6_pairs(n)]
    chars = [chr(n + _G6_BIAS)]
    for start in range(0, len(bits), 6):
        group = bits[start : start + 6]
        value = 0
        for bit in group:
            value = value << 1 | bit
        value <<= 6 - len(group)
        chars.append(chr(value + _G6_BIAS))
    return "".join(chars)


def graph6_decode(text: str) -> Graph:
    """Decode a single-byte-order graph6 string."""
    if not text:
        raise GraphFormatError("empty graph6 string", offset=0)
    for offset, ch in enumerate(text):
        if not 63 <= ord(ch) <= 126:
            msg = f"byte {ord(ch)} at offset {offset} is outside the graph6 range 63..126"
            raise GraphFormatError(msg, offset=offset)
    n = ord(text[0]) - _G6_BIAS
    if n > GRAPH6_MAX_ORDER:
        raise GraphFormatError("multi-byte graph6 order prefix is not supported", offset=0)
    pairs = list(_graph6_pairs(n))
    expected = (len(pairs) + 5) // 6
    body = text[1:]
    if len(body) < expected:
        msg = f"truncated graph6 string: expected {expected} data bytes for order {n}, found {len(body)}"
        raise GraphFormatError(msg, offset=len(text))
    if len(body) > expected:
        msg = f"trailing data after {expected} graph6 data bytes"
        raise GraphFormatError(msg, offset=1 + expected)
    edges = []
    index = 0
    for pos, ch in enumerate(body):
        value = ord(ch) - _G6_BIAS
        for shift in range(5, -1, -1):
            bit = value >> shift & 1
            if index < len(pairs):
                if bit:
                    edges.append(pairs[index])
            elif bit:
                msg = "non-zero padding bit in final graph6 byte"
                raise GraphFormatError(msg, offset=1 + pos)
            index += 1
    return Graph(n, edges)


def codegree(g: Graph, u: int, v: int) -> int:
    """Number of common neighbours of ``u`` and ``v``."""
    if u == v:
        msg = f"codegree needs two distinct vertices, got ({u}, {v})"
        raise InvalidGraphError(msg)
    if not (0 <= u < g.order and 0 <= v < g.order):
        msg = f"pair ({u}, {v}) is outside 0..{g.order - 1}"
        raise InvalidGraphError(msg)
    return (g.mask(u) & g.mask(v)).bit_count()


def complete_multipartite(parts: Sequence[int]) -> Graph:
    """Complete multipartite graph whose parts are contiguous vertex ranges in the given order."""
    if not parts:
        raise InvalidGraphError("complete_multipartite needs at least one part")
    if any(size < 1 for size in parts):
        msg = f"every part must have at least one vertex, got {list(parts)}"
        raise InvalidGraphError(msg)
    owner = [i for i, size in enumerate(parts) for _ in range(size)]
    n = len(owner)
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n) if owner[u] != owner[v]))


def disjoint_union(gs: Sequence[Graph]) -> Graph:
    """Vertex-disjoint union; the vertices of ``gs[i]`` follow those of ``gs[i-1]``."""
    edges = []
    shift = 0
    for g in gs:
        edges.extend((u + shift, v + shift) for u, v in g.edges)
        shift += g.order
    return Graph(shift, edges)


def _greedy_clique(g: Graph) -> list[int]:
    best: list[int] = []
    by_degree = sorted(g.vertices(), key=lambda v: (-g.degree(v), v))
    for start in by_degree:
        clique = [start]
        common = g.mask(start)
        for v in by_degree:
            if common >> v & 1:
                clique.append(v)
                common &= g.mask(v)
        if len(clique) > len(best):
            best = clique
    return best


def _dsatur_upper_bound(g: Graph) -> int:
    colors = [-1] * g.order
    for _ in range(g.order):
        v = max(
            (w for w in g.vertices() if colors[w] < 0),
            key=lambda w: (len({colors[x] for x in iter_bits(g.mask(w)) if colors[x] >= 0}), g.degree(w), -w),
        )
        taken = {colors[x] for x in iter_bits(g.mask(v))}
        colors[v] = next(c for c in range(g.order) if c not in taken)
    return max(colors) + 1


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number by DSATUR-ordered branch and bound."""
    n = g.order
    if n == 0:
        return 0
    if g.edge_count == 0:
        return 1
    clique = _greedy_clique(g)
    lower = len(clique)
    best = _dsatur_upper_bound(g)
    if best == lower:
        return best

    colors = [-1] * n
    for color, v in enumerate(clique):
        colors[v] = color
    masks = g.masks

    def search(colored: int, used: int) -> None:
        nonlocal best
        if used >= best:
            return
        if colored == n:
            best = used
            return
        v = max(
            (w for w in range(n) if colors[w] < 0),
            key=lambda w: (
                len({colors[x] for x in iter_bits(masks[w]) if colors[x] >= 0}),
                sum(1 for x in iter_bits(masks[w]) if colors[x] < 0),
                -w,
            ),
        )
        forbidden = {colors[x] for x in iter_bits(masks[v])}
        for color in range(used):
            if color in forbidden:
                continue
            colors[v] = color
            search(colored + 1, used)
            colors[v] = -1
            if best == lower:
                return
        if used + 1 < best:
            colors[v] = used
            search(colored + 1, used + 1)
            colors[v] = -1

    search(lower, lower)
    return best


def bipartite_sides(g: Graph) -> list[tuple[int, int]] | None:
    """Per-component colour-class sizes of a proper 2-colouring, or None if not bipartite."""
    side = [-1] * g.order
    sizes = []
    for start in g.vertices():
        if side[start] >= 0:
            continue
        side[start] = 0
        counts = [1, 0]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in iter_bits(g.mask(u)):
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    counts[side[w]] += 1
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
        sizes.append((counts[0], counts[1]))
    return sizes


def bipartite_beta(g: Graph) -> int | None:
    """Least p with g a subgraph of some K_{p,q}; None when g is not bipartite.

    Each component may be flipped independently and q is unconstrained, so the optimum
    takes the smaller side of every component.
    """
    sides = bipartite_sides(g)
    if sides is None:
        return None
    return sum(min(a, b) for a, b in sides)


def _refine(masks: Sequence[int], colors: list[int]) -> list[int]:
    n = len(colors)
    while True:
        signatures = [(colors[v], tuple(sorted(colors[w] for w in iter_bits(masks[v])))) for v in range(n)]
        ranking = {sig: rank for rank, sig in enumerate(sorted(set(signatures)))}
        refined = [ranking[sig] for sig in signatures]
        if len(ranking) == len(set(colors)):
            return refined
        colors = refined


def _orbit(v: int, generators: Sequence[Sequence[int]]) -> set[int]:
    orbit = {v}
    frontier = [v]
    while frontier:
        u = frontier.pop()
        for perm in generators:
            if perm[u] not in orbit:
                orbit.add(perm[u])
                frontier.append(perm[u])
    return orbit


def canonical_form(g: Graph) -> str:
    """Canonical graph6 string: equal for two graphs iff they are isomorphic.

    Colour refinement followed by individualisation of the first non-singleton cell;
    the least graph6 string over all search leaves is the certificate. Two leaves with
    the same string give an automorphism, and a child whose orbit under the automorphisms
    fixing the current path already holds an explored sibling is skipped.
    """
    n = g.order
    if n > GRAPH6_MAX_ORDER:
        msg = f"canonical form supports at most {GRAPH6_MAX_ORDER} vertices, got {n}"
        raise SizeLimitError(msg)
    masks = g.masks
    best: str | None = None
    leaves: dict[str, list[int]] = {}
    automorphisms: list[list[int]] = []

    def search(colors: list[int], path: list[int]) -> None:
        nonlocal best
        colors = _refine(masks, colors)
        counts = Counter(colors)
        if len(counts) == n:
            encoded = graph6_encode(g.relabel(colors))
            if (seen := leaves.get(encoded)) is None:
                leaves[encoded] = colors
            else:
                position = {label: v for v, label in enumerate(seen)}
                automorphisms.append([position[colors[v]] for v in range(n)])
            if best is None or encoded < best:
                best = encoded
            return
        target = min(color for color, size in counts.items() if size > 1)
        explored: list[int] = []
        for v in range(n):
            if colors[v] != target:
                continue
            stabiliser = [a for a in automorphisms if all(a[u] == u for u in path)]
            if stabiliser and not _orbit(v, stabiliser).isdisjoint(explored):
                continue
            explored.append(v)
            search([2 * c + (0 if w == v else 1) for w, c in enumerate(colors)], [*path, v])

    search([0] * n, [])
    return best if best is not None else graph6_encode(g)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.order == h.order and g.edge_count == h.edge_count and canonical_form(g) == canonical_form(h)
