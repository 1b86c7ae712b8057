"""Lower-bound constructions, multipartite optimisers and the forbidden-graph classifier."""

import logging
import random
from collections.abc import Iterator
from math import comb

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from generalized_turan.counting import contains, count_embeddings_fixed, count_k2t
from generalized_turan.errors import (
    ConsistencyError,
    InfeasibleError,
    NotApplicableError,
    ParameterError,
    SizeLimitError,
    StructureError,
)
from generalized_turan.furedi import FurediGraph, build_furedi, select_q
from generalized_turan.graph_core import (
    Classification,
    ForbiddenCase,
    Graph,
    bipartite_beta,
    build_graph,
    chromatic_number,
    complete_multipartite,
    disjoint_union,
    iter_bits,
)
from generalized_turan.tree_analysis import TreePiece, decompose_tree

logger = logging.getLogger(__name__)

MULTIPARTITE_MAX_N = 200
MULTIPARTITE_MAX_PROFILES = 5_000_000
ASYMPTOTIC_MAX_GRID = 1_000_000
ASYMPTOTIC_MIN_STEP = 1e-9


# Named families


def path_graph(order: int) -> Graph:
    return Graph(order, ((i, i + 1) for i in range(order - 1)))


def cycle_graph(order: int) -> Graph:
    if order < 3:
        msg = f"a cycle needs at least 3 vertices, got {order}"
        raise ParameterError(msg)
    return Graph(order, ((i, (i + 1) % order) for i in range(order)))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_graph(order: int) -> Graph:
    return Graph(order, ((u, v) for u in range(order) for v in range(u + 1, order)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def empty_graph(order: int) -> Graph:
    return Graph(order)


def spider(legs: int, length: int) -> Graph:
    """Centre 0 with ``legs`` disjoint paths of ``length`` edges."""
    edges = []
    for leg in range(legs):
        previous = 0
        for step in range(length):
            vertex = 1 + leg * length + step
            edges.append((previous, vertex))
            previous = vertex
    return Graph(1 + legs * length, edges)


def petersen() -> Graph:
    return Graph.from_networkx(nx.petersen_graph())


def build_k2rpq(p: int, q: int, r: int) -> Graph:
    """K_{2,r} on hubs 0 and 1 with ``p`` pendants on hub 0 and ``q`` on hub 1."""
    if min(p, q, r) < 0:
        msg = f"p, q, r must be non-negative, got ({p}, {q}, {r})"
        raise ParameterError(msg)
    if p + q + r == 0:
        raise ParameterError("K_{2,0}^{0,0} is two isolated vertices and is not a meaningful pattern")
    edges = []
    for i in range(r):
        edges += [(0, 2 + i), (1, 2 + i)]
    edges += [(0, 2 + r + i) for i in range(p)]
    edges += [(1, 2 + r + p + i) for i in range(q)]
    return Graph(2 + p + q + r, edges)


def clique_blocks(n: int, m: int, include_leftover: bool = True) -> Graph:
    """floor(n/m) disjoint copies of K_m, plus a clique on the n mod m leftover vertices."""
    if m < 1 or n < 0:
        msg = f"clique_blocks needs m >= 1 and n >= 0, got n={n}, m={m}"
        raise ParameterError(msg)
    blocks = [complete_graph(m)] * (n // m)
    leftover = n % m
    if leftover:
        blocks.append(complete_graph(leftover) if include_leftover else empty_graph(leftover))
    return disjoint_union(blocks)


def pad(g: Graph, n: int) -> Graph:
    """``g`` plus isolated vertices up to order ``n``."""
    return disjoint_union([g, empty_graph(max(0, n - g.order))])


def attach_tree(h: Graph, h_vertex: int, tree: Graph, leaf: int) -> Graph:
    """Glue ``tree`` onto ``h`` by identifying ``leaf`` with ``h_vertex``.

    The vertices of ``h`` keep their labels; the other tree vertices follow in ascending order.
    """
    if not tree.is_tree():
        raise StructureError("attach_tree needs a tree")
    if tree.order > 1 and tree.degree(leaf) != 1:
        msg = f"vertex {leaf} is not a leaf of the tree"
        raise StructureError(msg)
    if not 0 <= h_vertex < h.order:
        msg = f"vertex {h_vertex} is not a vertex of the host"
        raise ParameterError(msg)
    label = {leaf: h_vertex}
    for v in tree.vertices():
        if v != leaf:
            label[v] = h.order + len(label) - 1
    edges = [*h.edges, *((label[u], label[v]) for u, v in tree.edges)]
    return Graph(h.order + tree.order - 1, edges)


# Complete multipartite graphs


class MultipartiteProfile(BaseModel):
    parts: list[int] = Field(..., description="non-increasing part sizes")
    t: int
    count: int = Field(..., description="copies of K_{2,t} in the complete multipartite graph")


class FractionProfile(BaseModel):
    fractions: list[float] = Field(..., description="non-increasing part fractions summing to 1")
    objective: float = Field(..., description="leading coefficient of the K_{2,t} count")
    resolution: float = Field(..., description="grid step actually used")
    balanced_objective: float


def multipartite_k2t(parts: list[int], t: int) -> int:
    """Copies of K_{2,t} in the complete multipartite graph with the given parts."""
    if t < 2:
        msg = f"t must be at least 2, got {t}"
        raise ParameterError(msg)
    n = sum(parts)
    total = sum(comb(a, 2) * comb(n - a, t) for a in parts)
    for i, a in enumerate(parts):
        for b in parts[i + 1 :]:
            total += a * b * comb(n - a - b, t)
    return total // 2 if t == 2 else total


def _partition_count(n: int, k: int) -> int:
    """Partitions of n into at most k parts."""
    ways = [1] + [0] * n
    for part in range(1, k + 1):
        for m in range(part, n + 1):
            ways[m] += ways[m - part]
    return ways[n]


def _partitions(n: int, k: int, largest: int | None = None) -> Iterator[list[int]]:
    """Non-increasing partitions of n into at most k parts, lexicographically descending."""
    if n == 0:
        yield []
        return
    if k == 0:
        return
    for first in range(min(n, largest or n), 0, -1):
        if first * k < n:
            break
        for rest in _partitions(n - first, k - 1, first):
            yield [first, *rest]


def optimize_multipartite(n: int, k: int, t: int) -> MultipartiteProfile:
    """Best complete k-partite graph on n vertices for K_{2,t} copies, by exhaustive scan."""
    if not 1 <= k <= n <= MULTIPARTITE_MAX_N:
        msg = f"optimize_multipartite needs 1 <= k <= n <= {MULTIPARTITE_MAX_N}, got n={n}, k={k}"
        raise SizeLimitError(msg)
    total = _partition_count(n, k)
    if total > MULTIPARTITE_MAX_PROFILES:
        msg = f"{total} part profiles for n={n}, k={k} exceed the scan limit {MULTIPARTITE_MAX_PROFILES}"
        raise SizeLimitError(msg)
    best: list[int] = []
    best_count = -1
    # Descending lexicographic order, so a strict improvement test keeps the largest tie.
    for parts in _partitions(n, k):
        count = multipartite_k2t(parts, t)
        if count > best_count:
            best, best_count = parts, count
    return MultipartiteProfile(parts=best, t=t, count=best_count)


def _objective_rows(x: np.ndarray, t: int) -> np.ndarray:
    same = (x**2 / 2 * (1 - x) ** t).sum(axis=1)
    cross = np.zeros(x.shape[0])
    k = x.shape[1]
    for i in range(k):
        for j in range(i + 1, k):
            rest = np.clip(1 - x[:, i] - x[:, j], 0.0, None)
            cross += x[:, i] * x[:, j] * rest**t
    value = same + cross
    return value / 2 if t == 2 else value


def _objective(x: np.ndarray, t: int) -> float:
    return float(_objective_rows(x[None, :], t)[0])


def asymptotic_profile(k: int, t: int, resolution: float = 0.005) -> FractionProfile:
    """Maximise the leading coefficient of the K_{2,t} count over k-part fractions.

    Grid search over sorted compositions at ``resolution``, then pairwise coordinate
    descent with halving steps.
    """
    if k < 2 or t < 2:
        msg = f"asymptotic_profile needs k >= 2 and t >= 2, got k={k}, t={t}"
        raise ParameterError(msg)
    if not 0 < resolution <= 0.01:
        msg = f"resolution must lie in (0, 0.01], got {resolution}"
        raise ParameterError(msg)
    steps = round(1 / resolution)
    while _partition_count(steps, k) > ASYMPTOTIC_MAX_GRID:
        steps //= 2
    logger.debug("asymptotic grid: k=%d, t=%d, %d steps", k, t, steps)
    grid = np.array([[*p, *([0] * (k - len(p)))] for p in _partitions(steps, k)], dtype=float) / steps
    balanced = np.full(k, 1 / k)
    grid = np.vstack([grid, balanced])
    values = _objective_rows(grid, t)
    best = grid[int(np.argmax(values))].copy()
    best_value = float(values.max())

    delta = 1 / steps
    while delta >= ASYMPTOTIC_MIN_STEP:
        improved = True
        while improved:
            improved = False
            for i in range(k):
                for j in range(k):
                    if i == j or best[j] < delta:
                        continue
                    trial = best.copy()
                    trial[i] += delta
                    trial[j] -= delta
                    value = _objective(trial, t)
                    if value > best_value:
                        best, best_value, improved = trial, value, True
        delta /= 2
    fractions = sorted((float(v) for v in best), reverse=True)
    return FractionProfile(
        fractions=fractions,
        objective=best_value,
        resolution=1 / steps,
        balanced_objective=_objective(balanced, t),
    )


# Lower-bound graph for trees that are not nice


class G0Construction(BaseModel):
    """Glued lower-bound graph for ex(n, T, K_{2,t}) together with its provenance."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    graph: Graph
    n: int
    t: int
    n_prime: int = Field(..., description="floor((n - |Q'|) / |V(T)|)")
    q: int | None = Field(default=None, description="field order of the glued Füredi blocks")
    q_prime_vertices: dict[int, int] = Field(..., description="tree vertex of Q' -> vertex of the graph")
    pendant_groups: dict[int, int] = Field(..., description="tree vertex of Q' -> number of pendants attached")
    anchors: list[list[int]] = Field(..., description="Füredi-block vertices glued onto Q', per piece")
    anchor_embeddings: list[int] = Field(..., description="fixed-anchor embedding count of each chosen tuple")


def _independent_tuples(fg: FurediGraph, size: int, samples: int, rng: random.Random) -> list[tuple[int, ...]]:
    """Up to ``samples`` distinct greedy tuples of pairwise non-adjacent vertices, non-special first."""
    g = fg.graph
    ordinary = [v for v in g.vertices() if v not in fg.special]
    special = sorted(fg.special)
    seen: set[tuple[int, ...]] = set()
    result = []
    for _ in range(samples):
        rng.shuffle(ordinary)
        rng.shuffle(special)
        chosen: list[int] = []
        blocked = 0
        for v in ordinary + special:
            if blocked >> v & 1:
                continue
            chosen.append(v)
            blocked |= g.mask(v) | 1 << v
            if len(chosen) == size:
                break
        key = tuple(chosen)
        if len(chosen) == size and key not in seen:
            seen.add(key)
            result.append(key)
    return result


def _best_anchors(
    tree: Graph, piece: TreePiece, attachments: list[int], fg: FurediGraph, t: int, samples: int, rng: random.Random
) -> tuple[list[int], int]:
    """Anchor tuple maximising embeddings of the piece plus its attachment vertices."""
    vertices = attachments + piece.vertices
    extended = tree.induced_subgraph(vertices)
    anchors = list(range(len(attachments)))
    best: tuple[int, ...] = ()
    best_count = -1
    for candidate in _independent_tuples(fg, len(attachments), samples, rng):
        count = count_embeddings_fixed(extended, anchors, fg.graph, list(candidate), t=t).value
        if count > best_count:
            best, best_count = candidate, count
    if best_count < 0:
        msg = f"no {len(attachments)} pairwise non-adjacent vertices in F({fg.q}, {t})"
        raise ConsistencyError(msg)
    return list(best), best_count


def construct_g0(tree: Graph, n: int, t: int, seed: int = 0, samples: int = 200) -> G0Construction:
    """Glue pendant stars and Füredi blocks onto a copy of Q' and pad to n vertices."""
    d = decompose_tree(tree)
    if d.nice or not d.q_prime:
        raise NotApplicableError("construct_g0 needs a tree that is not nice")
    n_prime = (n - len(d.q_prime)) // tree.order
    if n_prime < 1:
        msg = f"n={n} is too small for a {tree.order}-vertex tree"
        raise SizeLimitError(msg)
    rng = random.Random(seed)
    q_index = {v: i for i, v in enumerate(d.q_prime)}
    edges = [(q_index[u], q_index[v]) for u, v in tree.edges if u in q_index and v in q_index]
    order = len(d.q_prime)

    leaf_set = set(d.leaves)
    pendant_groups = {}
    for v in d.q_prime:
        if any(w in leaf_set for w in iter_bits(tree.mask(v))):
            edges += [(q_index[v], order + i) for i in range(n_prime)]
            order += n_prime
            pendant_groups[v] = n_prime

    q_mask = sum(1 << v for v in d.q_prime)
    anchors_used = []
    anchor_counts = []
    fg: FurediGraph | None = None
    if d.s:
        if n_prime < 3:
            msg = f"n'={n_prime} is too small to hold a Füredi block"
            raise SizeLimitError(msg)
        try:
            choice = select_q(n_prime, t)
        except InfeasibleError as exc:
            msg = f"n'={n_prime} cannot hold a Füredi block for t={t}: {exc}"
            raise SizeLimitError(msg) from exc
        fg = build_furedi(choice.q, t)
        for piece in d.t_components:
            border = 0
            for v in piece.vertices:
                border |= tree.mask(v)
            attachments = list(iter_bits(border & q_mask))
            anchors, count = _best_anchors(tree, piece, attachments, fg, t, samples, rng)
            logger.debug("piece %s: anchors %s with %d fixed embeddings", piece.vertices, anchors, count)
            # Anchors become the Q' vertices they are glued to; the rest of the block is fresh.
            label = {anchor: q_index[attachment] for attachment, anchor in zip(attachments, anchors, strict=True)}
            for v in fg.graph.vertices():
                if v not in label:
                    label[v] = order
                    order += 1
            edges += [(label[u], label[v]) for u, v in fg.graph.edges]
            anchors_used.append(anchors)
            anchor_counts.append(count)

    if order > n:
        msg = f"G0 needs {order} vertices but only n={n} are available"
        raise ConsistencyError(msg)
    graph = build_graph(n, edges)
    copies = count_k2t(graph, t).value
    if copies:
        msg = f"G0 contains {copies} copies of K_{{2,{t}}}"
        raise ConsistencyError(msg)
    return G0Construction(
        graph=graph,
        n=n,
        t=t,
        n_prime=n_prime,
        q=fg.q if fg else None,
        q_prime_vertices=q_index,
        pendant_groups=pendant_groups,
        anchors=anchors_used,
        anchor_embeddings=anchor_counts,
    )


# Forbidden-graph classification


def match_k2rpq(f: Graph) -> tuple[int, int, int] | None:
    """(p, q, r) with f isomorphic to K_{2,r}^{p,q} and p >= q, preferring the largest r."""
    best: tuple[int, int, int] | None = None
    full = (1 << f.order) - 1
    for u in f.vertices():
        for v in range(u + 1, f.order):
            if f.has_edge(u, v):
                continue
            mu, mv = f.mask(u), f.mask(v)
            if mu | mv | 1 << u | 1 << v != full:
                continue
            common = mu & mv
            if any(f.degree(w) != 2 for w in iter_bits(common)):
                continue
            own_u, own_v = mu & ~common, mv & ~common
            if any(f.degree(w) != 1 for w in iter_bits(own_u | own_v)):
                continue
            p, q, r = own_u.bit_count(), own_v.bit_count(), common.bit_count()
            candidate = (max(p, q), min(p, q), r)
            if p + q + r and (best is None or r > best[2] or (r == best[2] and candidate > best)):
                best = candidate
    return best


def _growth(case: ForbiddenCase, t: int, params: tuple[int, int, int] | None, beta: int | None, chi: int) -> str:
    match case:
        case ForbiddenCase.ZERO:
            return "0"
        case ForbiddenCase.CLIQUE_BLOCKS:
            return "Theta(n)"
        case ForbiddenCase.FUREDI_QUADRATIC:
            r = params[2] if params else 0
            return f"(1+o(1)) C(n,2) C({r - 1},{t})"
        case ForbiddenCase.BIPARTITE_OTHER:
            beta = beta or 0
            if beta <= 1:
                return "O(n)"
            if beta < t:
                return f"(1+o(1)) N(K_{{2,{t}}}, K_{{{beta - 1},n-{beta - 1}}}) = Theta(n^{t})"
            if beta == t:
                return f"Theta(n^{t})"
            return f"Omega(n^{t}), O(n^({t}+2-2*{t}/{beta}))"
        case _:
            return f"(1+o(1)) N(K_{{2,{t}}}, M({chi - 1},{t})) = Theta(n^{t + 2})"


def classify_forbidden(f: Graph, t: int) -> Classification:
    """Case of ex(n, K_{2,t}, F): ZERO, CLIQUE_BLOCKS, FUREDI_QUADRATIC, BIPARTITE_OTHER or CHROMATIC."""
    if t < 2:
        msg = f"t must be at least 2, got {t}"
        raise ParameterError(msg)
    if f.order == 0:
        raise ParameterError("the forbidden graph must have at least one vertex")
    chi = chromatic_number(f)
    beta = bipartite_beta(f)
    params = None
    if f.order <= t + 2 and contains(complete_bipartite(2, t), f):
        case = ForbiddenCase.ZERO
    elif (shape := match_k2rpq(f)) is not None and (shape[2] > t or sum(shape) > t):
        params = shape
        case = ForbiddenCase.FUREDI_QUADRATIC if shape[2] > t else ForbiddenCase.CLIQUE_BLOCKS
    elif beta is not None:
        case = ForbiddenCase.BIPARTITE_OTHER
    else:
        case = ForbiddenCase.CHROMATIC
    if f.edge_count == 0:
        # Every host on at least |V(F)| vertices contains an edgeless F, so only smaller hosts are F-free.
        growth = f"0 for n >= {f.order}"
    else:
        growth = _growth(case, t, params, beta, chi)
    return Classification(case=case, params=params, beta=beta, chi=chi, growth=growth)


class Candidate(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    graph: Graph = Field(..., exclude=True)
    k2t: int


def _fallback(f: Graph, n: int) -> tuple[str, Graph]:
    if any(f.degree(v) == 0 for v in f.vertices()):
        return "empty", empty_graph(n)
    return f"K_{f.order - 1} padded", pad(complete_graph(min(f.order - 1, n)), n)


def construction_candidates(f: Graph, n: int, t: int) -> list[tuple[str, Graph]]:
    """The constructions used for the case of ``f``, unfiltered."""
    c = classify_forbidden(f, t)
    found = [_fallback(f, n)]
    match c.case:
        case ForbiddenCase.CLIQUE_BLOCKS | ForbiddenCase.FUREDI_QUADRATIC:
            p, q, r = c.params or (0, 0, 0)
            m = p + q + r + 1
            found.append((f"clique blocks K_{m}", clique_blocks(n, m)))
            found.append((f"clique blocks K_{m}, leftover isolated", clique_blocks(n, m, include_leftover=False)))
            if c.case is ForbiddenCase.FUREDI_QUADRATIC and n >= 3:
                try:
                    q_r = select_q(n, r).q
                except InfeasibleError:
                    logger.debug("no Füredi block F(%d, %d) fits n=%d", n, r, n)
                else:
                    found.append((f"F({q_r}, {r}) padded", pad(build_furedi(q_r, r).graph, n)))
        case ForbiddenCase.BIPARTITE_OTHER:
            beta = c.beta or 0
            if 2 <= beta < t and n >= beta - 1:
                found.append((f"K_{{{beta - 1},{n - beta + 1}}}", complete_bipartite(beta - 1, n - beta + 1)))
            if beta >= 3 and n >= 2:
                found.append((f"K_{{2,{n - 2}}}", complete_bipartite(2, n - 2)))
        case ForbiddenCase.CHROMATIC:
            k = c.chi - 1
            if k <= n:
                if n <= MULTIPARTITE_MAX_N and _partition_count(n, k) <= MULTIPARTITE_MAX_PROFILES:
                    parts = optimize_multipartite(n, k, t).parts
                else:
                    parts = [n // k + (1 if i < n % k else 0) for i in range(k)]
                found.append((f"complete {k}-partite {parts}", complete_multipartite(parts)))
        case _:
            pass
    return found


def best_known_construction(f: Graph, n: int, t: int) -> Candidate:
    """The F-free n-vertex candidate with the most copies of K_{2,t}."""
    best: Candidate | None = None
    for name, graph in construction_candidates(f, n, t):
        if contains(graph, f):
            logger.debug("candidate %s contains the forbidden graph; skipped", name)
            continue
        k2t = count_k2t(graph, t).value
        if best is None or k2t > best.k2t:
            best = Candidate(name=name, graph=graph, k2t=k2t)
    if best is None:
        best = Candidate(name="empty", graph=empty_graph(n), k2t=0)
    return best
