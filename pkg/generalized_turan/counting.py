"""Embedding, automorphism and copy counts of a pattern graph in a host graph.

Counts are of subgraphs, never induced subgraphs, and always exact Python integers.
"""

import logging
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from enum import StrEnum
from itertools import combinations
from math import comb, factorial, prod

from pydantic import BaseModel, Field, model_validator

from generalized_turan.errors import ConsistencyError, InvalidGraphError, ParameterError, SizeLimitError
from generalized_turan.graph_core import Graph, iter_bits

logger = logging.getLogger(__name__)

AUTOMORPHISM_SELF_EMBEDDING_MAX_ORDER = 12
MAX_PENDANTS = 6


class CountMode(StrEnum):
    TOTAL = "total"
    FIXED_ANCHORS = "fixed-anchors"
    EXISTENCE = "existence"


class EmbeddingCount(BaseModel):
    value: int = Field(..., ge=0, description="exact count")
    mode: CountMode = CountMode.TOTAL

    @model_validator(mode="after")
    def _existence_is_boolean(self) -> "EmbeddingCount":
        if self.mode is CountMode.EXISTENCE and self.value not in (0, 1):
            msg = f"existence counts are 0 or 1, got {self.value}"
            raise ValueError(msg)
        return self


class FixedEmbeddingCount(EmbeddingCount):
    """Embeddings with prescribed anchor images, plus the fixed-leaf bound when it applies."""

    mode: CountMode = CountMode.FIXED_ANCHORS
    anchors_are_leaves: bool = False
    distance_condition: bool | None = Field(
        default=None, description="pairwise tree distance of the anchors exceeds 2 (trees with leaf anchors only)"
    )
    bound: float | None = Field(default=None, description="(t-1)^((v-1)/2) n^((v-2l+1)/2) for the supplied t")


def _set_partitions(items: list[int]) -> list[list[list[int]]]:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    result = []
    for partition in _set_partitions(rest):
        result.append([[first], *partition])
        for i in range(len(partition)):
            result.append([*partition[:i], [first, *partition[i]], *partition[i + 1 :]])
    return result


def _falling(n: int, k: int) -> int:
    return prod(range(n - k + 1, n + 1)) if n >= k else 0


class _EmbeddingSearch:
    """Backtracking embedder over integer bitmask adjacency.

    Degree-one vertices hanging off a vertex of degree at least two are left out of the
    search; once every other vertex is placed their injective placements are counted by
    inclusion-exclusion over set partitions with Moebius weights
    ``(-1)^(|B|-1) (|B|-1)!``.
    """

    def __init__(self, h: Graph, g: Graph, fixed: dict[int, int] | None = None, existence: bool = False):
        self.hmasks = h.masks
        self.gmasks = g.masks
        self.existence = existence
        self.hdeg = h.degrees()
        gdeg = g.degrees()
        top = max(self.hdeg, default=0)
        self.deg_ok = [sum(1 << w for w in g.vertices() if gdeg[w] >= d) for d in range(top + 1)]
        self.image = [-1] * h.order
        self.used = 0
        self.placed = 0
        self.consistent = True
        fixed = fixed or {}
        for x, w in fixed.items():
            self._assign(x, w)
        for x, w in fixed.items():
            if gdeg[w] < self.hdeg[x]:
                self.consistent = False
            for y in iter_bits(self.hmasks[x] & self.placed):
                if not self.gmasks[w] >> self.image[y] & 1:
                    self.consistent = False

        pendants: list[int] = []
        if not existence:
            for x in h.vertices():
                if x in fixed or self.hdeg[x] != 1 or len(pendants) == MAX_PENDANTS:
                    continue
                parent = self.hmasks[x].bit_length() - 1
                if self.hdeg[parent] >= 2:
                    pendants.append(x)
        self.pendant_parents = [self.hmasks[x].bit_length() - 1 for x in pendants]
        pendant_set = set(pendants)
        self.core = [x for x in h.vertices() if x not in fixed and x not in pendant_set]
        self.single_parent = len(set(self.pendant_parents)) <= 1
        self.partitions = [] if self.single_parent else self._weighted_partitions(len(pendants))

    @staticmethod
    def _weighted_partitions(k: int) -> list[tuple[int, list[list[int]]]]:
        weighted = []
        for partition in _set_partitions(list(range(k))):
            weight = prod((-1) ** (len(block) - 1) * factorial(len(block) - 1) for block in partition)
            weighted.append((weight, partition))
        return weighted

    def _assign(self, x: int, w: int) -> None:
        self.image[x] = w
        self.used |= 1 << w
        self.placed |= 1 << x

    def _release(self, x: int, w: int) -> None:
        self.image[x] = -1
        self.used &= ~(1 << w)
        self.placed &= ~(1 << x)

    def _candidates(self, x: int) -> int:
        cand = self.deg_ok[self.hdeg[x]] & ~self.used
        for y in iter_bits(self.hmasks[x] & self.placed):
            cand &= self.gmasks[self.image[y]]
        return cand

    def _pick(self) -> tuple[int, int]:
        """Unplaced core vertex with the fewest candidates, preferring ones next to placed vertices."""
        best_key: tuple[int, int, int, int] | None = None
        best = (-1, 0)
        for x in self.core:
            if self.image[x] >= 0:
                continue
            cand = self._candidates(x)
            key = (0 if self.hmasks[x] & self.placed else 1, cand.bit_count(), -self.hdeg[x], x)
            if best_key is None or key < best_key:
                best_key, best = key, (x, cand)
                if not cand:
                    break
        return best

    def _pendant_total(self) -> int:
        if not self.pendant_parents:
            return 1
        free = ~self.used
        if self.single_parent:
            pool = (self.gmasks[self.image[self.pendant_parents[0]]] & free).bit_count()
            return _falling(pool, len(self.pendant_parents))
        sets = [self.gmasks[self.image[p]] & free for p in self.pendant_parents]
        total = 0
        for weight, partition in self.partitions:
            term = weight
            for block in partition:
                common = sets[block[0]]
                for i in block[1:]:
                    common &= sets[i]
                size = common.bit_count()
                if not size:
                    term = 0
                    break
                term *= size
            total += term
        return total

    def _extend(self, remaining: int) -> int:
        if remaining == 0:
            return 1 if self.existence else self._pendant_total()
        x, cand = self._pick()
        total = 0
        for w in iter_bits(cand):
            self._assign(x, w)
            total += self._extend(remaining - 1)
            self._release(x, w)
            if self.existence and total:
                return 1
        return total

    def unplaced_core(self) -> int:
        return sum(1 for x in self.core if self.image[x] < 0)

    def root(self) -> tuple[int, int]:
        """First branching vertex and its candidate images."""
        return self._pick()

    def count(self) -> int:
        if not self.consistent:
            return 0
        return self._extend(self.unplaced_core())

    def count_rooted(self, x: int, w: int) -> int:
        if not self.consistent:
            return 0
        self._assign(x, w)
        try:
            return self._extend(self.unplaced_core())
        finally:
            self._release(x, w)


def _count_branch(
    h_masks: tuple[int, ...],
    g_masks: tuple[int, ...],
    fixed: dict[int, int],
    existence: bool,
    x: int,
    images: list[int],
) -> int:
    search = _EmbeddingSearch(Graph.from_masks(h_masks), Graph.from_masks(g_masks), fixed, existence)
    total = 0
    for w in images:
        total += search.count_rooted(x, w)
        if existence and total:
            return 1
    return total


def _run(h: Graph, g: Graph, fixed: dict[int, int], existence: bool, jobs: int) -> int:
    if h.order > g.order:
        return 0
    search = _EmbeddingSearch(h, g, fixed, existence)
    if jobs <= 1 or not search.consistent or search.unplaced_core() < 2:
        return search.count()
    x, cand = search.root()
    images = list(iter_bits(cand))
    if len(images) < 2:
        return search.count()
    chunks = [images[i::jobs] for i in range(min(jobs, len(images)))]
    logger.debug("splitting %d root images of vertex %d over %d workers", len(images), x, len(chunks))
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [pool.submit(_count_branch, h.masks, g.masks, fixed, existence, x, chunk) for chunk in chunks]
        total = sum(future.result() for future in futures)
    return min(total, 1) if existence else total


def count_embeddings(h: Graph, g: Graph, existence_only: bool = False, jobs: int = 1) -> EmbeddingCount:
    """Number of injective adjacency-preserving maps V(h) -> V(g)."""
    value = _run(h, g, {}, existence_only, jobs)
    return EmbeddingCount(value=value, mode=CountMode.EXISTENCE if existence_only else CountMode.TOTAL)


def contains(g: Graph, h: Graph) -> bool:
    """Whether ``g`` has a (not necessarily induced) subgraph isomorphic to ``h``."""
    return _run(h, g, {}, True, 1) == 1


def count_embeddings_fixed(
    t_graph: Graph,
    anchors: Sequence[int],
    g: Graph,
    images: Sequence[int],
    t: int | None = None,
    jobs: int = 1,
) -> FixedEmbeddingCount:
    """Embeddings of ``t_graph`` into ``g`` sending ``anchors[i]`` to ``images[i]``."""
    if len(anchors) != len(images):
        msg = f"{len(anchors)} anchors but {len(images)} images"
        raise ParameterError(msg)
    if len(set(anchors)) != len(anchors):
        msg = f"anchors must be distinct, got {list(anchors)}"
        raise ParameterError(msg)
    if len(set(images)) != len(images):
        msg = f"images must be distinct, got {list(images)}"
        raise ParameterError(msg)
    for x in anchors:
        if not 0 <= x < t_graph.order:
            msg = f"anchor {x} is not a vertex of the pattern"
            raise InvalidGraphError(msg)
    for w in images:
        if not 0 <= w < g.order:
            msg = f"image {w} is not a vertex of the host"
            raise InvalidGraphError(msg)

    value = _run(t_graph, g, dict(zip(anchors, images, strict=True)), False, jobs)
    is_tree = t_graph.is_tree()
    leaves = is_tree and all(t_graph.degree(x) == 1 for x in anchors)
    distance_condition = None
    if leaves:
        distance_condition = all(t_graph.distances_from(a)[b] > 2 for a, b in combinations(anchors, 2))
    bound = None
    if t is not None and is_tree:
        v = t_graph.order
        bound = (t - 1) ** ((v - 1) / 2) * g.order ** ((v - 2 * len(anchors) + 1) / 2)
    return FixedEmbeddingCount(
        value=value, anchors_are_leaves=leaves, distance_condition=distance_condition, bound=bound
    )


def _tree_centers(h: Graph) -> list[int]:
    degree = h.degrees()
    remaining = h.order
    layer = [v for v in h.vertices() if degree[v] <= 1]
    removed = set(layer)
    while remaining > 2:
        remaining -= len(layer)
        following = []
        for v in layer:
            for w in iter_bits(h.mask(v)):
                if w in removed:
                    continue
                degree[w] -= 1
                if degree[w] == 1:
                    following.append(w)
                    removed.add(w)
        layer = following
    return layer


def _rooted_form(h: Graph, v: int, parent: int) -> tuple[str, int]:
    """AHU code of the subtree at ``v`` and the size of its automorphism group."""
    children = [_rooted_form(h, w, v) for w in iter_bits(h.mask(v)) if w != parent]
    codes = sorted(code for code, _ in children)
    automorphisms = prod(count for _, count in children) * prod(factorial(m) for m in Counter(codes).values())
    return "(" + "".join(codes) + ")", automorphisms


def automorphism_count(h: Graph) -> int:
    """|Aut(h)|: AHU multiplicities for trees, self-embedding count for small non-trees."""
    if h.order <= 1:
        return 1
    if h.is_tree():
        centers = _tree_centers(h)
        if len(centers) == 1:
            return _rooted_form(h, centers[0], -1)[1]
        c1, c2 = centers
        code1, aut1 = _rooted_form(h, c1, c2)
        code2, aut2 = _rooted_form(h, c2, c1)
        return aut1 * aut2 * (2 if code1 == code2 else 1)
    if h.order > AUTOMORPHISM_SELF_EMBEDDING_MAX_ORDER:
        msg = f"automorphism count of a non-tree needs order <= {AUTOMORPHISM_SELF_EMBEDDING_MAX_ORDER}, got {h.order}"
        raise SizeLimitError(msg)
    return count_embeddings(h, h).value


def count_copies(h: Graph, g: Graph, jobs: int = 1) -> EmbeddingCount:
    """Unlabelled copies of ``h`` in ``g``: embeddings divided by automorphisms."""
    embeddings = count_embeddings(h, g, jobs=jobs).value
    automorphisms = automorphism_count(h)
    copies, remainder = divmod(embeddings, automorphisms)
    if remainder:
        msg = f"{embeddings} embeddings are not divisible by {automorphisms} automorphisms"
        raise ConsistencyError(msg)
    return EmbeddingCount(value=copies)


def count_k2t(g: Graph, t: int) -> EmbeddingCount:
    """Copies of K_{2,t} via codegrees; each C_4 has two diagonals, hence the halving at t = 2."""
    if t < 2:
        msg = f"t must be at least 2, got {t}"
        raise ParameterError(msg)
    masks = g.masks
    total = 0
    for u in range(g.order):
        mu = masks[u]
        if mu.bit_count() < t:
            continue
        for v in range(u + 1, g.order):
            c = (mu & masks[v]).bit_count()
            if c >= t:
                total += comb(c, t)
    if t == 2:
        total //= 2
    return EmbeddingCount(value=total)
